#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hilbertop/normest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CliRun {
    int code = -1;
    std::string out;
};

// Runs the real binary through a shell so argv parsing, exit codes and file
// side effects are all exercised end to end.
CliRun run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd = std::string(HILBERTOP_CLI_PATH) + " " + args +
                            (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliRun r;
    char buf[512];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    const int raw = pclose(pipe);
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

fs::path temp_file(const char* name) { return fs::temp_directory_path() / name; }

const std::string kClassical = "--p 2 --q 2 --lambda 1 --mu 0 --nu 0 --alpha 0 --beta 0";

}  // namespace

TEST_CASE("classify emits the documented JSON and exit codes", "[cli]") {
    SECTION("classical tuple is bounded with sharp norm pi") {
        const CliRun r = run_cli("classify " + kClassical);
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j.size() == 5);
        CHECK(j["status"] == "bounded");
        CHECK(j["theorem"] == "discrete:p<=q<inf");
        REQUIRE(j["sharp_norm"].is_number());
        CHECK(j["sharp_norm"].get<double>() == Catch::Approx(kPi).epsilon(1e-12));
        CHECK(j["advisory"]["applicable"].get<bool>());
        CHECK(j["advisory"]["condition_holds"].get<bool>());
        CHECK(j["inputs"]["lambda"].get<double>() == 1.0);
        CHECK(j["inputs"]["p"] == "2");
        CHECK(j["inputs"]["setting"] == "discrete");
    }
    SECTION("half line with lambda = 2 is unbounded") {
        const CliRun r = run_cli("classify --continuous --p 2 --q 2 --lambda 2 --mu 0 --nu 0 "
                                 "--alpha 0 --beta 0");
        REQUIRE(r.code == 1);
        const json j = json::parse(r.out);
        CHECK(j["status"] == "unbounded");
        CHECK(j["sharp_norm"].is_null());
    }
    SECTION("p > q has no criterion") {
        const CliRun r =
            run_cli("classify --p 2 --q 1 --lambda 1 --mu 0 --nu 0 --alpha 0 --beta 0");
        REQUIRE(r.code == 2);
        CHECK(json::parse(r.out)["status"] == "inapplicable");
    }
    SECTION("the flag value inf selects the supremum norm") {
        const CliRun r =
            run_cli("classify --p inf --q inf --lambda 3 --mu 0 --nu 0 --alpha 0 --beta 0");
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["theorem"] == "discrete:p=q=inf");
        CHECK(j["inputs"]["p"] == "inf");
    }
}

TEST_CASE("unusable invocations exit with 64 and a message", "[cli]") {
    for (const std::string bad : {
             std::string("classify --q 2 --lambda 1 --mu 0 --nu 0 --alpha 0 --beta 0"),
             "classify " + kClassical + " --p banana",
             "classify " + kClassical + " --p 0.5",
             std::string("frobnicate"),
             std::string(""),
             "norm " + kClassical + " --method warp",
         }) {
        CAPTURE(bad);
        const CliRun r = run_cli(bad, true);
        CHECK(r.code == 64);
        CHECK(!r.out.empty());
    }
}

TEST_CASE("norm methods produce their estimates or a reasoned rejection", "[cli]") {
    SECTION("sharp returns the closed-form constant") {
        const CliRun r = run_cli("norm " + kClassical + " --method sharp");
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["value"].get<double>() == Catch::Approx(kPi).epsilon(1e-12));
        CHECK(j["lower"] == j["upper"]);
        CHECK(j["upper_method"] == "sharp-constant");
        CHECK(j["certified"].get<bool>());
    }
    SECTION("sharp off the scaling line is rejected with the failing hypothesis") {
        const CliRun r = run_cli("norm --p 2 --q 2 --lambda 1.5 --mu 0 --nu 0 --alpha 0 "
                                 "--beta 0 --method sharp",
                                 true);
        CHECK(r.code == 2);
        CHECK(r.out.find("scaling line") != std::string::npos);
    }
    SECTION("spectral at truncation 1 is the single matrix entry") {
        const CliRun r = run_cli("norm " + kClassical + " --method spectral --trunc 1");
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["value"].get<double>() == Catch::Approx(0.5).margin(1e-14));
        CHECK(j["lower_method"] == "spectral N=1");
    }
    SECTION("spectral outside p = q = 2 is rejected") {
        const CliRun r = run_cli("norm --p 3 --q 3 --lambda 1 --mu 0 --nu 0 --alpha 0 --beta 0 "
                                 "--method spectral",
                                 true);
        CHECK(r.code == 2);
        CHECK(r.out.find("p = q = 2") != std::string::npos);
    }
    SECTION("bracket under the default schedule encloses pi") {
        const CliRun r = run_cli("norm " + kClassical + " --method bracket");
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        // Achieved enclosure of the default schedule, frozen by a reference
        // run: the upper end is sharp, the lower end sits 0.812 below pi.
        CHECK(j["upper"].get<double>() == Catch::Approx(kPi).epsilon(1e-12));
        CHECK(j["lower"].get<double>() ==
              Catch::Approx(2.3304461601744593).epsilon(1e-9));
        CHECK(j["lower_method"] == "spectral N=2048");
        CHECK(j["upper_method"] == "sharp-constant");
        CHECK(j["certified"].get<bool>());
    }
    SECTION("schur upper bound for the square kernel") {
        const CliRun r = run_cli("norm --p 2 --q 2 --lambda 2 --mu 0 --nu 0 --alpha 0 --beta 0 "
                                 "--method schur");
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["value"].get<double>() ==
              Catch::Approx(1.6118548977355689).epsilon(1e-9));
        CHECK(j["lower"].is_null());
        CHECK(j["certified"].get<bool>());
    }
    SECTION("extremal on the half line maps eps to the cutoff z = 1/eps") {
        const CliRun r = run_cli("norm " + kClassical +
                                 " --continuous --method extremal --eps 1e-3");
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["value"].get<double>() ==
              Catch::Approx(3.067476770458522).epsilon(1e-9));
        CHECK(j["lower_method"] == "extremal z=1000");
    }
}

TEST_CASE("sweep writes the fixed-header CSV over the requested grid", "[cli]") {
    const std::string fixed = "--p 2 --q 2 --mu 0 --nu 0 --alpha 0 --beta 0";

    SECTION("lambda grid with the boundedness flip at 1") {
        const fs::path out = temp_file("hilbertop_test_lambda.csv");
        const CliRun r = run_cli("sweep --param lambda --start 0.5 --stop 3 --step 0.25 " +
                                 fixed + " --out " + out.string());
        REQUIRE(r.code == 0);
        const auto lines = read_lines(out);
        REQUIRE(lines.size() == 12);
        CHECK(lines[0] == "value,status,sharp_norm,schur_best,lower");
        int flips = 0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const double value = std::stod(lines[i]);
            const bool bounded = lines[i].find(",bounded,") != std::string::npos;
            CHECK(bounded == (value >= 1.0));
            if (i > 1) {
                const bool prev = lines[i - 1].find(",bounded,") != std::string::npos;
                flips += prev != bounded;
            }
        }
        CHECK(flips == 1);
        fs::remove(out);
    }
    SECTION("empty range produces one row; requested columns are filled") {
        const fs::path out = temp_file("hilbertop_test_single.csv");
        const CliRun r = run_cli("sweep --param lambda --start 2 --stop 2 --step 0.5 " + fixed +
                                 " --with-schur --with-lower --out " + out.string());
        REQUIRE(r.code == 0);
        const auto lines = read_lines(out);
        REQUIRE(lines.size() == 2);
        // lambda = 2 sits off the scaling line: no sharp constant, but the
        // search and the test-vector bound both produce numbers.
        CHECK(lines[1].rfind("2,bounded,,", 0) == 0);
        const auto last_comma = lines[1].rfind(',');
        CHECK(std::stod(lines[1].substr(11)) == Catch::Approx(1.6118548977355689).epsilon(1e-9));
        CHECK(std::stod(lines[1].substr(last_comma + 1)) > 0.19);
        fs::remove(out);
    }
    SECTION("unwritable path exits 73") {
        const CliRun r = run_cli("sweep --param lambda --start 1 --stop 2 --step 1 " + fixed +
                                     " --out /nonexistent-dir/x.csv",
                                 true);
        CHECK(r.code == 73);
        CHECK(!r.out.empty());
    }
    SECTION("invalid grids and names exit 64") {
        const fs::path out = temp_file("hilbertop_test_bad.csv");
        for (const std::string bad : {
                 "sweep --param lambda --start 1 --stop 2 --step 0 ",
                 "sweep --param lambda --start 2 --stop 1 --step 0.5 ",
                 "sweep --param gamma --start 1 --stop 2 --step 0.5 ",
             }) {
            CAPTURE(bad);
            const CliRun r = run_cli(bad + fixed + " --out " + out.string(), true);
            CHECK(r.code == 64);
        }
        // A non-swept exponent left unpinned is a flag error too.
        const CliRun r = run_cli("sweep --param lambda --start 1 --stop 2 --step 0.5 "
                                 "--p 2 --q 2 --nu 0 --alpha 0 --beta 0 --out " +
                                     out.string(),
                                 true);
        CHECK(r.code == 64);
        CHECK(r.out.find("--mu") != std::string::npos);
    }
}

TEST_CASE("verify lists criteria and runs chosen subsets", "[cli]") {
    SECTION("--list prints the twelve identifiers") {
        const CliRun r = run_cli("verify --list");
        REQUIRE(r.code == 0);
        const auto n = std::count(r.out.begin(), r.out.end(), '\n');
        CHECK(n == 12);
        CHECK(r.out.find("sharp-norm-values\n") != std::string::npos);
        CHECK(r.out.find("cli-contract\n") != std::string::npos);
    }
    SECTION("a single fast criterion passes") {
        const CliRun r = run_cli("verify --only sharp-norm-values");
        REQUIRE(r.code == 0);
        CHECK(r.out.find("PASS") != std::string::npos);
        CHECK(r.out.find("sharp-norm-values") != std::string::npos);
    }
    SECTION("unknown identifiers are flag errors") {
        CHECK(run_cli("verify --only no-such-check", true).code == 64);
    }
}

TEST_CASE("configuration file feeds defaults, flags win", "[cli]") {
    const fs::path cfg = temp_file("hilbertop_test_config.txt");
    {
        std::ofstream out(cfg);
        out << "# reference setup\n"
               "trunc = 1\n"
               "iters = 50\n";
    }
    SECTION("file value reaches the computation") {
        const CliRun r =
            run_cli("norm " + kClassical + " --method spectral --config " + cfg.string());
        REQUIRE(r.code == 0);
        CHECK(json::parse(r.out)["value"].get<double>() == Catch::Approx(0.5).margin(1e-14));
    }
    SECTION("explicit flag overrides the file") {
        const CliRun r = run_cli("norm " + kClassical + " --method spectral --config " +
                                 cfg.string() + " --trunc 2");
        REQUIRE(r.code == 0);
        const hilbertop::Problem classical{hilbertop::Exponents{1, 0, 0},
                                           hilbertop::SpaceIndex(2, 0),
                                           hilbertop::SpaceIndex(2, 0),
                                           hilbertop::Setting::discrete};
        const double expect = hilbertop::spectral_norm_l2(classical, 2, 50);
        CHECK(json::parse(r.out)["value"].get<double>() ==
              Catch::Approx(expect).epsilon(1e-12));
    }
    SECTION("unknown keys are rejected") {
        const fs::path bad = temp_file("hilbertop_test_config_bad.txt");
        {
            std::ofstream out(bad);
            out << "truncc = 7\n";
        }
        CHECK(run_cli("norm " + kClassical + " --method spectral --config " + bad.string(),
                      true)
                  .code == 64);
        fs::remove(bad);
    }
    fs::remove(cfg);
}
