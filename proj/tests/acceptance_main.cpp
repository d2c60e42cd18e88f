// Runs the full acceptance suite and prints one line per criterion.  The exit
// code is the test result, so ctest can gate on it directly.

#include <iostream>

#include "hilbertop/verify.hpp"

int main() {
    const hilbertop::VerifyReport report = hilbertop::run_verification();
    hilbertop::print_report(report, std::cout);
    return report.all_passed ? 0 : 1;
}
