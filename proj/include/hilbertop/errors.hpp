#pragma once

#include <stdexcept>
#include <string>

namespace hilbertop {

// Thrown when a closed-form integral is requested outside its convergence
// region.
struct divergent_integral : std::domain_error {
    explicit divergent_integral(const std::string& what) : std::domain_error(what) {}
};

// Thrown when a series bound is requested for exponents where the series
// itself diverges.
struct divergent_series : std::domain_error {
    explicit divergent_series(const std::string& what) : std::domain_error(what) {}
};

}  // namespace hilbertop
