#pragma once

#include <stdexcept>
#include <string>

namespace spf {

// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct division_by_zero : error {
    division_by_zero() : error("division by zero") {}
};

struct duplicate_points : error {
    duplicate_points() : error("interpolation points are not pairwise distinct") {}
};

struct singular_system : error {
    singular_system() : error("transposed Vandermonde system is singular") {}
};

struct kronecker_overflow : error {
    kronecker_overflow() : error("exponent window does not fit below ord(g)") {}
};

struct zero_polynomial : error {
    zero_polynomial() : error("operation undefined for the zero polynomial") {}
};

struct zero_substitution_for_laurent : error {
    zero_substitution_for_laurent()
        : error("cannot substitute 0 for a variable with negative exponents") {}
};

struct verification_failed : error {
    explicit verification_failed(const std::string& what)
        : error("verification failed: " + what) {}
};

struct lift_error : error {
    explicit lift_error(const std::string& what) : error("lift failed: " + what) {}
};

struct normalization_failed : error {
    explicit normalization_failed(const std::string& what)
        : error("normalization failed: " + what) {}
};

struct hypothesis_violated : error {
    explicit hypothesis_violated(const std::string& what)
        : error("hypothesis violated: " + what) {}
};

struct degenerate_shift : error {
    degenerate_shift() : error("no usable shift found") {}
};

struct inconclusive : error {
    explicit inconclusive(const std::string& what) : error("inconclusive: " + what) {}
};

struct parse_error : error {
    parse_error(const std::string& what, std::size_t pos)
        : error(what + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

struct unknown_suite : error {
    explicit unknown_suite(const std::string& name) : error("unknown suite: " + name) {}
};

}  // namespace spf
