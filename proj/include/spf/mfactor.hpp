#pragma once

#include <string>

#include "spf/bivar.hpp"
#include "spf/mreduce.hpp"

namespace spf {

// unit * prod factors[i]^mult_i, factors normalized (graded-lex lc 1),
// pairwise distinct, sorted canonically; re-expansion equals the source.
struct Factorization {
    Fp unit{1};
    std::vector<std::pair<SparsePoly, int>> factors;
};

// per-level diagnostics of the lifting pipeline
struct LiftReport {
    struct Level {
        int level = 0;
        std::size_t points = 0;
        int retries = 0;
        std::string note;
    };
    std::vector<Level> levels;
};

struct FactorOptions {
    int anchor_retries = 4;        // fresh anchor draws before the substitution fallback
    bool allow_substitution = true;  // one random monomial substitution before giving up
};

// Lifts a coprime two-factor split of F^[2] through x_3, ..., x_n; per level,
// bivariate Hensel lifts at geometric points plus known-support interpolation.
// Throws lift_error when no such factorization exists or a point degenerates.
std::pair<SparsePoly, SparsePoly> lift_two(const PrimeField& F, const SparsePoly& f,
                                           const SparsePoly& a, const SparsePoly& b,
                                           const std::vector<Fp>& anchors, Rng& rng,
                                           LiftReport* report = nullptr);

// Multifactor version: F^[2] = lambda * prod a_i^mult_i with pairwise coprime
// a_i; returns the lifted factors in order.
std::vector<SparsePoly> lift_multi(const PrimeField& F, const SparsePoly& f,
                                   const std::vector<SparsePoly>& a,
                                   const std::vector<int>& mult, Fp lambda,
                                   const std::vector<Fp>& anchors, Rng& rng,
                                   LiftReport* report = nullptr);

// Full irreducible factorization: content handling, square-free split, then a
// bivariate base factorization lifted per square-free part, with anchor
// retries and one monomial-substitution rescue. Throws `inconclusive` when
// every strategy runs out; never returns an unverified factorization.
Factorization factor_irreducible(const PrimeField& F, const SparsePoly& f, Rng& rng,
                                 const FactorOptions& opts = {}, LiftReport* report = nullptr);

// Two-factor factorization by direct projective lifting (doubling bivariate
// collapses F(x_1, a^i t, ...)), given the coprime split of F(x_1, 0, ..., 0).
std::pair<SparsePoly, SparsePoly> factor_projective(const PrimeField& F, const SparsePoly& f,
                                                    const DensePoly& p0, const DensePoly& q0,
                                                    Rng& rng);

// Same through the last Newton-polygon edge: recursively factors the trailing
// part, then lifts each coprime edge bipartition with the single-slope
// transform until one verifies.
std::pair<SparsePoly, SparsePoly> factor_single_slope(const PrimeField& F, const SparsePoly& f,
                                                      Rng& rng);

}  // namespace spf
