#pragma once

#include "spf/mgcd.hpp"

namespace spf {

// Variables x_i for which cont_{x_i} F is non-trivial, by probing the content
// of the bivariate collapse F(..., alpha t, x_i, alpha t, ...). Empty means
// content-free (up to the reported failure probability).
std::vector<int> contentfree_test(const PrimeField& F, const SparsePoly& f, Rng& rng);

// cont_{x_i} and the primitive part: the content is the gcd of two random
// substitutions for x_i, verified by exact division.
std::pair<SparsePoly, SparsePoly> content_extract(const PrimeField& F, const SparsePoly& f,
                                                  int var, Rng& rng);

// Decides f = c * R^l through a regularizing weight and per-point univariate
// root extraction in the tag variable; verified by re-expansion.
std::optional<std::pair<Fp, SparsePoly>> mroot_extract(const PrimeField& F,
                                                       const SparsePoly& f, u64 l, Rng& rng);

struct SparseFactorization {
    Fp unit{1};
    std::vector<std::pair<SparsePoly, int>> parts;  // normalized, multiplicity
};

// Square-free factorization f = unit * prod parts^mult for content-free f,
// via per-point univariate decompositions in the tag variable.
SparseFactorization msquarefree(const PrimeField& F, const SparsePoly& f, Rng& rng);

}  // namespace spf
