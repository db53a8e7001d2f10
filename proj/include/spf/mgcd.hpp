#pragma once

#include "spf/sparseinterp.hpp"

namespace spf {

struct GcdConfig {
    int weight_trials = 16;       // random regularizing-weight probes
    i64 ecart_threshold_mul = 4;  // choose the weight route when ec <= mul * max-degree
    int refresh_cap = 4;          // offset refreshes per level before giving up
};

// Iterative gcd: projects to one variable, then reintroduces x_2, ..., x_n one
// at a time, interpolating each level from per-point univariate gcds anchored
// by the previous level.
SparsePoly gcd_iterative(const PrimeField& F, const SparsePoly& p, const SparsePoly& q,
                         Rng& rng, const GcdConfig& cfg = {});

// Regularizing-weight gcd: tags both inputs, computes monic univariate gcds in
// the tag variable along one geometric sequence, interpolates the Laurent
// result per t-level with adaptive doubling, then untags.
SparsePoly gcd_regularizing(const PrimeField& F, const SparsePoly& p, const SparsePoly& q,
                            Rng& rng, const GcdConfig& cfg = {});

// Dispatcher: weight route when a low-ecart regularizing weight turns up,
// iterative route otherwise; either way the result divides both inputs
// (verified) and is normalized to graded-lex leading coefficient 1.
SparsePoly gcd(const PrimeField& F, const SparsePoly& p, const SparsePoly& q, Rng& rng,
               const GcdConfig& cfg = {});

// Deterministic primitive-PRS gcd on the recursive dense view. Exponential in
// the worst case; the fallback when the field is too small for Kronecker
// windows, and directly usable as a cross-check.
SparsePoly gcd_dense(const PrimeField& F, const SparsePoly& p, const SparsePoly& q);

}  // namespace spf
