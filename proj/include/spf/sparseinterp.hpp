#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "spf/sparsepoly.hpp"

namespace spf {

// Evaluation points beta * alpha^i with alpha the Kronecker-admissible ratio
// alpha_j = g^(D_{j-1}): the discrete log of prod alpha_j^(e_j) recovers the
// whole exponent vector as one mixed-radix integer, provided e stays inside
// the declared per-variable window [lo_j, hi_j].
class GeometricSequence {
public:
    GeometricSequence(const PrimeField& field, std::vector<i64> lo, std::vector<i64> hi,
                      Rng& rng);

    const PrimeField& field() const { return *field_; }
    int nvars() const { return static_cast<int>(lo_.size()); }
    const std::vector<Fp>& alpha() const { return alpha_; }
    const std::vector<Fp>& beta() const { return beta_; }
    const std::vector<i64>& lo() const { return lo_; }
    const std::vector<i64>& hi() const { return hi_; }
    u64 window_size() const { return window_; }

    // coordinates of the i-th evaluation point
    std::vector<Fp> point(u64 i) const;

    // prod_j alpha_j^(e_j); collisions cannot occur inside the window
    Fp root_of(const ExpVec& e) const;
    // inverse of root_of via one discrete log; nullopt outside the window
    std::optional<ExpVec> decode_root(Fp root) const;

    // fresh diversification offset (used when a point hits a zero)
    void refresh_offset(Rng& rng);

private:
    const PrimeField* field_;
    std::vector<i64> lo_, hi_;
    std::vector<Fp> alpha_, beta_;
    std::vector<u64> radix_;  // D_0 = 1, D_j = D_{j-1} * width_j
    u64 window_;              // D_n
    u64 base_log_;            // sum D_{j-1} * lo_j mod (p-1)
};

// Convenience constructor from per-variable degree bounds; laurent widens the
// window to [-delta_j, delta_j].
GeometricSequence make_sequence(const PrimeField& F, const std::vector<i64>& degree_bounds,
                                Rng& rng, bool laurent);

// result[j] = A(point(i0 + j)) for j = 0..m-1
std::vector<Fp> eval_sequence(const PrimeField& F, const SparsePoly& a,
                              const GeometricSequence& seq, u64 i0, std::size_t m);

// Minimal-length linear recurrence of `values`: returns the monic connection
// polynomial Lambda(z) = z^L - c_1 z^(L-1) - ... - c_L.
DensePoly berlekamp_massey(const PrimeField& F, const std::vector<Fp>& values);

// Recovers A from values[i] = A(point(i)), i = 0..2s-1, when A has at most s
// terms inside the window. Exact (never wrong): inconsistencies come back as
// nullopt, which signals an underestimated s or a support outside the window.
// reject_saturated makes a recurrence of full length s fail fast (adaptive
// doubling callers cannot distinguish it from an underestimate anyway).
std::optional<SparsePoly> prony_interpolate(const PrimeField& F, const std::vector<Fp>& values,
                                            const GeometricSequence& seq, std::size_t s,
                                            Rng& rng, bool reject_saturated = false);

// Coefficients on a known support from values[j] = A(point(i0 + j)),
// j = 0..support.size()-1. Throws singular_system on colliding roots.
SparsePoly interpolate_known_support(const PrimeField& F, const std::vector<ExpVec>& support,
                                     const std::vector<Fp>& values,
                                     const GeometricSequence& seq, u64 i0);

using EvalFn = std::function<Fp(const std::vector<Fp>&)>;

// One random-point identity test; nonzero coordinates keep Laurent terms safe.
bool verify_candidate(const PrimeField& F, const EvalFn& oracle, const SparsePoly& candidate,
                      Rng& rng);

// Product and exact quotient through evaluation-interpolation with adaptive
// term-bound doubling. sparse_exact_divide returns nullopt when no polynomial
// quotient inside the degree window survives verification.
SparsePoly sparse_mul(const PrimeField& F, const SparsePoly& a, const SparsePoly& b, Rng& rng);
std::optional<SparsePoly> sparse_exact_divide(const PrimeField& F, const SparsePoly& c,
                                              const SparsePoly& a, Rng& rng);

}  // namespace spf
