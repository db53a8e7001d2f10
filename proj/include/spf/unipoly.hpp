#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spf/field.hpp"

namespace spf {

// Dense univariate polynomial over F_p. coeffs[i] is the coefficient of x^i;
// the top coefficient is nonzero unless the polynomial is zero (empty vector).
struct DensePoly {
    std::vector<Fp> c;

    DensePoly() = default;
    explicit DensePoly(std::vector<Fp> coeffs) : c(std::move(coeffs)) { trim(); }

    bool is_zero() const { return c.empty(); }
    // degree of the zero polynomial is -1
    i64 deg() const { return static_cast<i64>(c.size()) - 1; }
    Fp lc() const { return c.back(); }
    Fp coeff(std::size_t i) const { return i < c.size() ? c[i] : Fp{0}; }

    void trim() {
        while (!c.empty() && c.back().v == 0) c.pop_back();
    }

    static DensePoly zero() { return DensePoly(); }
    static DensePoly constant(const PrimeField& F, Fp a) {
        DensePoly f;
        if (!F.is_zero(a)) f.c = {a};
        return f;
    }
    // x^k
    static DensePoly monomial(const PrimeField& F, std::size_t k, Fp a);

    friend bool operator==(const DensePoly& a, const DensePoly& b) { return a.c == b.c; }
};

DensePoly add(const PrimeField& F, const DensePoly& f, const DensePoly& g);
DensePoly sub(const PrimeField& F, const DensePoly& f, const DensePoly& g);
DensePoly neg(const PrimeField& F, const DensePoly& f);
DensePoly mul(const PrimeField& F, const DensePoly& f, const DensePoly& g);
DensePoly mul_scalar(const PrimeField& F, const DensePoly& f, Fp a);
DensePoly mul_xk(const DensePoly& f, std::size_t k);
DensePoly pow(const PrimeField& F, const DensePoly& f, u64 e);
DensePoly derivative(const PrimeField& F, const DensePoly& f);
Fp eval(const PrimeField& F, const DensePoly& f, Fp x);
DensePoly monic(const PrimeField& F, const DensePoly& f);
// f(x + a)
DensePoly taylor_shift(const PrimeField& F, const DensePoly& f, Fp a);

// f = q*g + r with deg r < deg g. Throws division_by_zero if g = 0.
std::pair<DensePoly, DensePoly> divrem(const PrimeField& F, const DensePoly& f,
                                       const DensePoly& g);
// Exact quotient, or nullopt if g does not divide f.
std::optional<DensePoly> exact_div(const PrimeField& F, const DensePoly& f,
                                   const DensePoly& g);

// Monic gcd; gcd(0, 0) = 0.
DensePoly gcd(const PrimeField& F, DensePoly f, DensePoly g);
// (d, u, v) with u*f + v*g = d, d the monic gcd.
struct XgcdResult {
    DensePoly d, u, v;
};
XgcdResult xgcd(const PrimeField& F, const DensePoly& f, const DensePoly& g);

// l-th root of a power series with f(0) = 1, to precision x^prec: the unique
// r with r(0) = 1 and r^l = f + O(x^prec). Requires p > prec.
DensePoly series_kth_root(const PrimeField& F, const DensePoly& f, u64 l, std::size_t prec);

// multiplicative inverse of f mod x^prec; requires f(0) != 0
DensePoly series_inverse(const PrimeField& F, const DensePoly& f, std::size_t prec);

// Decides f = c * g^l with c in K and g monic; verified by re-expansion.
// Requires p > deg f.
std::optional<std::pair<Fp, DensePoly>> root_extract(const PrimeField& F, const DensePoly& f,
                                                     u64 l);

struct UniFactorization {
    Fp unit;
    std::vector<std::pair<DensePoly, int>> parts;  // (monic factor, multiplicity)
};

// f = unit * prod parts[i]^mult_i with square-free, pairwise coprime, monic
// parts. Valid in any characteristic (p-th powers are peeled recursively).
UniFactorization squarefree_decomposition(const PrimeField& F, const DensePoly& f);

// Irreducible factorization by distinct-degree + equal-degree splitting.
// Las Vegas; requires odd p.
UniFactorization factor_univariate(const PrimeField& F, const DensePoly& f, Rng& rng);

// All roots of f in F_p, in increasing order of value, without multiplicity.
std::vector<Fp> find_roots(const PrimeField& F, const DensePoly& f, Rng& rng);
// Same, for an f already known to be a product of distinct linear factors
// (skips the x^p - x filter).
std::vector<Fp> find_roots_presplit(const PrimeField& F, const DensePoly& f, Rng& rng);

// result[i] = f(beta * alpha^i) for i = 0..m-1.
std::vector<Fp> geometric_evaluate(const PrimeField& F, const DensePoly& f, Fp beta, Fp alpha,
                                   std::size_t m);

// Unique f of degree <= values.size()-1 with f(beta * alpha^i) = values[i].
// Throws duplicate_points if the points collide.
DensePoly geometric_interpolate(const PrimeField& F, const std::vector<Fp>& values, Fp beta,
                                Fp alpha);

// Pade-style reconstruction: series known mod y^nu, returns (A, B) with
// A/B = series + O(y^nu), gcd(A, B) = 1, deg A <= dmax, B(0) != 0, B monic.
std::optional<std::pair<DensePoly, DensePoly>> rational_reconstruct(const PrimeField& F,
                                                                    const DensePoly& series,
                                                                    std::size_t nu, i64 dmax);

// Solves sum_j c_j * roots[j]^i = values[i] for i = 0..roots.size()-1.
// values may be longer than roots; extra entries are ignored here.
std::vector<Fp> transposed_vandermonde_solve(const PrimeField& F, const std::vector<Fp>& roots,
                                             const std::vector<Fp>& values);

}  // namespace spf
