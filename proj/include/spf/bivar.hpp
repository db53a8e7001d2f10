#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spf/sparsepoly.hpp"
#include "spf/unipoly.hpp"

namespace spf {

// Dense bivariate polynomial, x-major: rows[i] is the coefficient of x^i,
// itself a dense polynomial in y. Doubles as a truncatable power series in y.
struct BivPoly {
    std::vector<DensePoly> rows;

    BivPoly() = default;

    bool is_zero() const { return rows.empty(); }
    i64 deg_x() const { return static_cast<i64>(rows.size()) - 1; }
    i64 deg_y() const;
    i64 val_x() const;
    i64 val_y() const;
    Fp coeff(std::size_t i, std::size_t j) const {
        return i < rows.size() ? rows[i].coeff(j) : Fp{0};
    }

    void trim() {
        while (!rows.empty() && rows.back().is_zero()) rows.pop_back();
    }

    static BivPoly constant(const PrimeField& F, Fp a);
    static BivPoly from_x(const DensePoly& f);  // polynomial in x alone
    static BivPoly from_y(const DensePoly& f);  // polynomial in y alone

    friend bool operator==(const BivPoly& a, const BivPoly& b) { return a.rows == b.rows; }
};

BivPoly add(const PrimeField& F, const BivPoly& a, const BivPoly& b);
BivPoly sub(const PrimeField& F, const BivPoly& a, const BivPoly& b);
BivPoly mul(const PrimeField& F, const BivPoly& a, const BivPoly& b);
// product truncated at y^prec
BivPoly mul_trunc(const PrimeField& F, const BivPoly& a, const BivPoly& b, std::size_t prec);
BivPoly mul_scalar(const PrimeField& F, const BivPoly& a, Fp c);
BivPoly pow(const PrimeField& F, const BivPoly& a, u64 e);
BivPoly truncate_y(const BivPoly& a, std::size_t prec);
BivPoly transpose(const PrimeField& F, const BivPoly& a);
// y -> y + sigma
BivPoly shift_y(const PrimeField& F, const BivPoly& a, Fp sigma);
// x -> x + lambda*y (invertible shear; used only by the dense kernel)
BivPoly shear_x(const PrimeField& F, const BivPoly& a, Fp lambda);
DensePoly eval_y(const PrimeField& F, const BivPoly& a, Fp tau);  // poly in x
DensePoly eval_x(const PrimeField& F, const BivPoly& a, Fp sigma);  // poly in y

SparsePoly to_sparse(const PrimeField& F, const BivPoly& a);  // vars (x, y)
BivPoly from_sparse(const PrimeField& F, const SparsePoly& a);

// Division in (K[y]/y^prec)[x] by a divisor whose leading x-coefficient is
// invertible mod y^prec (unit constant term).
std::pair<BivPoly, BivPoly> series_divrem_x(const PrimeField& F, const BivPoly& a,
                                            const BivPoly& b, std::size_t prec);

// Exact polynomial quotient or nullopt.
std::optional<BivPoly> biv_exact_div(const PrimeField& F, const BivPoly& a, const BivPoly& b);

// gcd(F(sigma, y), F(tau, y)) for random sigma, tau, verified by dividing
// every x-row; falls back to the exact row gcd after 8 failures. Monic.
DensePoly content_x(const PrimeField& F, const BivPoly& a, Rng& rng);

// Decides a = c * R^l; R normalized with graded-lex leading coefficient 1.
std::optional<std::pair<Fp, BivPoly>> biv_root_extract(const PrimeField& F, const BivPoly& a,
                                                       u64 l, Rng& rng);

// Lifts a = p0*q0 at y = 0 into an exact factorization a = P*Q with
// P(x, 0) = p0 (monic), Q(x, 0) = q0. Requires cont_x a = 1,
// deg a(x,0) = deg_x a, gcd(p0, q0) = 1. Quadratic Newton iteration to
// y^(2 deg_y a + 1), then denominator recovery by rational reconstruction.
std::pair<BivPoly, BivPoly> hensel_lift_two(const PrimeField& F, const BivPoly& a,
                                            const DensePoly& p0, const DensePoly& q0,
                                            Rng& rng);

// Lifts a(x,0) = prod p0[i]^mult[i] (pairwise coprime, all monic, the product
// exactly a(x,0)) into a = prod P_i^mult_i with P_i(x,0) = p0[i]; blockwise
// two-factor lifts plus root extraction for mult > 1.
std::vector<BivPoly> hensel_lift_multi(const PrimeField& F, const BivPoly& a,
                                       const std::vector<DensePoly>& p0,
                                       const std::vector<int>& mult, Rng& rng);

struct BivFactorization {
    Fp unit;
    std::vector<std::pair<BivPoly, int>> parts;  // normalized, multiplicity
};

// Square-free factorization a = unit * prod parts^mult via a random y-shift,
// univariate decomposition of a(x,0), and multifactor lifting.
BivFactorization biv_squarefree(const PrimeField& F, const BivPoly& a, Rng& rng);

// Irreducible factorization over F_p.
BivFactorization biv_factor(const PrimeField& F, const BivPoly& a, Rng& rng);

// F(x t^p, t^q) * t^(-q val_w F) for the weight w = (p, q); gcd(|p|, q) = 1.
BivPoly single_slope_transform(const PrimeField& F, const BivPoly& a, i64 p_slope,
                               i64 q_slope);

// Two-factor lift when the Newton polygon of `a` has the single declared edge
// of slope p/q, given the edge factors tp_w a = tpP * tpQ.
std::pair<BivPoly, BivPoly> hensel_lift_single_slope(const PrimeField& F, const BivPoly& a,
                                                     const BivPoly& tpP, const BivPoly& tpQ,
                                                     i64 p_slope, i64 q_slope, Rng& rng);

}  // namespace spf
