#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "spf/field.hpp"
#include "spf/unipoly.hpp"

namespace spf {

// Exponent vector; entries may be negative (Laurent support).
using ExpVec = std::vector<i64>;

// Graded lexicographic order: first by total weight (sum of entries), ties by
// the leftmost differing entry. Fixes all canonical iteration and printing.
struct GradedLexLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const {
        i64 da = std::accumulate(a.begin(), a.end(), static_cast<i64>(0));
        i64 db = std::accumulate(b.begin(), b.end(), static_cast<i64>(0));
        if (da != db) return da < db;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

// Sparse multivariate Laurent polynomial in canonical form: a term map with
// no zero coefficients, all exponent vectors of length nvars().
class SparsePoly {
public:
    using TermMap = std::map<ExpVec, Fp, GradedLexLess>;

    explicit SparsePoly(int n = 0) : n_(n) {}

    static SparsePoly constant(const PrimeField& F, int n, Fp a) {
        SparsePoly r(n);
        if (!F.is_zero(a)) r.terms_.emplace(ExpVec(n, 0), a);
        return r;
    }
    static SparsePoly variable(const PrimeField& F, int n, int i) {
        SparsePoly r(n);
        ExpVec e(n, 0);
        e[static_cast<std::size_t>(i)] = 1;
        r.terms_.emplace(std::move(e), F.one());
        return r;
    }
    static SparsePoly monomial(const PrimeField& F, int n, ExpVec e, Fp a) {
        SparsePoly r(n);
        if (!F.is_zero(a)) r.terms_.emplace(std::move(e), a);
        return r;
    }

    int nvars() const { return n_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        const ExpVec& e = terms_.begin()->first;
        return std::all_of(e.begin(), e.end(), [](i64 x) { return x == 0; });
    }
    const TermMap& terms() const { return terms_; }

    void add_term(const PrimeField& F, const ExpVec& e, Fp c) {
        if (F.is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second = F.add(it->second, c);
            if (F.is_zero(it->second)) terms_.erase(it);
        }
    }

    // insertion when the caller guarantees c != 0 and a fresh exponent
    void insert_nonzero(ExpVec e, Fp c) { terms_.emplace(std::move(e), c); }

    // graded-lex maximal term
    const std::pair<const ExpVec, Fp>& leading_term() const {
        if (terms_.empty()) throw zero_polynomial();
        return *terms_.rbegin();
    }

    Fp coeff(const ExpVec& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Fp{0} : it->second;
    }

    i64 total_degree() const;              // max term grade; throws on zero
    i64 deg_in(int i) const;               // max exponent of x_i; throws on zero
    i64 val_in(int i) const;               // min exponent of x_i; throws on zero
    std::vector<i64> deg_vec() const;
    std::vector<i64> val_vec() const;
    bool has_negative_exponents() const;

    friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

private:
    int n_;
    TermMap terms_;
};

SparsePoly add(const PrimeField& F, const SparsePoly& a, const SparsePoly& b);
SparsePoly sub(const PrimeField& F, const SparsePoly& a, const SparsePoly& b);
SparsePoly neg(const PrimeField& F, const SparsePoly& a);
SparsePoly mul_naive(const PrimeField& F, const SparsePoly& a, const SparsePoly& b);
SparsePoly mul_scalar(const PrimeField& F, const SparsePoly& a, Fp c);
SparsePoly pow_naive(const PrimeField& F, const SparsePoly& a, u64 e);
// multiply by the monomial x^v
SparsePoly shift_exponents(const SparsePoly& a, const ExpVec& v);
// divide by the graded-lex leading coefficient
SparsePoly normalize_leading(const PrimeField& F, const SparsePoly& a);
Fp eval(const PrimeField& F, const SparsePoly& a, const std::vector<Fp>& point);
SparsePoly derivative(const PrimeField& F, const SparsePoly& a, int var);

// partial evaluation; assignment maps variable index -> value. Substituting 0
// for a variable that occurs with negative exponent throws.
SparsePoly substitute(const PrimeField& F, const SparsePoly& a,
                      const std::map<int, Fp>& assignment);

// A^[k] = A(x_1..x_k, c_{k+1}..c_n); anchors has length n, entries above k used.
SparsePoly project_prefix(const PrimeField& F, const SparsePoly& a, int k,
                          const std::vector<Fp>& anchors);
// embed into a larger variable set (new vars get exponent 0)
SparsePoly extend_vars(const SparsePoly& a, int new_n);

// conversions for n = 1 (requires nonnegative exponents)
DensePoly to_dense(const PrimeField& F, const SparsePoly& a);
SparsePoly from_dense(const PrimeField& F, const DensePoly& f);

struct WeightVector {
    std::vector<i64> w;  // length n, not all zero
};

struct WeightProfile {
    i64 deg_w = 0, val_w = 0, ec_w = 0;
    SparsePoly lp, tp;     // w-leading / w-trailing parts
    bool regular = false;  // lp is a single term
    Fp lc_w{0};            // coefficient of that term when regular
};

WeightProfile weight_profile(const PrimeField& F, const SparsePoly& p, const WeightVector& w);

// tau_w: P(x_1 t^{w_1}, ..., x_n t^{w_n}); result has n+1 variables, t last.
SparsePoly tag(const SparsePoly& p, const WeightVector& w);
// substitute t := 1 and drop the last variable (merging collisions)
SparsePoly untag(const PrimeField& F, const SparsePoly& p);

// phi_M for an m x n integer matrix: exponents map e -> M e, coefficients of
// colliding images merge additively.
SparsePoly monomial_map(const PrimeField& F, const SparsePoly& p,
                        const std::vector<std::vector<i64>>& M);

// A weight making p w-regular: tries `trials` random weights with entries in
// [-3, 3] keeping the regular one of minimal ecart, then falls back to the
// support point of maximal Euclidean norm (always regular, ec_w <= d^2).
WeightVector regularizing_weight(const PrimeField& F, const SparsePoly& p, int trials, Rng& rng);
// Same but for a pair: the result is regular for p or for q.
WeightVector regularizing_weight_pair(const PrimeField& F, const SparsePoly& p,
                                      const SparsePoly& q, int trials, Rng& rng);

struct NewtonPolygon {
    // lower boundary vertices, i strictly increasing
    std::vector<std::pair<i64, i64>> vertices;
    // per-edge slope as the lifting weight w = (p/q, 1) with q > 0 and
    // gcd(|p|, q) = 1; p/q = (j_left - j_right) / (i_right - i_left)
    struct Edge {
        i64 p, q;
    };
    std::vector<Edge> edges;
};

NewtonPolygon newton_polygon(std::vector<std::pair<i64, i64>> points);

// Test helper: vertices of hull(P*Q) equal vertices of hull(P) + hull(Q).
// Exact for supports of affine rank <= 3.
bool hull_minkowski_check(const PrimeField& F, const SparsePoly& p, const SparsePoly& q);

// Exact quotient a/b by graded-lex term peeling, or nullopt when b does not
// divide a as Laurent polynomials (for inputs of equal per-variable valuation
// this coincides with ordinary exact division). Quadratic in the output size;
// the oracle-grade division used for verification (the fast path lives in
// sparseinterp).
std::optional<SparsePoly> exact_div_naive(const PrimeField& F, const SparsePoly& a,
                                          const SparsePoly& b);

}  // namespace spf
