#include "spf/sparsepoly.hpp"

#include <algorithm>
#include <set>

namespace spf {

i64 SparsePoly::total_degree() const {
    if (terms_.empty()) throw zero_polynomial();
    i64 best = std::numeric_limits<i64>::min();
    for (auto& [e, c] : terms_)
        best = std::max(best, std::accumulate(e.begin(), e.end(), static_cast<i64>(0)));
    return best;
}

i64 SparsePoly::deg_in(int i) const {
    if (terms_.empty()) throw zero_polynomial();
    i64 best = std::numeric_limits<i64>::min();
    for (auto& [e, c] : terms_) best = std::max(best, e[static_cast<std::size_t>(i)]);
    return best;
}

i64 SparsePoly::val_in(int i) const {
    if (terms_.empty()) throw zero_polynomial();
    i64 best = std::numeric_limits<i64>::max();
    for (auto& [e, c] : terms_) best = std::min(best, e[static_cast<std::size_t>(i)]);
    return best;
}

std::vector<i64> SparsePoly::deg_vec() const {
    std::vector<i64> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = deg_in(i);
    return out;
}

std::vector<i64> SparsePoly::val_vec() const {
    std::vector<i64> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = val_in(i);
    return out;
}

bool SparsePoly::has_negative_exponents() const {
    for (auto& [e, c] : terms_)
        for (i64 x : e)
            if (x < 0) return true;
    return false;
}

SparsePoly add(const PrimeField& F, const SparsePoly& a, const SparsePoly& b) {
    SparsePoly r = a;
    for (auto& [e, c] : b.terms()) r.add_term(F, e, c);
    return r;
}

SparsePoly sub(const PrimeField& F, const SparsePoly& a, const SparsePoly& b) {
    SparsePoly r = a;
    for (auto& [e, c] : b.terms()) r.add_term(F, e, F.neg(c));
    return r;
}

SparsePoly neg(const PrimeField& F, const SparsePoly& a) {
    SparsePoly r(a.nvars());
    for (auto& [e, c] : a.terms()) r.add_term(F, e, F.neg(c));
    return r;
}

SparsePoly mul_naive(const PrimeField& F, const SparsePoly& a, const SparsePoly& b) {
    SparsePoly r(a.nvars());
    ExpVec e(static_cast<std::size_t>(a.nvars()));
    for (auto& [ea, ca] : a.terms()) {
        for (auto& [eb, cb] : b.terms()) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(F, e, F.mul(ca, cb));
        }
    }
    return r;
}

SparsePoly mul_scalar(const PrimeField& F, const SparsePoly& a, Fp c) {
    SparsePoly r(a.nvars());
    if (F.is_zero(c)) return r;
    for (auto& [e, coef] : a.terms()) r.add_term(F, e, F.mul(coef, c));
    return r;
}

SparsePoly pow_naive(const PrimeField& F, const SparsePoly& a, u64 e) {
    SparsePoly r = SparsePoly::constant(F, a.nvars(), F.one());
    SparsePoly b = a;
    while (e) {
        if (e & 1) r = mul_naive(F, r, b);
        if (e >>= 1) b = mul_naive(F, b, b);
    }
    return r;
}

SparsePoly shift_exponents(const SparsePoly& a, const ExpVec& v) {
    SparsePoly r(a.nvars());
    for (auto& [e, c] : a.terms()) {
        ExpVec e2 = e;
        for (std::size_t i = 0; i < e2.size(); ++i) e2[i] += v[i];
        r.insert_nonzero(std::move(e2), c);
    }
    return r;
}

SparsePoly normalize_leading(const PrimeField& F, const SparsePoly& a) {
    if (a.is_zero()) return a;
    Fp lc = a.leading_term().second;
    if (lc.v == 1) return a;
    return mul_scalar(F, a, F.inv(lc));
}

Fp eval(const PrimeField& F, const SparsePoly& a, const std::vector<Fp>& point) {
    Fp acc{0};
    for (auto& [e, c] : a.terms()) {
        Fp t = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            t = F.mul(t, F.pow_i(point[i], e[i]));
        }
        acc = F.add(acc, t);
    }
    return acc;
}

SparsePoly derivative(const PrimeField& F, const SparsePoly& a, int var) {
    SparsePoly r(a.nvars());
    for (auto& [e, c] : a.terms()) {
        i64 exp = e[static_cast<std::size_t>(var)];
        if (exp == 0) continue;
        ExpVec e2 = e;
        e2[static_cast<std::size_t>(var)] = exp - 1;
        r.add_term(F, e2, F.mul(c, F.from_int(exp)));
    }
    return r;
}

SparsePoly substitute(const PrimeField& F, const SparsePoly& a,
                      const std::map<int, Fp>& assignment) {
    SparsePoly r(a.nvars());
    for (auto& [e, c] : a.terms()) {
        Fp coef = c;
        ExpVec e2 = e;
        bool dead = false;
        for (auto& [var, value] : assignment) {
            i64 exp = e[static_cast<std::size_t>(var)];
            e2[static_cast<std::size_t>(var)] = 0;
            if (exp == 0) continue;
            if (F.is_zero(value)) {
                if (exp < 0) throw zero_substitution_for_laurent();
                dead = true;
                break;
            }
            coef = F.mul(coef, F.pow_i(value, exp));
        }
        if (!dead) r.add_term(F, e2, coef);
    }
    return r;
}

SparsePoly project_prefix(const PrimeField& F, const SparsePoly& a, int k,
                          const std::vector<Fp>& anchors) {
    std::map<int, Fp> assign;
    for (int i = k; i < a.nvars(); ++i) assign[i] = anchors[static_cast<std::size_t>(i)];
    SparsePoly full = substitute(F, a, assign);
    SparsePoly r(k);
    for (auto& [e, c] : full.terms())
        r.add_term(F, ExpVec(e.begin(), e.begin() + k), c);
    return r;
}

SparsePoly extend_vars(const SparsePoly& a, int new_n) {
    SparsePoly r(new_n);
    for (auto& [e, c] : a.terms()) {
        ExpVec e2 = e;
        e2.resize(static_cast<std::size_t>(new_n), 0);
        r.insert_nonzero(std::move(e2), c);
    }
    return r;
}

DensePoly to_dense(const PrimeField& F, const SparsePoly& a) {
    if (a.nvars() != 1) throw error("to_dense expects one variable");
    DensePoly f;
    for (auto& [e, c] : a.terms()) {
        if (e[0] < 0) throw error("to_dense expects nonnegative exponents");
        if (static_cast<std::size_t>(e[0]) >= f.c.size())
            f.c.resize(static_cast<std::size_t>(e[0]) + 1, Fp{0});
        f.c[static_cast<std::size_t>(e[0])] = c;
    }
    (void)F;
    return f;
}

SparsePoly from_dense(const PrimeField& F, const DensePoly& f) {
    SparsePoly r(1);
    for (std::size_t i = 0; i < f.c.size(); ++i)
        if (f.c[i].v != 0) r.add_term(F, ExpVec{static_cast<i64>(i)}, f.c[i]);
    return r;
}

WeightProfile weight_profile(const PrimeField& F, const SparsePoly& p, const WeightVector& w) {
    if (p.is_zero()) throw zero_polynomial();
    WeightProfile out;
    out.deg_w = std::numeric_limits<i64>::min();
    out.val_w = std::numeric_limits<i64>::max();
    for (auto& [e, c] : p.terms()) {
        i64 v = 0;
        for (std::size_t i = 0; i < e.size(); ++i) v += w.w[i] * e[i];
        out.deg_w = std::max(out.deg_w, v);
        out.val_w = std::min(out.val_w, v);
    }
    out.ec_w = out.deg_w - out.val_w;
    out.lp = SparsePoly(p.nvars());
    out.tp = SparsePoly(p.nvars());
    for (auto& [e, c] : p.terms()) {
        i64 v = 0;
        for (std::size_t i = 0; i < e.size(); ++i) v += w.w[i] * e[i];
        if (v == out.deg_w) out.lp.add_term(F, e, c);
        if (v == out.val_w) out.tp.add_term(F, e, c);
    }
    out.regular = out.lp.term_count() == 1;
    if (out.regular) out.lc_w = out.lp.leading_term().second;
    return out;
}

SparsePoly tag(const SparsePoly& p, const WeightVector& w) {
    SparsePoly r(p.nvars() + 1);
    for (auto& [e, c] : p.terms()) {
        ExpVec e2 = e;
        i64 v = 0;
        for (std::size_t i = 0; i < e.size(); ++i) v += w.w[i] * e[i];
        e2.push_back(v);
        r.insert_nonzero(std::move(e2), c);
    }
    return r;
}

SparsePoly untag(const PrimeField& F, const SparsePoly& p) {
    SparsePoly r(p.nvars() - 1);
    for (auto& [e, c] : p.terms()) r.add_term(F, ExpVec(e.begin(), e.end() - 1), c);
    return r;
}

SparsePoly monomial_map(const PrimeField& F, const SparsePoly& p,
                        const std::vector<std::vector<i64>>& M) {
    int m = static_cast<int>(M.size());
    SparsePoly r(m);
    for (auto& [e, c] : p.terms()) {
        ExpVec e2(static_cast<std::size_t>(m), 0);
        for (std::size_t i = 0; i < M.size(); ++i)
            for (std::size_t j = 0; j < e.size(); ++j) e2[i] += M[i][j] * e[j];
        r.add_term(F, e2, c);
    }
    return r;
}

namespace {

std::optional<WeightVector> try_random_weights(const PrimeField& F, const SparsePoly& p,
                                               const SparsePoly* q, int trials, Rng& rng) {
    std::size_t n = static_cast<std::size_t>(p.nvars());
    std::optional<WeightVector> best;
    i64 best_ec = 0;
    for (int t = 0; t < trials; ++t) {
        WeightVector w;
        w.w.resize(n);
        bool nonzero = false;
        for (auto& x : w.w) {
            x = rng.range(-3, 3);
            nonzero |= x != 0;
        }
        if (!nonzero) continue;
        WeightProfile prof = weight_profile(F, p, w);
        i64 ec = prof.ec_w;
        bool regular = prof.regular;
        if (q) {
            WeightProfile prof_q = weight_profile(F, *q, w);
            regular = regular || prof_q.regular;
            ec = std::max(ec, prof_q.ec_w);
        }
        if (regular && (!best || ec < best_ec)) {
            best = w;
            best_ec = ec;
        }
    }
    return best;
}

ExpVec max_norm_support_point(const SparsePoly& p) {
    const ExpVec* best = nullptr;
    i64 best_norm = -1;
    for (auto& [e, c] : p.terms()) {
        i64 norm = 0;
        for (i64 x : e) norm += x * x;
        if (norm > best_norm) {
            best_norm = norm;
            best = &e;
        }
    }
    return *best;
}

}  // namespace

WeightVector regularizing_weight(const PrimeField& F, const SparsePoly& p, int trials,
                                 Rng& rng) {
    if (p.is_constant()) throw error("regularizing_weight expects a nonconstant polynomial");
    if (auto w = try_random_weights(F, p, nullptr, trials, rng)) return *w;
    return WeightVector{max_norm_support_point(p)};
}

WeightVector regularizing_weight_pair(const PrimeField& F, const SparsePoly& p,
                                      const SparsePoly& q, int trials, Rng& rng) {
    if (p.is_constant() && q.is_constant())
        throw error("regularizing_weight_pair expects a nonconstant polynomial");
    if (p.is_constant()) return regularizing_weight(F, q, trials, rng);
    if (q.is_constant()) return regularizing_weight(F, p, trials, rng);
    if (auto w = try_random_weights(F, p, &q, trials, rng)) return *w;
    ExpVec i = max_norm_support_point(p);
    ExpVec j = max_norm_support_point(q);
    i64 ni = 0, nj = 0;
    for (i64 x : i) ni += x * x;
    for (i64 x : j) nj += x * x;
    return WeightVector{ni <= nj ? i : j};
}

NewtonPolygon newton_polygon(std::vector<std::pair<i64, i64>> points) {
    if (points.empty()) throw error("newton_polygon expects a nonempty point set");
    std::sort(points.begin(), points.end());
    // keep only the lowest j for each i
    std::vector<std::pair<i64, i64>> base;
    for (auto& pt : points)
        if (base.empty() || base.back().first != pt.first) base.push_back(pt);
    std::vector<std::pair<i64, i64>> hull;
    for (auto& pt : base) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            __int128 cross = static_cast<__int128>(b.first - a.first) * (pt.second - a.second) -
                             static_cast<__int128>(b.second - a.second) * (pt.first - a.first);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    NewtonPolygon out;
    out.vertices = std::move(hull);
    for (std::size_t k = 0; k + 1 < out.vertices.size(); ++k) {
        i64 p = out.vertices[k].second - out.vertices[k + 1].second;
        i64 q = out.vertices[k + 1].first - out.vertices[k].first;
        i64 g = std::gcd(p < 0 ? -p : p, q);
        if (g > 0) {
            p /= g;
            q /= g;
        }
        out.edges.push_back({p, q});
    }
    return out;
}

namespace {

using Pt = ExpVec;
using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// exact rational number on 128-bit integers (magnitudes stay tiny here)
struct Frac {
    i128 n = 0, d = 1;
    Frac() = default;
    Frac(i128 num, i128 den = 1) : n(num), d(den) { reduce(); }
    void reduce() {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n == 0) d = 1;
    }
    bool is_zero() const { return n == 0; }
    bool nonneg() const { return n >= 0; }
    friend Frac operator+(Frac a, Frac b) { return Frac(a.n * b.d + b.n * a.d, a.d * b.d); }
    friend Frac operator-(Frac a, Frac b) { return Frac(a.n * b.d - b.n * a.d, a.d * b.d); }
    friend Frac operator*(Frac a, Frac b) { return Frac(a.n * b.n, a.d * b.d); }
    friend Frac operator/(Frac a, Frac b) { return Frac(a.n * b.d, a.d * b.n); }
};

// affine rank of a point set by integer echelon elimination on differences
int affine_rank(const std::vector<Pt>& pts) {
    if (pts.size() <= 1) return 0;
    std::size_t n = pts[0].size();
    std::vector<std::vector<i128>> basis;
    std::vector<std::size_t> pivot;
    for (std::size_t t = 1; t < pts.size(); ++t) {
        std::vector<i128> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = pts[t][i] - pts[0][i];
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (row[pivot[b]] == 0) continue;
            i128 pv = basis[b][pivot[b]], rv = row[pivot[b]];
            i128 g = gcd128(pv, rv);
            i128 mr = pv / g, mb = rv / g;
            for (std::size_t i = 0; i < n; ++i) row[i] = row[i] * mr - basis[b][i] * mb;
        }
        for (std::size_t i = 0; i < n; ++i)
            if (row[i] != 0) {
                basis.push_back(row);
                pivot.push_back(i);
                break;
            }
    }
    return static_cast<int>(basis.size());
}

// q in conv(S), exactly: by Caratheodory it suffices to scan affinely
// independent subsets of size <= rank+1 and solve for barycentric weights
bool in_hull(const Pt& q, const std::vector<Pt>& S) {
    for (auto& s : S)
        if (s == q) return true;
    int r = affine_rank(S);
    std::size_t n = q.size();
    std::size_t maxt = std::min(S.size(), static_cast<std::size_t>(r) + 1);

    std::vector<std::size_t> idx;
    // iterate subsets of each size t via combination walking
    for (std::size_t t = 2; t <= maxt; ++t) {
        idx.assign(t, 0);
        for (std::size_t i = 0; i < t; ++i) idx[i] = i;
        for (;;) {
            // solve sum lambda_i S[idx_i] = q, sum lambda_i = 1
            std::size_t rows = n + 1, cols = t + 1;
            std::vector<std::vector<Frac>> M(rows, std::vector<Frac>(cols));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < t; ++j) M[i][j] = Frac(S[idx[j]][i]);
                M[i][t] = Frac(q[i]);
            }
            for (std::size_t j = 0; j < t; ++j) M[n][j] = Frac(1);
            M[n][t] = Frac(1);
            // Gaussian elimination
            std::size_t rank_row = 0;
            std::vector<std::size_t> pivot_col;
            for (std::size_t col = 0; col < t && rank_row < rows; ++col) {
                std::size_t sel = rows;
                for (std::size_t i = rank_row; i < rows; ++i)
                    if (!M[i][col].is_zero()) {
                        sel = i;
                        break;
                    }
                if (sel == rows) continue;
                std::swap(M[rank_row], M[sel]);
                for (std::size_t i = 0; i < rows; ++i) {
                    if (i == rank_row || M[i][col].is_zero()) continue;
                    Frac f = M[i][col] / M[rank_row][col];
                    for (std::size_t jj = col; jj < cols; ++jj)
                        M[i][jj] = M[i][jj] - f * M[rank_row][jj];
                }
                pivot_col.push_back(col);
                ++rank_row;
            }
            bool consistent = true;
            for (std::size_t i = rank_row; i < rows; ++i)
                if (!M[i][t].is_zero()) consistent = false;
            if (consistent && rank_row == t) {
                bool ok = true;
                for (std::size_t i = 0; i < t; ++i) {
                    Frac lambda = M[i][t] / M[i][pivot_col[i]];
                    if (!lambda.nonneg()) ok = false;
                }
                if (ok) return true;
            }
            // next combination
            std::size_t k = t;
            while (k > 0 && idx[k - 1] == S.size() - t + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t i = k; i < t; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return false;
}

}  // namespace

std::optional<SparsePoly> exact_div_naive(const PrimeField& F, const SparsePoly& a,
                                          const SparsePoly& b) {
    if (b.is_zero()) throw division_by_zero();
    if (a.is_zero()) return SparsePoly(a.nvars());
    SparsePoly rem = a, quot(a.nvars());
    const auto& [eb, cb] = b.leading_term();
    Fp icb = F.inv(cb);
    // any true quotient term lies in this per-variable window; leaving it
    // proves non-divisibility and bounds the loop
    std::vector<i64> lo(static_cast<std::size_t>(a.nvars())),
        hi(static_cast<std::size_t>(a.nvars()));
    for (int i = 0; i < a.nvars(); ++i) {
        lo[static_cast<std::size_t>(i)] = a.val_in(i) - b.val_in(i);
        hi[static_cast<std::size_t>(i)] = a.deg_in(i) - b.deg_in(i);
    }
    while (!rem.is_zero()) {
        const auto& [er, cr] = rem.leading_term();
        ExpVec eq(er.size());
        for (std::size_t i = 0; i < eq.size(); ++i) {
            eq[i] = er[i] - eb[i];
            if (eq[i] < lo[i] || eq[i] > hi[i]) return std::nullopt;
        }
        // with a single divisor, a nonzero remainder term that lt(b) cannot
        // absorb rules out divisibility
        Fp cq = F.mul(cr, icb);
        SparsePoly t = SparsePoly::monomial(F, a.nvars(), eq, cq);
        // leading terms cancel exactly; if the subtraction somehow grows the
        // grade it cannot be an exact quotient step
        SparsePoly next = sub(F, rem, mul_naive(F, t, b));
        if (!next.is_zero() && !GradedLexLess{}(next.leading_term().first, er))
            return std::nullopt;
        quot.add_term(F, eq, cq);
        rem = std::move(next);
    }
    return quot;
}

bool hull_minkowski_check(const PrimeField& F, const SparsePoly& p, const SparsePoly& q) {
    if (p.is_zero() || q.is_zero()) throw zero_polynomial();
    std::vector<Pt> prod_support;
    SparsePoly prod = mul_naive(F, p, q);
    for (auto& [e, c] : prod.terms()) prod_support.push_back(e);
    std::set<Pt> mink;
    for (auto& [ep, cp] : p.terms())
        for (auto& [eq, cq] : q.terms()) {
            Pt s(ep.size());
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = ep[i] + eq[i];
            mink.insert(std::move(s));
        }
    // supp(pq) is always inside the Minkowski sum, so the hulls agree iff
    // every sum point lies inside hull(supp(pq))
    for (auto& b : mink)
        if (!in_hull(b, prod_support)) return false;
    return true;
}

}  // namespace spf
