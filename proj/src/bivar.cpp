#include "spf/bivar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace spf {

i64 BivPoly::deg_y() const {
    i64 d = -1;
    for (auto& r : rows) d = std::max(d, r.deg());
    return d;
}

i64 BivPoly::val_x() const {
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].is_zero()) return static_cast<i64>(i);
    return -1;
}

i64 BivPoly::val_y() const {
    i64 v = std::numeric_limits<i64>::max();
    bool any = false;
    for (auto& r : rows) {
        if (r.is_zero()) continue;
        any = true;
        std::size_t j = 0;
        while (r.c[j].v == 0) ++j;
        v = std::min(v, static_cast<i64>(j));
    }
    return any ? v : -1;
}

BivPoly BivPoly::constant(const PrimeField& F, Fp a) {
    BivPoly r;
    if (!F.is_zero(a)) r.rows.push_back(DensePoly::constant(F, a));
    return r;
}

BivPoly BivPoly::from_x(const DensePoly& f) {
    BivPoly r;
    r.rows.reserve(f.c.size());
    for (auto c : f.c) {
        DensePoly row;
        if (c.v != 0) row.c = {c};
        r.rows.push_back(std::move(row));
    }
    r.trim();
    return r;
}

BivPoly BivPoly::from_y(const DensePoly& f) {
    BivPoly r;
    if (!f.is_zero()) r.rows.push_back(f);
    return r;
}

BivPoly add(const PrimeField& F, const BivPoly& a, const BivPoly& b) {
    BivPoly r;
    r.rows.resize(std::max(a.rows.size(), b.rows.size()));
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        DensePoly lhs = i < a.rows.size() ? a.rows[i] : DensePoly();
        DensePoly rhs = i < b.rows.size() ? b.rows[i] : DensePoly();
        r.rows[i] = add(F, lhs, rhs);
    }
    r.trim();
    return r;
}

BivPoly sub(const PrimeField& F, const BivPoly& a, const BivPoly& b) {
    BivPoly r;
    r.rows.resize(std::max(a.rows.size(), b.rows.size()));
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        DensePoly lhs = i < a.rows.size() ? a.rows[i] : DensePoly();
        DensePoly rhs = i < b.rows.size() ? b.rows[i] : DensePoly();
        r.rows[i] = sub(F, lhs, rhs);
    }
    r.trim();
    return r;
}

BivPoly mul(const PrimeField& F, const BivPoly& a, const BivPoly& b) {
    if (a.is_zero() || b.is_zero()) return BivPoly();
    BivPoly r;
    r.rows.resize(a.rows.size() + b.rows.size() - 1);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.rows.size(); ++j) {
            if (b.rows[j].is_zero()) continue;
            r.rows[i + j] = add(F, r.rows[i + j], mul(F, a.rows[i], b.rows[j]));
        }
    }
    r.trim();
    return r;
}

BivPoly mul_trunc(const PrimeField& F, const BivPoly& a, const BivPoly& b, std::size_t prec) {
    BivPoly r = mul(F, a, b);
    return truncate_y(r, prec);
}

BivPoly mul_scalar(const PrimeField& F, const BivPoly& a, Fp c) {
    if (F.is_zero(c)) return BivPoly();
    BivPoly r = a;
    for (auto& row : r.rows) row = mul_scalar(F, row, c);
    return r;
}

BivPoly pow(const PrimeField& F, const BivPoly& a, u64 e) {
    BivPoly r = BivPoly::constant(F, F.one());
    BivPoly b = a;
    while (e) {
        if (e & 1) r = mul(F, r, b);
        if (e >>= 1) b = mul(F, b, b);
    }
    return r;
}

BivPoly truncate_y(const BivPoly& a, std::size_t prec) {
    BivPoly r = a;
    for (auto& row : r.rows) {
        if (row.c.size() > prec) row.c.resize(prec);
        row.trim();
    }
    r.trim();
    return r;
}

BivPoly transpose(const PrimeField& F, const BivPoly& a) {
    BivPoly r;
    r.rows.resize(static_cast<std::size_t>(a.deg_y() + 1));
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        for (std::size_t j = 0; j < a.rows[i].c.size(); ++j) {
            Fp c = a.rows[i].c[j];
            if (c.v == 0) continue;
            if (r.rows[j].c.size() <= i) r.rows[j].c.resize(i + 1, Fp{0});
            r.rows[j].c[i] = c;
        }
    (void)F;
    for (auto& row : r.rows) row.trim();
    r.trim();
    return r;
}

BivPoly shift_y(const PrimeField& F, const BivPoly& a, Fp sigma) {
    if (F.is_zero(sigma)) return a;
    BivPoly r = a;
    for (auto& row : r.rows) row = taylor_shift(F, row, sigma);
    return r;
}

BivPoly shear_x(const PrimeField& F, const BivPoly& a, Fp lambda) {
    if (F.is_zero(lambda)) return a;
    // x^i -> (x + lambda*y)^i, expanded with a Pascal row
    BivPoly r;
    std::size_t dx = a.rows.size();
    std::vector<std::vector<Fp>> binom(dx);
    for (std::size_t i = 0; i < dx; ++i) {
        binom[i].assign(i + 1, F.one());
        for (std::size_t k = 1; k < i; ++k)
            binom[i][k] = F.add(binom[i - 1][k - 1], binom[i - 1][k]);
    }
    for (std::size_t i = 0; i < dx; ++i) {
        if (a.rows[i].is_zero()) continue;
        Fp lpow = F.one();
        for (std::size_t k = i + 1; k-- > 0;) {
            // contribution x^k * (lambda y)^(i-k) * C(i,k) * rows[i]
            Fp coef = F.mul(binom[i][k], lpow);
            DensePoly term = mul_scalar(F, a.rows[i], coef);
            term = mul_xk(term, i - k);  // multiply by y^(i-k)
            if (r.rows.size() <= k) r.rows.resize(k + 1);
            r.rows[k] = add(F, r.rows[k], term);
            lpow = F.mul(lpow, lambda);
        }
    }
    r.trim();
    return r;
}

DensePoly eval_y(const PrimeField& F, const BivPoly& a, Fp tau) {
    DensePoly out;
    out.c.resize(a.rows.size(), Fp{0});
    for (std::size_t i = 0; i < a.rows.size(); ++i) out.c[i] = eval(F, a.rows[i], tau);
    out.trim();
    return out;
}

DensePoly eval_x(const PrimeField& F, const BivPoly& a, Fp sigma) {
    DensePoly out;
    Fp s = F.one();
    for (auto& row : a.rows) {
        out = add(F, out, mul_scalar(F, row, s));
        s = F.mul(s, sigma);
    }
    return out;
}

SparsePoly to_sparse(const PrimeField& F, const BivPoly& a) {
    SparsePoly r(2);
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        for (std::size_t j = 0; j < a.rows[i].c.size(); ++j)
            if (a.rows[i].c[j].v != 0)
                r.insert_nonzero(ExpVec{static_cast<i64>(i), static_cast<i64>(j)},
                                 a.rows[i].c[j]);
    (void)F;
    return r;
}

BivPoly from_sparse(const PrimeField& F, const SparsePoly& a) {
    if (a.nvars() != 2) throw error("from_sparse expects two variables");
    BivPoly r;
    for (auto& [e, c] : a.terms()) {
        if (e[0] < 0 || e[1] < 0) throw error("from_sparse expects nonnegative exponents");
        std::size_t i = static_cast<std::size_t>(e[0]), j = static_cast<std::size_t>(e[1]);
        if (r.rows.size() <= i) r.rows.resize(i + 1);
        if (r.rows[i].c.size() <= j) r.rows[i].c.resize(j + 1, Fp{0});
        r.rows[i].c[j] = c;
    }
    (void)F;
    return r;
}

std::pair<BivPoly, BivPoly> series_divrem_x(const PrimeField& F, const BivPoly& a,
                                            const BivPoly& b, std::size_t prec) {
    if (b.is_zero()) throw division_by_zero();
    DensePoly lead = b.rows.back();
    if (lead.coeff(0).v == 0)
        throw error("series_divrem_x: leading x-coefficient not invertible");
    DensePoly leadinv = series_inverse(F, lead, prec);
    BivPoly r = truncate_y(a, prec), q;
    while (!r.is_zero() && r.deg_x() >= b.deg_x()) {
        std::size_t shift = static_cast<std::size_t>(r.deg_x() - b.deg_x());
        DensePoly coef = mul(F, r.rows.back(), leadinv);
        if (coef.c.size() > prec) {
            coef.c.resize(prec);
            coef.trim();
        }
        if (q.rows.size() <= shift) q.rows.resize(shift + 1);
        q.rows[shift] = add(F, q.rows[shift], coef);
        for (std::size_t i = 0; i < b.rows.size(); ++i) {
            DensePoly t = mul(F, coef, b.rows[i]);
            if (t.c.size() > prec) {
                t.c.resize(prec);
                t.trim();
            }
            r.rows[shift + i] = sub(F, r.rows[shift + i], t);
        }
        r.trim();
    }
    q.trim();
    return {q, r};
}

std::optional<BivPoly> biv_exact_div(const PrimeField& F, const BivPoly& a, const BivPoly& b) {
    if (b.is_zero()) throw division_by_zero();
    if (a.is_zero()) return BivPoly();
    auto q = exact_div_naive(F, to_sparse(F, a), to_sparse(F, b));
    if (!q) return std::nullopt;
    if (q->has_negative_exponents()) return std::nullopt;
    return from_sparse(F, *q);
}

DensePoly content_x(const PrimeField& F, const BivPoly& a, Rng& rng) {
    if (a.is_zero()) throw zero_polynomial();
    auto verified = [&](const DensePoly& cand) {
        for (auto& row : a.rows)
            if (!row.is_zero() && !exact_div(F, row, cand)) return false;
        return true;
    };
    for (int attempt = 0; attempt < 8; ++attempt) {
        Rng local = rng.split("content", static_cast<u64>(attempt));
        Fp sigma = F.random_nonzero(local);
        Fp tau = F.random_nonzero(local);
        if (sigma == tau) continue;
        DensePoly cand = gcd(F, eval_x(F, a, sigma), eval_x(F, a, tau));
        if (cand.deg() == 0) return DensePoly::constant(F, F.one());
        if (verified(cand)) return cand;
    }
    // exact fallback: gcd of all rows
    DensePoly g;
    for (auto& row : a.rows) g = gcd(F, g, row);
    return g;
}

namespace {

// candidate shift values: exhaustive for small fields, seeded draws otherwise
std::vector<Fp> shift_candidates(const PrimeField& F, Rng& rng, bool include_zero) {
    std::vector<Fp> out;
    if (F.modulus() <= 64) {
        for (u64 v = include_zero ? 0 : 1; v < F.modulus(); ++v) out.push_back(Fp{v});
    } else {
        if (include_zero) out.push_back(Fp{0});
        for (int i = 0; i < 8; ++i) out.push_back(F.random_nonzero(rng));
    }
    return out;
}

struct SeriesPair {
    BivPoly p, q, u, v;  // a = p*q and u*p + v*q = 1, all mod y^prec
};

// quadratic Newton-Hensel in K[[y]][x]; p0 monic, gcd(p0, q0) = 1
SeriesPair lift_series_two(const PrimeField& F, const BivPoly& a, const DensePoly& p0,
                           const DensePoly& q0, std::size_t target) {
    XgcdResult bez = xgcd(F, p0, q0);
    if (bez.d.deg() != 0) throw lift_error("initial factors are not coprime");
    SeriesPair s;
    s.p = BivPoly::from_x(p0);
    s.q = BivPoly::from_x(q0);
    s.u = BivPoly::from_x(bez.u);
    s.v = BivPoly::from_x(bez.v);
    BivPoly atr = truncate_y(a, target);
    std::size_t k = 1;
    while (k < target) {
        std::size_t k2 = std::min(2 * k, target);
        BivPoly e = sub(F, truncate_y(atr, k2), mul_trunc(F, s.p, s.q, k2));
        if (!e.is_zero()) {
            auto [quo, rem] = series_divrem_x(F, mul_trunc(F, s.v, e, k2), s.p, k2);
            (void)quo;
            s.p = add(F, s.p, rem);
            auto [qq, qr] = series_divrem_x(F, truncate_y(atr, k2), s.p, k2);
            if (!qr.is_zero()) throw lift_error("series division left a remainder");
            s.q = qq;
        }
        if (k2 < target) {
            BivPoly b = sub(F, add(F, mul_trunc(F, s.u, s.p, k2), mul_trunc(F, s.v, s.q, k2)),
                            BivPoly::constant(F, F.one()));
            b = truncate_y(b, k2);
            if (!b.is_zero()) {
                auto [c, d] = series_divrem_x(F, mul_trunc(F, s.v, b, k2), s.p, k2);
                s.v = truncate_y(sub(F, s.v, d), k2);
                s.u = truncate_y(
                    sub(F, s.u, add(F, mul_trunc(F, s.u, b, k2), mul_trunc(F, c, s.q, k2))),
                    k2);
            }
        }
        k = k2;
    }
    return s;
}

Fp glex_lc(const PrimeField& F, const BivPoly& a) {
    return to_sparse(F, a).leading_term().second;
}

BivPoly glex_normalize(const PrimeField& F, const BivPoly& a) {
    if (a.is_zero()) return a;
    return mul_scalar(F, a, F.inv(glex_lc(F, a)));
}

}  // namespace

std::pair<BivPoly, BivPoly> hensel_lift_two(const PrimeField& F, const BivPoly& a,
                                            const DensePoly& p0, const DensePoly& q0,
                                            Rng& rng) {
    if (a.is_zero() || p0.is_zero() || q0.is_zero()) throw lift_error("zero input");
    if (p0.lc().v != 1) throw lift_error("p0 must be monic");
    DensePoly fiber = eval_y(F, a, Fp{0});
    if (!(mul(F, p0, q0) == fiber)) throw lift_error("fiber does not match p0*q0");
    if (fiber.deg() != a.deg_x()) throw lift_error("degree drops at y = 0");
    if (gcd(F, p0, q0).deg() != 0) throw lift_error("initial factors are not coprime");

    i64 dy = a.deg_y();
    if (dy == 0) return {BivPoly::from_x(p0), BivPoly::from_x(q0)};
    if (q0.deg() == 0) {
        // the monic factor carries everything
        BivPoly p = mul_scalar(F, a, F.inv(q0.c[0]));
        return {p, BivPoly::constant(F, q0.c[0])};
    }
    std::size_t nu = 2 * static_cast<std::size_t>(dy) + 1;
    SeriesPair s = lift_series_two(F, a, p0, q0, nu);

    Rng srng = rng.split("hensel-sigma");
    for (Fp sigma : shift_candidates(F, srng, false)) {
        DensePoly series = eval_x(F, s.p, sigma);
        if (series.c.size() > nu) {
            series.c.resize(nu);
            series.trim();
        }
        auto rr = rational_reconstruct(F, series, nu, dy);
        if (!rr) continue;
        DensePoly denom = rr->second;
        if (denom.coeff(0).v == 0) continue;
        denom = mul_scalar(F, denom, F.inv(denom.coeff(0)));  // so P(x,0) stays p0
        BivPoly pc = mul_trunc(F, BivPoly::from_y(denom), s.p, nu);
        if (pc.deg_y() > dy) continue;
        DensePoly denom_inv = series_inverse(F, denom, nu);
        BivPoly qc = mul_trunc(F, BivPoly::from_y(denom_inv), s.q, nu);
        if (qc.deg_y() > dy) continue;
        if (mul(F, pc, qc) == a) return {pc, qc};
    }
    throw lift_error("denominator reconstruction failed");
}

std::vector<BivPoly> hensel_lift_multi(const PrimeField& F, const BivPoly& a,
                                       const std::vector<DensePoly>& p0,
                                       const std::vector<int>& mult, Rng& rng) {
    if (p0.empty() || p0.size() != mult.size()) throw lift_error("bad factor list");
    {
        DensePoly prod = DensePoly::constant(F, F.one());
        for (std::size_t i = 0; i < p0.size(); ++i)
            prod = mul(F, prod, pow(F, p0[i], static_cast<u64>(mult[i])));
        if (!(prod == eval_y(F, a, Fp{0}))) throw lift_error("fiber does not match blocks");
    }

    std::vector<BivPoly> out(p0.size());
    std::function<void(const BivPoly&, std::size_t, std::size_t)> go =
        [&](const BivPoly& cur, std::size_t lo, std::size_t hi) {
            if (hi - lo == 1) {
                int nu = mult[lo];
                if (nu == 1) {
                    out[lo] = cur;
                    if (!(eval_y(F, cur, Fp{0}) == p0[lo]))
                        throw lift_error("leaf fiber mismatch");
                    return;
                }
                auto root = biv_root_extract(F, cur, static_cast<u64>(nu), rng);
                if (!root) throw lift_error("block is not a perfect power");
                BivPoly r = root->second;
                DensePoly r0 = eval_y(F, r, Fp{0});
                if (r0.deg() != p0[lo].deg()) throw lift_error("root fiber degree mismatch");
                // align scalars: P = zeta * r with P(x,0) = p0
                Fp zeta = F.div(p0[lo].lc(), r0.lc());
                BivPoly p = mul_scalar(F, r, zeta);
                if (!(eval_y(F, p, Fp{0}) == p0[lo]) || !(pow(F, p, static_cast<u64>(nu)) == cur))
                    throw lift_error("root does not re-expand to its block");
                out[lo] = p;
                return;
            }
            std::size_t mid = lo + (hi - lo) / 2;
            DensePoly left = DensePoly::constant(F, F.one());
            for (std::size_t i = lo; i < mid; ++i)
                left = mul(F, left, pow(F, p0[i], static_cast<u64>(mult[i])));
            DensePoly right = DensePoly::constant(F, F.one());
            for (std::size_t i = mid; i < hi; ++i)
                right = mul(F, right, pow(F, p0[i], static_cast<u64>(mult[i])));
            auto [pl, pr] = hensel_lift_two(F, cur, left, right, rng);
            go(pl, lo, mid);
            go(pr, mid, hi);
        };
    go(a, 0, p0.size());
    return out;
}

std::optional<std::pair<Fp, BivPoly>> biv_root_extract(const PrimeField& F, const BivPoly& a,
                                                       u64 l, Rng& rng) {
    if (a.is_zero()) throw zero_polynomial();
    if (l == 0) throw error("biv_root_extract: l must be positive");
    if (l == 1) {
        BivPoly r = glex_normalize(F, a);
        return std::make_pair(glex_lc(F, a), r);
    }
    i64 vx = a.val_x(), vy = a.val_y();
    if (vx % static_cast<i64>(l) != 0 || vy % static_cast<i64>(l) != 0) return std::nullopt;
    BivPoly base;
    base.rows.assign(a.rows.begin() + vx, a.rows.end());
    for (auto& row : base.rows) {
        if (row.is_zero()) continue;
        row.c.erase(row.c.begin(), row.c.begin() + vy);
    }
    if (base.deg_x() % static_cast<i64>(l) != 0 || base.deg_y() % static_cast<i64>(l) != 0)
        return std::nullopt;
    std::size_t mx = static_cast<std::size_t>(base.deg_x()) / l;
    std::size_t my = static_cast<std::size_t>(base.deg_y()) / l;

    Rng local = rng.split("bivroot");
    for (int transposed = 0; transposed < 2; ++transposed) {
        BivPoly cur = transposed ? transpose(F, base) : base;
        std::size_t cmx = transposed ? my : mx, cmy = transposed ? mx : my;
        for (Fp sigma : shift_candidates(F, local, true)) {
            if (eval(F, cur.rows[0], sigma).v == 0) continue;
            BivPoly shifted = shift_y(F, cur, sigma);
            Fp c0 = shifted.coeff(0, 0);
            BivPoly g = mul_scalar(F, shifted, F.inv(c0));
            // univariate root along x = 0 fixes the per-point normalization
            DensePoly rho = series_kth_root(F, g.rows[0], l, cmy + 1);
            if (!(pow(F, rho, l) == g.rows[0])) return std::nullopt;
            // evaluation points for column interpolation
            Fp alpha = F.primitive_root();
            Fp beta = F.random_nonzero(local);
            std::vector<Fp> points;
            {
                Fp t = beta;
                bool ok = true;
                for (std::size_t j = 0; j <= cmy; ++j) {
                    if (eval(F, g.rows[0], t).v == 0) {
                        ok = false;
                        break;
                    }
                    points.push_back(t);
                    t = F.mul(t, alpha);
                }
                if (!ok) continue;
            }
            std::vector<DensePoly> col_values(cmx + 1);
            bool ok = true;
            std::vector<std::vector<Fp>> cols(cmx + 1,
                                              std::vector<Fp>(points.size(), Fp{0}));
            for (std::size_t j = 0; j < points.size() && ok; ++j) {
                DensePoly uj = eval_y(F, g, points[j]);
                Fp u0 = uj.coeff(0);
                DensePoly wj = mul_scalar(F, uj, F.inv(u0));
                DensePoly rj = series_kth_root(F, wj, l, cmx + 1);
                if (!(pow(F, rj, l) == wj)) return std::nullopt;
                rj = mul_scalar(F, rj, eval(F, rho, points[j]));
                for (std::size_t k = 0; k <= cmx; ++k) cols[k][j] = rj.coeff(k);
            }
            if (!ok) continue;
            BivPoly root;
            root.rows.resize(cmx + 1);
            for (std::size_t k = 0; k <= cmx; ++k)
                root.rows[k] = geometric_interpolate(F, cols[k], beta, alpha);
            root.trim();
            if (!(pow(F, root, l) == g)) return std::nullopt;
            // undo shift/transpose and reapply the stripped monomial
            root = shift_y(F, root, F.neg(sigma));
            if (transposed) root = transpose(F, root);
            BivPoly full;
            full.rows.assign(static_cast<std::size_t>(vx) / l, DensePoly());
            for (auto& row : root.rows) full.rows.push_back(mul_xk(row, static_cast<std::size_t>(vy) / l));
            full.trim();
            BivPoly normalized = glex_normalize(F, full);
            Fp c = glex_lc(F, a);
            if (!(mul_scalar(F, pow(F, normalized, l), c) == a)) return std::nullopt;
            return std::make_pair(c, normalized);
        }
    }
    throw degenerate_shift();
}

BivFactorization biv_squarefree(const PrimeField& F, const BivPoly& a, Rng& rng) {
    if (a.is_zero()) throw zero_polynomial();
    BivFactorization out;
    out.unit = F.one();

    // split off the content in y (a polynomial in y alone)
    DensePoly cont = content_x(F, a, rng);
    BivPoly prim = a;
    if (cont.deg() > 0) {
        auto q = biv_exact_div(F, a, BivPoly::from_y(cont));
        if (!q) throw verification_failed("content does not divide");
        prim = *q;
        UniFactorization cs = squarefree_decomposition(F, cont);
        out.unit = F.mul(out.unit, cs.unit);
        for (auto& [part, m] : cs.parts) out.parts.emplace_back(BivPoly::from_y(part), m);
    }

    if (prim.deg_x() == 0) {
        // a univariate residue in y was fully handled above; prim is constant
        out.unit = F.mul(out.unit, prim.coeff(0, 0));
    } else {
        Rng local = rng.split("bivsq");
        bool done = false;
        for (Fp sigma : shift_candidates(F, local, true)) {
            DensePoly f0 = eval_y(F, prim, sigma);
            if (f0.deg() != prim.deg_x()) continue;
            UniFactorization uf = squarefree_decomposition(F, f0);
            try {
                BivPoly shifted = shift_y(F, prim, sigma);
                std::vector<DensePoly> blocks;
                std::vector<int> mults;
                for (auto& [part, m] : uf.parts) {
                    blocks.push_back(part);
                    mults.push_back(m);
                }
                BivPoly scaled = mul_scalar(F, shifted, F.inv(uf.unit));
                std::vector<BivPoly> lifted =
                    blocks.empty() ? std::vector<BivPoly>{}
                                   : hensel_lift_multi(F, scaled, blocks, mults, local);
                // unshift, normalize, collect
                Fp unit_acc = uf.unit;
                std::vector<std::pair<BivPoly, int>> parts;
                for (std::size_t i = 0; i < lifted.size(); ++i) {
                    BivPoly p = shift_y(F, lifted[i], F.neg(sigma));
                    Fp lc = glex_lc(F, p);
                    for (int k = 0; k < mults[i]; ++k) unit_acc = F.mul(unit_acc, lc);
                    parts.emplace_back(glex_normalize(F, p), mults[i]);
                }
                // verify against prim before accepting
                BivPoly check = BivPoly::constant(F, unit_acc);
                for (auto& [p, m] : parts)
                    check = mul(F, check, pow(F, p, static_cast<u64>(m)));
                if (!(check == prim)) continue;
                out.unit = F.mul(out.unit, unit_acc);
                for (auto& pm : parts) out.parts.push_back(std::move(pm));
                done = true;
                break;
            } catch (const lift_error&) {
                continue;
            } catch (const degenerate_shift&) {
                continue;
            }
        }
        if (!done) throw degenerate_shift();
    }

    // merge parts of equal multiplicity (content vs primitive side)
    std::sort(out.parts.begin(), out.parts.end(),
              [](const auto& x, const auto& y) { return x.second < y.second; });
    std::vector<std::pair<BivPoly, int>> merged;
    for (auto& [p, m] : out.parts) {
        if (!merged.empty() && merged.back().second == m)
            merged.back().first = mul(F, merged.back().first, p);
        else
            merged.emplace_back(p, m);
    }
    out.parts = std::move(merged);
    return out;
}

namespace {

// monic series factors of bstar (monic in x) lifted from the q_i at y = 0
void lift_tree_monic(const PrimeField& F, const BivPoly& bstar,
                     const std::vector<DensePoly>& qs, std::size_t lo, std::size_t hi,
                     std::size_t nu, std::vector<BivPoly>& out) {
    if (hi - lo == 1) {
        out[lo] = truncate_y(bstar, nu);
        return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    DensePoly left = DensePoly::constant(F, F.one());
    for (std::size_t i = lo; i < mid; ++i) left = mul(F, left, qs[i]);
    DensePoly right = DensePoly::constant(F, F.one());
    for (std::size_t i = mid; i < hi; ++i) right = mul(F, right, qs[i]);
    SeriesPair s = lift_series_two(F, bstar, left, right, nu);
    lift_tree_monic(F, s.p, qs, lo, mid, nu, out);
    lift_tree_monic(F, s.q, qs, mid, hi, nu, out);
}

// irreducible factors of b: b square-free, content-free both ways,
// b(x,0) square-free of full x-degree
std::vector<BivPoly> zassenhaus_factor(const PrimeField& F, const BivPoly& b, Rng& rng) {
    DensePoly f0 = eval_y(F, b, Fp{0});
    UniFactorization uf = factor_univariate(F, f0, rng);
    if (uf.parts.size() == 1) return {b};
    std::size_t nu = 2 * static_cast<std::size_t>(std::max<i64>(b.deg_y(), 0)) + 1;

    std::vector<DensePoly> qs;
    for (auto& [q, m] : uf.parts) qs.push_back(q);  // all multiplicity 1 here

    BivPoly cur = b;
    std::vector<BivPoly> out;
    std::vector<std::size_t> pool(qs.size());
    std::iota(pool.begin(), pool.end(), 0);

    auto lift_all = [&](const BivPoly& target) {
        DensePoly lead = target.rows.back();
        DensePoly leadinv = series_inverse(F, lead, nu);
        BivPoly tstar = mul_trunc(F, target, BivPoly::from_y(leadinv), nu);
        std::vector<DensePoly> active;
        for (auto i : pool) active.push_back(qs[i]);
        std::vector<BivPoly> lifted(active.size());
        lift_tree_monic(F, tstar, active, 0, active.size(), nu, lifted);
        return lifted;
    };
    std::vector<BivPoly> lifted = lift_all(cur);

    std::size_t s = 1;
    while (2 * s <= pool.size()) {
        bool found = false;
        std::vector<std::size_t> idx(s);
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            BivPoly cand = BivPoly::from_y(cur.rows.back());
            for (auto k : idx) cand = mul_trunc(F, cand, lifted[k], nu);
            // strip the pure-y cofactor: it equals the row content
            DensePoly h;
            for (auto& row : cand.rows) h = gcd(F, h, row);
            BivPoly g = cand;
            if (h.deg() > 0) {
                auto q = biv_exact_div(F, cand, BivPoly::from_y(h));
                if (q) g = *q;
            }
            if (g.deg_y() <= cur.deg_y()) {
                auto quot = biv_exact_div(F, cur, g);
                if (quot) {
                    out.push_back(g);
                    cur = *quot;
                    std::vector<std::size_t> keep;
                    for (std::size_t k = 0; k < pool.size(); ++k)
                        if (std::find(idx.begin(), idx.end(), k) == idx.end())
                            keep.push_back(pool[k]);
                    pool = std::move(keep);
                    if (2 * s > pool.size()) {
                        found = true;
                        break;
                    }
                    lifted = lift_all(cur);
                    found = true;
                    break;
                }
            }
            // next subset of the current pool
            std::size_t k = s;
            while (k > 0 && idx[k - 1] == pool.size() - s + k - 1) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t i2 = k; i2 < s; ++i2) idx[i2] = idx[i2 - 1] + 1;
        }
        if (!found) ++s;
    }
    if (!cur.is_zero() && !(cur.deg_x() == 0 && cur.deg_y() == 0)) out.push_back(cur);
    return out;
}

// S square-free and content-free in both variables, genuinely bivariate
std::vector<BivPoly> factor_squarefree_part(const PrimeField& F, const BivPoly& S, Rng& rng) {
    struct Variant {
        BivPoly poly;
        int kind;  // 0 identity, 1 transpose, 2 shear
        Fp lambda;
    };
    std::vector<Variant> variants;
    variants.push_back({S, 0, Fp{0}});
    variants.push_back({transpose(F, S), 1, Fp{0}});
    {
        Rng local = rng.split("shear");
        for (Fp lambda : shift_candidates(F, local, false))
            variants.push_back({shear_x(F, S, lambda), 2, lambda});
    }

    Rng sigma_rng = rng.split("factor-sigma");
    for (auto& var : variants) {
        for (Fp sigma : shift_candidates(F, sigma_rng, true)) {
            DensePoly f0 = eval_y(F, var.poly, sigma);
            if (f0.deg() != var.poly.deg_x()) continue;
            if (gcd(F, f0, derivative(F, f0)).deg() != 0) continue;
            BivPoly shifted = shift_y(F, var.poly, sigma);
            std::vector<BivPoly> raw;
            try {
                Rng zrng = rng.split("zassenhaus");
                raw = zassenhaus_factor(F, shifted, zrng);
            } catch (const lift_error&) {
                continue;
            }
            std::vector<BivPoly> outs;
            for (auto& g : raw) {
                BivPoly back = shift_y(F, g, F.neg(sigma));
                if (var.kind == 1) back = transpose(F, back);
                if (var.kind == 2) back = shear_x(F, back, F.neg(var.lambda));
                outs.push_back(glex_normalize(F, back));
            }
            // verify before accepting
            BivPoly check = BivPoly::constant(F, glex_lc(F, S));
            for (auto& g : outs) check = mul(F, check, g);
            if (check == S) return outs;
        }
    }
    throw degenerate_shift();
}

}  // namespace

BivFactorization biv_factor(const PrimeField& F, const BivPoly& a, Rng& rng) {
    if (a.is_zero()) throw zero_polynomial();
    BivFactorization out;
    out.unit = F.one();
    if (a.deg_x() == 0 && a.deg_y() == 0) {
        out.unit = a.coeff(0, 0);
        return out;
    }
    if (a.deg_x() == 0 || a.deg_y() == 0) {
        bool in_y = a.deg_x() == 0;
        DensePoly f = in_y ? a.rows[0] : eval_y(F, a, Fp{0});
        Rng urng = rng.split("uni");
        UniFactorization uf = factor_univariate(F, f, urng);
        out.unit = uf.unit;
        for (auto& [q, m] : uf.parts)
            out.parts.emplace_back(in_y ? BivPoly::from_y(q) : BivPoly::from_x(q), m);
        return out;
    }

    // contents in both directions factor separately
    DensePoly cy = content_x(F, a, rng);  // lives in K[y]
    BivPoly prim = a;
    if (cy.deg() > 0) {
        prim = *biv_exact_div(F, a, BivPoly::from_y(cy));
        Rng crng = rng.split("cy");
        UniFactorization uf = factor_univariate(F, cy, crng);
        out.unit = F.mul(out.unit, uf.unit);
        for (auto& [q, m] : uf.parts) out.parts.emplace_back(BivPoly::from_y(q), m);
    }
    DensePoly cx = content_x(F, transpose(F, prim), rng);  // lives in K[x]
    if (cx.deg() > 0) {
        prim = *biv_exact_div(F, prim, BivPoly::from_x(cx));
        Rng crng2 = rng.split("cx");
        UniFactorization uf = factor_univariate(F, cx, crng2);
        out.unit = F.mul(out.unit, uf.unit);
        for (auto& [q, m] : uf.parts) out.parts.emplace_back(BivPoly::from_x(q), m);
    }

    if (prim.deg_x() == 0 && prim.deg_y() == 0) {
        out.unit = F.mul(out.unit, prim.coeff(0, 0));
    } else if (prim.deg_x() == 0 || prim.deg_y() == 0) {
        bool in_y = prim.deg_x() == 0;
        DensePoly f = in_y ? prim.rows[0] : eval_y(F, prim, Fp{0});
        Rng urng2 = rng.split("uni2");
        UniFactorization uf = factor_univariate(F, f, urng2);
        out.unit = F.mul(out.unit, uf.unit);
        for (auto& [q, m] : uf.parts)
            out.parts.emplace_back(in_y ? BivPoly::from_y(q) : BivPoly::from_x(q), m);
    } else {
        Rng sqrng = rng.split("sq");
        BivFactorization sq = biv_squarefree(F, prim, sqrng);
        out.unit = F.mul(out.unit, sq.unit);
        for (auto& [part, m] : sq.parts) {
            if (part.deg_x() == 0 && part.deg_y() == 0) {
                // stray scalar
                Fp c = part.coeff(0, 0);
                for (int k = 0; k < m; ++k) out.unit = F.mul(out.unit, c);
                continue;
            }
            std::vector<BivPoly> irr;
            if (part.deg_x() == 0 || part.deg_y() == 0) {
                bool in_y = part.deg_x() == 0;
                DensePoly f = in_y ? part.rows[0] : eval_y(F, part, Fp{0});
                Rng urng3 = rng.split("uni3");
                UniFactorization uf = factor_univariate(F, f, urng3);
                Fp u = uf.unit;
                for (int k = 0; k < m; ++k) out.unit = F.mul(out.unit, u);
                for (auto& [q, mm] : uf.parts)
                    for (int rep = 0; rep < mm; ++rep)
                        irr.push_back(in_y ? BivPoly::from_y(q) : BivPoly::from_x(q));
            } else {
                Rng prng = rng.split("part", static_cast<u64>(m));
                irr = factor_squarefree_part(F, part, prng);
            }
            for (auto& g : irr) out.parts.emplace_back(g, m);
        }
    }

    // canonical order and a final unit fix-up
    for (auto& [p, m] : out.parts) {
        Fp lc = glex_lc(F, p);
        if (lc.v != 1) {
            for (int k = 0; k < m; ++k) out.unit = F.mul(out.unit, lc);
            p = glex_normalize(F, p);
        }
    }
    std::sort(out.parts.begin(), out.parts.end(), [&](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second < y.second;
        SparsePoly sx = to_sparse(F, x.first), sy = to_sparse(F, y.first);
        if (sx.term_count() != sy.term_count()) return sx.term_count() < sy.term_count();
        auto itx = sx.terms().begin();
        auto ity = sy.terms().begin();
        for (; itx != sx.terms().end(); ++itx, ++ity) {
            if (GradedLexLess{}(itx->first, ity->first)) return true;
            if (GradedLexLess{}(ity->first, itx->first)) return false;
            if (itx->second.v != ity->second.v) return itx->second.v < ity->second.v;
        }
        return false;
    });
    // merge duplicate irreducible factors (can appear across content splits)
    std::vector<std::pair<BivPoly, int>> merged;
    for (auto& [p, m] : out.parts) {
        if (!merged.empty() && merged.back().first == p)
            merged.back().second += m;
        else
            merged.emplace_back(p, m);
    }
    out.parts = std::move(merged);

    BivPoly check = BivPoly::constant(F, out.unit);
    for (auto& [p, m] : out.parts) check = mul(F, check, pow(F, p, static_cast<u64>(m)));
    if (!(check == a)) throw verification_failed("bivariate factorization re-expansion");
    return out;
}

BivPoly single_slope_transform(const PrimeField& F, const BivPoly& a, i64 p_slope,
                               i64 q_slope) {
    if (q_slope <= 0) throw error("single_slope_transform: q must be positive");
    if (std::gcd(p_slope < 0 ? -p_slope : p_slope, q_slope) != 1)
        throw error("single_slope_transform: slope not in lowest terms");
    if (a.is_zero()) return a;
    i64 minw = std::numeric_limits<i64>::max();
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        for (std::size_t j = 0; j < a.rows[i].c.size(); ++j)
            if (a.rows[i].c[j].v != 0)
                minw = std::min(minw, p_slope * static_cast<i64>(i) +
                                          q_slope * static_cast<i64>(j));
    BivPoly r;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        for (std::size_t j = 0; j < a.rows[i].c.size(); ++j) {
            Fp c = a.rows[i].c[j];
            if (c.v == 0) continue;
            std::size_t t = static_cast<std::size_t>(
                p_slope * static_cast<i64>(i) + q_slope * static_cast<i64>(j) - minw);
            if (r.rows.size() <= i) r.rows.resize(i + 1);
            if (r.rows[i].c.size() <= t) r.rows[i].c.resize(t + 1, Fp{0});
            r.rows[i].c[t] = c;
        }
    (void)F;
    for (auto& row : r.rows) row.trim();
    r.trim();
    return r;
}

std::pair<BivPoly, BivPoly> hensel_lift_single_slope(const PrimeField& F, const BivPoly& a,
                                                     const BivPoly& tpP, const BivPoly& tpQ,
                                                     i64 p_slope, i64 q_slope, Rng& rng) {
    BivPoly at = single_slope_transform(F, a, p_slope, q_slope);
    BivPoly pt = single_slope_transform(F, tpP, p_slope, q_slope);
    BivPoly qt = single_slope_transform(F, tpQ, p_slope, q_slope);
    if (pt.deg_y() != 0 || qt.deg_y() != 0)
        throw lift_error("edge factors are not w-homogeneous");
    DensePoly p0 = eval_y(F, pt, Fp{0});
    DensePoly q0 = eval_y(F, qt, Fp{0});
    Fp mu = p0.lc();
    p0 = monic(F, p0);
    q0 = mul_scalar(F, q0, mu);
    auto [pl, ql] = hensel_lift_two(F, at, p0, q0, rng);

    auto wval = [&](const BivPoly& b) {
        i64 m = std::numeric_limits<i64>::max();
        for (std::size_t i = 0; i < b.rows.size(); ++i)
            for (std::size_t j = 0; j < b.rows[i].c.size(); ++j)
                if (b.rows[i].c[j].v != 0)
                    m = std::min(m, p_slope * static_cast<i64>(i) +
                                        q_slope * static_cast<i64>(j));
        return m;
    };
    i64 vp = wval(tpP), vq = wval(tpQ), va = wval(a);
    if (vp + vq != va) throw lift_error("edge valuations do not add up");

    auto invert = [&](const BivPoly& b, i64 vw) {
        BivPoly r;
        for (std::size_t i = 0; i < b.rows.size(); ++i)
            for (std::size_t t = 0; t < b.rows[i].c.size(); ++t) {
                Fp c = b.rows[i].c[t];
                if (c.v == 0) continue;
                i64 num = static_cast<i64>(t) + vw - p_slope * static_cast<i64>(i);
                if (num % q_slope != 0) throw lift_error("transform is not invertible here");
                i64 j = num / q_slope;
                if (j < 0) throw lift_error("negative exponent after inverse transform");
                std::size_t jj = static_cast<std::size_t>(j);
                if (r.rows.size() <= i) r.rows.resize(i + 1);
                if (r.rows[i].c.size() <= jj) r.rows[i].c.resize(jj + 1, Fp{0});
                r.rows[i].c[jj] = c;
            }
        for (auto& row : r.rows) row.trim();
        r.trim();
        return r;
    };
    BivPoly pout = mul_scalar(F, invert(pl, vp), mu);
    BivPoly qout = mul_scalar(F, invert(ql, vq), F.inv(mu));
    if (!(mul(F, pout, qout) == a)) throw lift_error("single-slope lift re-expansion");
    return {pout, qout};
}

}  // namespace spf
