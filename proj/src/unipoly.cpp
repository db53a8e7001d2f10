#include "spf/unipoly.hpp"

#include <algorithm>
#include <cstddef>

namespace spf {

DensePoly DensePoly::monomial(const PrimeField& F, std::size_t k, Fp a) {
    DensePoly f;
    if (!F.is_zero(a)) {
        f.c.assign(k + 1, Fp{0});
        f.c[k] = a;
    }
    return f;
}

DensePoly add(const PrimeField& F, const DensePoly& f, const DensePoly& g) {
    DensePoly r;
    r.c.resize(std::max(f.c.size(), g.c.size()), Fp{0});
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.add(f.coeff(i), g.coeff(i));
    r.trim();
    return r;
}

DensePoly sub(const PrimeField& F, const DensePoly& f, const DensePoly& g) {
    DensePoly r;
    r.c.resize(std::max(f.c.size(), g.c.size()), Fp{0});
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = F.sub(f.coeff(i), g.coeff(i));
    r.trim();
    return r;
}

DensePoly neg(const PrimeField& F, const DensePoly& f) {
    DensePoly r = f;
    for (auto& x : r.c) x = F.neg(x);
    return r;
}

namespace {

constexpr std::size_t kKaratsubaCutoff = 32;

void mul_schoolbook(const PrimeField& F, const Fp* a, std::size_t na, const Fp* b,
                    std::size_t nb, Fp* out) {
    for (std::size_t i = 0; i < na; ++i) {
        if (a[i].v == 0) continue;
        for (std::size_t j = 0; j < nb; ++j)
            out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    }
}

// out (length na+nb-1, zero-initialized) += a*b
void mul_rec(const PrimeField& F, const Fp* a, std::size_t na, const Fp* b, std::size_t nb,
             Fp* out) {
    if (na == 0 || nb == 0) return;
    if (na < kKaratsubaCutoff || nb < kKaratsubaCutoff) {
        mul_schoolbook(F, a, na, b, nb, out);
        return;
    }
    std::size_t h = std::min(na, nb) / 2;
    // a = a0 + x^h a1, b = b0 + x^h b1
    const Fp *a0 = a, *a1 = a + h, *b0 = b, *b1 = b + h;
    std::size_t na1 = na - h, nb1 = nb - h;

    std::vector<Fp> z0(2 * h - 1, Fp{0}), z2(na1 + nb1 - 1, Fp{0});
    mul_rec(F, a0, h, b0, h, z0.data());
    mul_rec(F, a1, na1, b1, nb1, z2.data());

    std::vector<Fp> sa(std::max(h, na1), Fp{0}), sb(std::max(h, nb1), Fp{0});
    for (std::size_t i = 0; i < h; ++i) sa[i] = a0[i];
    for (std::size_t i = 0; i < na1; ++i) sa[i] = F.add(sa[i], a1[i]);
    for (std::size_t i = 0; i < h; ++i) sb[i] = b0[i];
    for (std::size_t i = 0; i < nb1; ++i) sb[i] = F.add(sb[i], b1[i]);
    std::vector<Fp> z1(sa.size() + sb.size() - 1, Fp{0});
    mul_rec(F, sa.data(), sa.size(), sb.data(), sb.size(), z1.data());
    for (std::size_t i = 0; i < z0.size(); ++i) z1[i] = F.sub(z1[i], z0[i]);
    for (std::size_t i = 0; i < z2.size(); ++i) z1[i] = F.sub(z1[i], z2[i]);

    for (std::size_t i = 0; i < z0.size(); ++i) out[i] = F.add(out[i], z0[i]);
    for (std::size_t i = 0; i < z1.size(); ++i) out[h + i] = F.add(out[h + i], z1[i]);
    for (std::size_t i = 0; i < z2.size(); ++i) out[2 * h + i] = F.add(out[2 * h + i], z2[i]);
}

void ntt_radix2(const PrimeField& F, std::vector<Fp>& a, bool invert) {
    std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    int lg = 0;
    while ((1u << lg) < n) ++lg;
    Fp root = F.two_adic_root();
    for (int s = F.two_adicity(); s > lg; --s) root = F.mul(root, root);
    if (invert) root = F.inv(root);
    std::vector<Fp> ws(n / 2);
    // per-stage twiddles from the order-n root
    for (std::size_t len = 2; len <= n; len <<= 1) {
        Fp wlen = root;
        for (std::size_t l = len; l < n; l <<= 1) wlen = F.mul(wlen, wlen);
        ws[0] = F.one();
        for (std::size_t k = 1; k < len / 2; ++k) ws[k] = F.mul(ws[k - 1], wlen);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                Fp u = a[i + k];
                Fp v = F.mul(a[i + k + len / 2], ws[k]);
                a[i + k] = F.add(u, v);
                a[i + k + len / 2] = F.sub(u, v);
            }
        }
    }
    if (invert) {
        Fp ninv = F.inv(F.from_uint(n));
        for (auto& x : a) x = F.mul(x, ninv);
    }
}

bool mul_ntt(const PrimeField& F, const DensePoly& f, const DensePoly& g, DensePoly& out) {
    std::size_t need = f.c.size() + g.c.size() - 1;
    std::size_t n = 1;
    int lg = 0;
    while (n < need) {
        n <<= 1;
        ++lg;
    }
    if (lg > F.two_adicity() || lg >= 28) return false;
    std::vector<Fp> fa(f.c.begin(), f.c.end()), fb(g.c.begin(), g.c.end());
    fa.resize(n, Fp{0});
    fb.resize(n, Fp{0});
    ntt_radix2(F, fa, false);
    ntt_radix2(F, fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] = F.mul(fa[i], fb[i]);
    ntt_radix2(F, fa, true);
    fa.resize(need);
    out = DensePoly(std::move(fa));
    return true;
}

}  // namespace

DensePoly mul(const PrimeField& F, const DensePoly& f, const DensePoly& g) {
    if (f.is_zero() || g.is_zero()) return DensePoly();
    if (std::min(f.c.size(), g.c.size()) >= 64) {
        DensePoly r;
        if (mul_ntt(F, f, g, r)) return r;
    }
    DensePoly r;
    r.c.assign(f.c.size() + g.c.size() - 1, Fp{0});
    mul_rec(F, f.c.data(), f.c.size(), g.c.data(), g.c.size(), r.c.data());
    r.trim();
    return r;
}

DensePoly mul_scalar(const PrimeField& F, const DensePoly& f, Fp a) {
    if (F.is_zero(a)) return DensePoly();
    DensePoly r = f;
    for (auto& x : r.c) x = F.mul(x, a);
    return r;
}

DensePoly mul_xk(const DensePoly& f, std::size_t k) {
    if (f.is_zero()) return f;
    DensePoly r;
    r.c.assign(f.c.size() + k, Fp{0});
    std::copy(f.c.begin(), f.c.end(), r.c.begin() + static_cast<std::ptrdiff_t>(k));
    return r;
}

DensePoly pow(const PrimeField& F, const DensePoly& f, u64 e) {
    DensePoly r = DensePoly::constant(F, F.one());
    DensePoly b = f;
    while (e) {
        if (e & 1) r = mul(F, r, b);
        if (e >>= 1) b = mul(F, b, b);
    }
    return r;
}

DensePoly derivative(const PrimeField& F, const DensePoly& f) {
    DensePoly r;
    if (f.c.size() <= 1) return r;
    r.c.resize(f.c.size() - 1);
    for (std::size_t i = 1; i < f.c.size(); ++i)
        r.c[i - 1] = F.mul(f.c[i], F.from_uint(i));
    r.trim();
    return r;
}

Fp eval(const PrimeField& F, const DensePoly& f, Fp x) {
    Fp acc{0};
    for (std::size_t i = f.c.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f.c[i]);
    return acc;
}

DensePoly monic(const PrimeField& F, const DensePoly& f) {
    if (f.is_zero() || f.lc().v == 1) return f;
    return mul_scalar(F, f, F.inv(f.lc()));
}

DensePoly taylor_shift(const PrimeField& F, const DensePoly& f, Fp a) {
    if (F.is_zero(a) || f.is_zero()) return f;
    // Horner: f(x+a) = (...((c_d)(x+a) + c_{d-1})(x+a) + ...)
    DensePoly r;
    DensePoly xa;
    xa.c = {a, F.one()};
    for (std::size_t i = f.c.size(); i-- > 0;) {
        r = mul(F, r, xa);
        r = add(F, r, DensePoly::constant(F, f.c[i]));
    }
    return r;
}

std::pair<DensePoly, DensePoly> divrem(const PrimeField& F, const DensePoly& f,
                                       const DensePoly& g) {
    if (g.is_zero()) throw division_by_zero();
    if (f.deg() < g.deg()) return {DensePoly(), f};
    DensePoly r = f, q;
    q.c.assign(static_cast<std::size_t>(f.deg() - g.deg()) + 1, Fp{0});
    Fp ilc = F.inv(g.lc());
    while (!r.is_zero() && r.deg() >= g.deg()) {
        std::size_t shift = static_cast<std::size_t>(r.deg() - g.deg());
        Fp coef = F.mul(r.lc(), ilc);
        q.c[shift] = coef;
        for (std::size_t i = 0; i < g.c.size(); ++i)
            r.c[shift + i] = F.sub(r.c[shift + i], F.mul(coef, g.c[i]));
        r.trim();
    }
    q.trim();
    return {q, r};
}

std::optional<DensePoly> exact_div(const PrimeField& F, const DensePoly& f,
                                   const DensePoly& g) {
    auto [q, r] = divrem(F, f, g);
    if (!r.is_zero()) return std::nullopt;
    return q;
}

DensePoly gcd(const PrimeField& F, DensePoly f, DensePoly g) {
    while (!g.is_zero()) {
        DensePoly r = divrem(F, f, g).second;
        f = std::move(g);
        g = std::move(r);
    }
    return monic(F, f);
}

XgcdResult xgcd(const PrimeField& F, const DensePoly& f, const DensePoly& g) {
    DensePoly r0 = f, r1 = g;
    DensePoly u0 = DensePoly::constant(F, F.one()), u1;
    DensePoly v0, v1 = DensePoly::constant(F, F.one());
    while (!r1.is_zero()) {
        auto [q, r] = divrem(F, r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        DensePoly u2 = sub(F, u0, mul(F, q, u1));
        u0 = std::move(u1);
        u1 = std::move(u2);
        DensePoly v2 = sub(F, v0, mul(F, q, v1));
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (!r0.is_zero() && r0.lc().v != 1) {
        Fp s = F.inv(r0.lc());
        r0 = mul_scalar(F, r0, s);
        u0 = mul_scalar(F, u0, s);
        v0 = mul_scalar(F, v0, s);
    }
    return {r0, u0, v0};
}

DensePoly series_kth_root(const PrimeField& F, const DensePoly& f, u64 l, std::size_t prec) {
    // recurrence from l * f * r' = f' * r, matching coefficients of x^(k-1)
    if (prec == 0) return DensePoly();
    if (f.coeff(0).v != 1) throw error("series_kth_root expects constant term 1");
    if (prec > 1 && prec - 1 >= F.modulus())
        throw error("series_kth_root requires p > precision");
    std::vector<Fp> r(prec, Fp{0});
    r[0] = F.one();
    Fp linv = F.inv(F.from_uint(l));
    for (std::size_t k = 1; k < prec; ++k) {
        Fp rhs{0};
        std::size_t top = std::min(k, f.c.size() == 0 ? 0 : f.c.size() - 1);
        for (std::size_t a = 1; a <= top; ++a) {
            Fp fa = f.c[a];
            if (fa.v == 0) continue;
            // (a)*f_a*r_{k-a} - l*f_a*(k-a)*r_{k-a}
            Fp term = F.mul(fa, r[k - a]);
            Fp w = F.sub(F.from_uint(a % F.modulus()),
                         F.mul(F.from_uint(l % F.modulus()),
                               F.from_uint((k - a) % F.modulus())));
            rhs = F.add(rhs, F.mul(term, w));
        }
        r[k] = F.mul(rhs, F.mul(linv, F.inv(F.from_uint(k % F.modulus()))));
    }
    return DensePoly(std::move(r));
}

DensePoly series_inverse(const PrimeField& F, const DensePoly& f, std::size_t prec) {
    if (f.coeff(0).v == 0) throw division_by_zero();
    std::vector<Fp> g(prec, Fp{0});
    Fp i0 = F.inv(f.coeff(0));
    if (prec == 0) return DensePoly();
    g[0] = i0;
    for (std::size_t k = 1; k < prec; ++k) {
        Fp acc{0};
        std::size_t top = std::min(k, f.c.size() - 1);
        for (std::size_t i = 1; i <= top; ++i)
            acc = F.add(acc, F.mul(f.c[i], g[k - i]));
        g[k] = F.neg(F.mul(acc, i0));
    }
    return DensePoly(std::move(g));
}

std::optional<std::pair<Fp, DensePoly>> root_extract(const PrimeField& F, const DensePoly& f,
                                                     u64 l) {
    if (f.is_zero()) throw zero_polynomial();
    if (l == 0) throw error("root_extract: l must be positive");
    if (static_cast<u64>(f.deg()) >= F.modulus())
        throw error("root_extract requires p > deg f");
    if (l == 1) return std::make_pair(f.lc(), monic(F, f));

    std::size_t val = 0;
    while (val < f.c.size() && f.c[val].v == 0) ++val;
    if (val % l != 0) return std::nullopt;
    if ((f.c.size() - 1 - val) % l != 0) return std::nullopt;
    std::size_t m = (f.c.size() - 1 - val) / l;  // degree of the root part

    Fp c = f.lc();
    // reversed monic part has constant term 1
    std::vector<Fp> rev(m * l + 1);
    Fp ic = F.inv(c);
    for (std::size_t i = 0; i <= m * l; ++i)
        rev[i] = F.mul(f.c[f.c.size() - 1 - i], ic);
    DensePoly root_rev = series_kth_root(F, DensePoly(std::move(rev)), l, m + 1);

    DensePoly g;
    g.c.assign(m + val / l + 1, Fp{0});
    for (std::size_t i = 0; i <= m; ++i) g.c[g.c.size() - 1 - i] = root_rev.coeff(i);
    g.trim();

    DensePoly check = mul_scalar(F, pow(F, g, l), c);
    if (!(check == f)) return std::nullopt;
    return std::make_pair(c, g);
}

namespace {

// f = h(x^p) -> h; valid over F_p since a^p = a
DensePoly pth_root_poly(const PrimeField& F, const DensePoly& f) {
    u64 p = F.modulus();
    DensePoly h;
    h.c.assign(f.c.size() / p + 1, Fp{0});
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        if (f.c[i].v == 0) continue;
        h.c[i / p] = f.c[i];
    }
    h.trim();
    return h;
}

bool poly_has_px_only(const PrimeField& F, const DensePoly& f) {
    for (std::size_t i = 0; i < f.c.size(); ++i)
        if (f.c[i].v != 0 && i % F.modulus() != 0) return false;
    return true;
}

}  // namespace

UniFactorization squarefree_decomposition(const PrimeField& F, const DensePoly& f) {
    if (f.is_zero()) throw zero_polynomial();
    UniFactorization out;
    out.unit = f.lc();
    DensePoly g = monic(F, f);
    if (g.deg() == 0) return out;

    DensePoly d = derivative(F, g);
    if (d.is_zero()) {
        // g is a p-th power
        UniFactorization inner = squarefree_decomposition(F, pth_root_poly(F, g));
        for (auto& [part, m] : inner.parts)
            out.parts.emplace_back(part, m * static_cast<int>(F.modulus()));
        return out;
    }

    // repeated-gcd peeling; multiplicities divisible by p stay in u and are
    // handled by recursion at the end
    DensePoly u = gcd(F, g, d);
    DensePoly v = *exact_div(F, g, u);
    v = monic(F, v);
    int i = 1;
    while (v.deg() > 0) {
        DensePoly w = gcd(F, u, v);
        DensePoly part = *exact_div(F, v, w);
        if (part.deg() > 0) out.parts.emplace_back(monic(F, part), i);
        v = std::move(w);
        if (!u.is_zero() && v.deg() > 0) {
            // remove one copy of every factor still active
            u = *exact_div(F, u, v);
        } else if (v.deg() > 0) {
            u = DensePoly::constant(F, F.one());
        }
        ++i;
    }
    if (u.deg() > 0) {
        if (!poly_has_px_only(F, u) || !derivative(F, u).is_zero())
            throw error("squarefree decomposition: unexpected residual");
        UniFactorization inner = squarefree_decomposition(F, pth_root_poly(F, u));
        for (auto& [part, m] : inner.parts)
            out.parts.emplace_back(part, m * static_cast<int>(F.modulus()));
    }
    std::sort(out.parts.begin(), out.parts.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

namespace {

// reduction by a fixed monic-normalized modulus via the reversed-series
// inverse; one precomputation then two truncated products per reduction
struct ModCtx {
    const PrimeField& F;
    DensePoly m;     // monic
    DensePoly rinv;  // inverse of rev(m) mod x^(deg m)
    explicit ModCtx(const PrimeField& field, const DensePoly& modulus)
        : F(field), m(monic(field, modulus)) {
        std::size_t d = static_cast<std::size_t>(m.deg());
        DensePoly rev;
        rev.c.assign(d + 1, Fp{0});
        for (std::size_t i = 0; i <= d; ++i) rev.c[i] = m.c[d - i];
        rev.trim();
        rinv = d > 0 ? series_inverse(F, rev, d) : DensePoly::constant(F, F.one());
    }
    DensePoly reduce(const DensePoly& a) const {
        if (a.deg() < m.deg()) return a;
        std::size_t d = static_cast<std::size_t>(m.deg());
        std::size_t k = static_cast<std::size_t>(a.deg() - m.deg()) + 1;
        if (d == 0) return DensePoly();
        if (k > d) return divrem(F, a, m).second;  // rinv precision covers k <= d
        DensePoly arev;
        arev.c.assign(k, Fp{0});
        for (std::size_t i = 0; i < k; ++i) arev.c[i] = a.c[a.c.size() - 1 - i];
        arev.trim();
        DensePoly qrev = mul(F, arev, rinv);
        qrev.c.resize(k, Fp{0});
        DensePoly q;
        q.c.assign(k, Fp{0});
        for (std::size_t i = 0; i < k; ++i) q.c[i] = qrev.c[k - 1 - i];
        q.trim();
        // r = a - q*m, degree < d, so only the low part matters
        DensePoly qm = mul(F, q, m);
        DensePoly r;
        r.c.assign(d, Fp{0});
        for (std::size_t i = 0; i < d; ++i) r.c[i] = F.sub(a.coeff(i), qm.coeff(i));
        r.trim();
        return r;
    }
};

DensePoly poly_mulmod(const ModCtx& ctx, const DensePoly& a, const DensePoly& b) {
    return ctx.reduce(mul(ctx.F, a, b));
}

DensePoly poly_powmod(const ModCtx& ctx, DensePoly a, u64 e) {
    const PrimeField& F = ctx.F;
    DensePoly r = ctx.reduce(DensePoly::constant(F, F.one()));
    a = ctx.reduce(a);
    while (e) {
        if (e & 1) r = poly_mulmod(ctx, r, a);
        if (e >>= 1) a = poly_mulmod(ctx, a, a);
    }
    return r;
}

DensePoly poly_x(const PrimeField& F) { return DensePoly::monomial(F, 1, F.one()); }

// random monic-ish polynomial of degree < d
DensePoly random_poly(const PrimeField& F, Rng& rng, std::size_t d) {
    DensePoly r;
    r.c.resize(d);
    for (auto& x : r.c) x = F.random(rng);
    r.trim();
    return r;
}

// a^(1 + p + p^2 + ... + p^(d-1)) mod m, the "norm map" exponent used by
// equal-degree splitting without big-integer exponents
DensePoly norm_power(const ModCtx& ctx, const DensePoly& a, int d) {
    DensePoly t = ctx.reduce(a);
    for (int i = 1; i < d; ++i) {
        t = poly_powmod(ctx, t, ctx.F.modulus());
        t = poly_mulmod(ctx, t, a);
    }
    return t;
}

// splits monic square-free g, all of whose irreducible factors have degree d
void equal_degree_split(const PrimeField& F, const DensePoly& g, int d, Rng& rng,
                        std::vector<DensePoly>& out) {
    if (g.deg() <= 0) return;
    if (g.deg() == d) {
        out.push_back(g);
        return;
    }
    ModCtx ctx(F, g);
    for (int attempt = 0;; ++attempt) {
        Rng local = attempt < 64 ? rng.split("eds", attempt) : rng.split("eds-reseed", attempt);
        DensePoly a = random_poly(F, local, static_cast<std::size_t>(g.deg()));
        if (a.deg() < 1) continue;
        DensePoly b = norm_power(ctx, a, d);
        b = poly_powmod(ctx, b, (F.modulus() - 1) / 2);
        b = sub(F, b, DensePoly::constant(F, F.one()));
        DensePoly h = gcd(F, b, g);
        if (h.deg() > 0 && h.deg() < g.deg()) {
            equal_degree_split(F, h, d, rng, out);
            equal_degree_split(F, *exact_div(F, g, h), d, rng, out);
            return;
        }
    }
}

}  // namespace

UniFactorization factor_univariate(const PrimeField& F, const DensePoly& f, Rng& rng) {
    if (f.is_zero()) throw zero_polynomial();
    if (F.modulus() == 2) throw error("factor_univariate requires odd p");
    UniFactorization sq = squarefree_decomposition(F, f);
    UniFactorization out;
    out.unit = sq.unit;
    for (auto& [part, mult] : sq.parts) {
        DensePoly g = part;
        // x factors
        std::size_t val = 0;
        while (val < g.c.size() && g.c[val].v == 0) ++val;
        if (val > 0) {
            out.parts.emplace_back(poly_x(F), mult);  // square-free => val 1
            DensePoly shifted;
            shifted.c.assign(g.c.begin() + static_cast<std::ptrdiff_t>(val), g.c.end());
            g = shifted;
        }
        // distinct-degree splitting
        DensePoly h = poly_x(F);
        int d = 0;
        while (g.deg() > 0) {
            ++d;
            if (2 * d > g.deg()) {
                out.parts.emplace_back(g, mult);  // what is left is irreducible
                break;
            }
            h = poly_powmod(ModCtx(F, g), h, F.modulus());
            DensePoly gd = gcd(F, sub(F, h, poly_x(F)), g);
            if (gd.deg() > 0) {
                std::vector<DensePoly> pieces;
                equal_degree_split(F, gd, d, rng, pieces);
                for (auto& q : pieces) out.parts.emplace_back(q, mult);
                g = *exact_div(F, g, gd);
                h = divrem(F, h, g).second;
            }
        }
    }
    std::sort(out.parts.begin(), out.parts.end(), [](const auto& a, const auto& b) {
        if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
        for (std::size_t i = a.first.c.size(); i-- > 0;)
            if (a.first.c[i].v != b.first.c[i].v) return a.first.c[i].v < b.first.c[i].v;
        return a.second < b.second;
    });
    return out;
}

namespace {

void root_split(const PrimeField& F, const DensePoly& g, Rng& rng, std::vector<Fp>& out) {
    if (g.deg() <= 0) return;
    if (g.deg() == 1) {
        // monic x + a -> root -a
        out.push_back(F.neg(g.c[0]));
        return;
    }
    ModCtx ctx(F, g);
    for (int attempt = 0;; ++attempt) {
        Rng local = rng.split("roots", attempt);
        Fp delta = F.random(local);
        DensePoly shifted;
        shifted.c = {delta, F.one()};
        DensePoly b = poly_powmod(ctx, shifted, (F.modulus() - 1) / 2);
        b = sub(F, b, DensePoly::constant(F, F.one()));
        DensePoly h = gcd(F, b, g);
        if (h.deg() > 0 && h.deg() < g.deg()) {
            root_split(F, h, rng, out);
            root_split(F, *exact_div(F, g, h), rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<Fp> find_roots(const PrimeField& F, const DensePoly& f, Rng& rng) {
    std::vector<Fp> out;
    if (f.deg() <= 0) return out;
    DensePoly g = monic(F, f);
    std::size_t val = 0;
    while (val < g.c.size() && g.c[val].v == 0) ++val;
    if (val > 0) {
        out.push_back(Fp{0});
        DensePoly shifted;
        shifted.c.assign(g.c.begin() + static_cast<std::ptrdiff_t>(val), g.c.end());
        g = shifted;
    }
    if (g.deg() > 0) {
        // keep only the split part: gcd(x^p - x, g)
        DensePoly xp = poly_powmod(ModCtx(F, g), poly_x(F), F.modulus());
        DensePoly lin = gcd(F, sub(F, xp, poly_x(F)), g);
        root_split(F, lin, rng, out);
    }
    std::sort(out.begin(), out.end(), [](Fp a, Fp b) { return a.v < b.v; });
    return out;
}

std::vector<Fp> find_roots_presplit(const PrimeField& F, const DensePoly& f, Rng& rng) {
    std::vector<Fp> out;
    if (f.deg() <= 0) return out;
    root_split(F, monic(F, f), rng, out);
    std::sort(out.begin(), out.end(), [](Fp a, Fp b) { return a.v < b.v; });
    return out;
}

std::vector<Fp> geometric_evaluate(const PrimeField& F, const DensePoly& f, Fp beta, Fp alpha,
                                   std::size_t m) {
    std::vector<Fp> out;
    out.reserve(m);
    Fp point = beta;
    for (std::size_t i = 0; i < m; ++i) {
        out.push_back(eval(F, f, point));
        point = F.mul(point, alpha);
    }
    return out;
}

DensePoly geometric_interpolate(const PrimeField& F, const std::vector<Fp>& values, Fp beta,
                                Fp alpha) {
    std::size_t n = values.size();
    std::vector<Fp> xs(n);
    Fp point = beta;
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = point;
        point = F.mul(point, alpha);
    }
    {
        std::vector<u64> sorted;
        sorted.reserve(n);
        for (auto x : xs) sorted.push_back(x.v);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw duplicate_points();
    }
    // Newton divided differences
    std::vector<Fp> dd = values;
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i)
            dd[i] = F.div(F.sub(dd[i], dd[i - 1]), F.sub(xs[i], xs[i - level]));
    DensePoly f;
    for (std::size_t i = n; i-- > 0;) {
        // f = f*(x - xs[i]) + dd[i]
        DensePoly lin;
        lin.c = {F.neg(xs[i]), F.one()};
        f = add(F, mul(F, f, lin), DensePoly::constant(F, dd[i]));
    }
    return f;
}

std::optional<std::pair<DensePoly, DensePoly>> rational_reconstruct(const PrimeField& F,
                                                                    const DensePoly& series,
                                                                    std::size_t nu, i64 dmax) {
    DensePoly r0 = DensePoly::monomial(F, nu, F.one());
    DensePoly r1 = series;
    r1.c.resize(std::min(r1.c.size(), nu));
    r1.trim();
    DensePoly v0, v1 = DensePoly::constant(F, F.one());
    while (r1.deg() > dmax) {
        auto [q, r] = divrem(F, r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        DensePoly v2 = sub(F, v0, mul(F, q, v1));
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    DensePoly a = r1, b = v1;
    if (b.is_zero()) return std::nullopt;
    DensePoly g = gcd(F, a, b);
    if (g.deg() > 0) return std::nullopt;
    if (b.coeff(0).v == 0) return std::nullopt;
    Fp s = F.inv(b.lc());
    return std::make_pair(mul_scalar(F, a, s), mul_scalar(F, b, s));
}

std::vector<Fp> transposed_vandermonde_solve(const PrimeField& F, const std::vector<Fp>& roots,
                                             const std::vector<Fp>& values) {
    std::size_t s = roots.size();
    if (values.size() < s) throw error("transposed_vandermonde_solve: not enough values");
    {
        std::vector<u64> sorted;
        sorted.reserve(s);
        for (auto r : roots) sorted.push_back(r.v);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw singular_system();
    }
    if (s == 0) return {};
    // master polynomial and per-root quotients
    DensePoly master;
    master.c = {F.one()};
    for (auto r : roots) {
        DensePoly lin;
        lin.c = {F.neg(r), F.one()};
        master = mul(F, master, lin);
    }
    std::vector<Fp> out(s);
    for (std::size_t j = 0; j < s; ++j) {
        // synthetic division of master by (z - roots[j])
        std::vector<Fp> q(s);
        Fp carry{0};
        for (std::size_t i = s + 1; i-- > 1;) {
            Fp cur = F.add(master.c[i], F.mul(carry, roots[j]));
            q[i - 1] = cur;
            carry = cur;
        }
        Fp denom{0};
        Fp num{0};
        Fp rp = F.one();
        for (std::size_t i = 0; i < s; ++i) {
            num = F.add(num, F.mul(q[i], values[i]));
            denom = F.add(denom, F.mul(q[i], rp));
            rp = F.mul(rp, roots[j]);
        }
        out[j] = F.div(num, denom);
    }
    return out;
}

}  // namespace spf
