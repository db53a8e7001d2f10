#include "spf/mreduce.hpp"

#include <algorithm>
#include <map>

#include "spf/bivar.hpp"
#include "spf/unipoly.hpp"

namespace spf {

namespace {

// f with x_var kept and every other variable sent to alpha_j * t
BivPoly bivariate_collapse(const PrimeField& F, const SparsePoly& f, int var,
                           const std::vector<Fp>& alphas) {
    BivPoly out;
    for (auto& [e, c] : f.terms()) {
        i64 xi = e[static_cast<std::size_t>(var)];
        i64 tdeg = 0;
        Fp coef = c;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (static_cast<int>(j) == var || e[j] == 0) continue;
            tdeg += e[j];
            coef = F.mul(coef, F.pow_i(alphas[j], e[j]));
        }
        if (coef.v == 0) continue;
        std::size_t i = static_cast<std::size_t>(xi), t = static_cast<std::size_t>(tdeg);
        if (out.rows.size() <= i) out.rows.resize(i + 1);
        if (out.rows[i].c.size() <= t) out.rows[i].c.resize(t + 1, Fp{0});
        out.rows[i].c[t] = F.add(out.rows[i].c[t], coef);
    }
    for (auto& row : out.rows) row.trim();
    out.trim();
    return out;
}

// t-level slices of a tagged polynomial (levels may be negative)
std::map<i64, SparsePoly> levels_of(const SparsePoly& tagged) {
    std::map<i64, SparsePoly> out;
    int n = tagged.nvars() - 1;
    for (auto& [e, c] : tagged.terms()) {
        auto [it, fresh] = out.try_emplace(e.back(), SparsePoly(n));
        it->second.insert_nonzero(ExpVec(e.begin(), e.end() - 1), c);
    }
    return out;
}

// collapse tagged levels at sequence point i into a dense polynomial in t,
// shifted so the global valuation level sits at degree 0
DensePoly collapse_at(const PrimeField& F, const std::map<i64, SparsePoly>& levels, i64 val_t,
                      i64 deg_t, const GeometricSequence& seq, u64 i) {
    DensePoly out;
    out.c.assign(static_cast<std::size_t>(deg_t - val_t) + 1, Fp{0});
    for (auto& [lev, poly] : levels)
        out.c[static_cast<std::size_t>(lev - val_t)] = eval_sequence(F, poly, seq, i, 1)[0];
    out.trim();
    return out;
}

// shared adaptive engine: interpolate a tagged (n+1)-variable object whose
// collapse at point i is supplied by `gamma`; a nullopt from gamma aborts
// (callers retry with a fresh sequence). Accepted candidates must also match
// the collapse at one extra point.
std::optional<SparsePoly> interpolate_tagged(const PrimeField& F,
                                             const GeometricSequence& seq,
                                             const std::function<std::optional<DensePoly>(u64)>& gamma,
                                             Rng& rng) {
    u64 term_cap = std::min<u64>(seq.window_size(), 1ull << 20);
    u64 cap = 2 * term_cap;
    Rng prng = rng.split("prony");
    std::vector<DensePoly> vals;
    int n = seq.nvars();
    for (std::size_t imax = 1; imax <= cap; imax *= 2) {
        while (vals.size() < imax) {
            auto g = gamma(vals.size());
            if (!g) return std::nullopt;
            vals.push_back(std::move(*g));
        }
        i64 ec = -1;
        for (auto& g : vals) ec = std::max(ec, g.deg());
        std::size_t bound = std::max<std::size_t>(imax / 2, 1);
        bound = std::min<std::size_t>(bound, static_cast<std::size_t>(term_cap));
        if (2 * bound > imax) continue;
        bool ok = true;
        SparsePoly cand(n + 1);
        std::vector<SparsePoly> slices;
        for (i64 e = 0; e <= ec && ok; ++e) {
            std::vector<Fp> level_vals(imax);
            for (std::size_t i = 0; i < imax; ++i)
                level_vals[i] = vals[i].coeff(static_cast<std::size_t>(e));
            if (std::all_of(level_vals.begin(), level_vals.end(),
                            [](Fp x) { return x.v == 0; })) {
                slices.emplace_back(n);
                continue;
            }
            auto slice = prony_interpolate(F, level_vals, seq, bound, prng, imax < cap);
            if (!slice) {
                ok = false;
                break;
            }
            slices.push_back(*slice);
            for (auto& [ex, c] : slice->terms()) {
                ExpVec full = ex;
                full.push_back(e);
                cand.insert_nonzero(std::move(full), c);
            }
        }
        if (ok) {
            // one extra point guards against premature acceptance
            auto probe = gamma(imax);
            if (!probe) return std::nullopt;
            std::vector<Fp> pt = seq.point(imax);
            bool match = true;
            for (i64 e = 0; e <= std::max(ec, probe->deg()) && match; ++e) {
                Fp want = probe->coeff(static_cast<std::size_t>(e));
                Fp got = e <= ec ? eval(F, slices[static_cast<std::size_t>(e)], pt) : Fp{0};
                match = want == got;
            }
            if (match) return cand;
        }
    }
    return std::nullopt;
}

}  // namespace

namespace {

// dense l-th root by top-down coefficient matching in the first effective
// variable, recursing on the leading coefficient; the small-field fallback
std::optional<std::pair<Fp, SparsePoly>> mroot_dense(const PrimeField& F, const SparsePoly& f,
                                                     u64 l) {
    int n = f.nvars();
    if (f.is_constant()) return std::make_pair(f.leading_term().second,
                                               SparsePoly::constant(F, n, F.one()));
    int v = 0;
    while (f.deg_in(v) == 0) ++v;
    i64 df = f.deg_in(v);
    if (df % static_cast<i64>(l) != 0) return std::nullopt;
    i64 m = df / static_cast<i64>(l);

    auto slice = [&](const SparsePoly& a, i64 e) {
        SparsePoly s(n);
        for (auto& [ex, c] : a.terms())
            if (ex[static_cast<std::size_t>(v)] == e) {
                ExpVec e2 = ex;
                e2[static_cast<std::size_t>(v)] = 0;
                s.insert_nonzero(std::move(e2), c);
            }
        return s;
    };
    auto top = mroot_dense(F, slice(f, df), l);
    if (!top) return std::nullopt;
    Fp c = top->first;
    Fp cinv = F.inv(c);
    ExpVec vshift(static_cast<std::size_t>(n), 0);
    vshift[static_cast<std::size_t>(v)] = m;
    SparsePoly root = shift_exponents(top->second, vshift);
    SparsePoly denom = mul_scalar(F, pow_naive(F, top->second, l - 1), F.from_uint(l));
    for (i64 k = 1; k <= m; ++k) {
        SparsePoly partial_pow = pow_naive(F, root, l);
        SparsePoly known = slice(partial_pow, df - k);
        SparsePoly numer = sub(F, mul_scalar(F, slice(f, df - k), cinv), known);
        SparsePoly coeff(n);
        if (!numer.is_zero()) {
            auto q = exact_div_naive(F, numer, denom);
            if (!q || q->has_negative_exponents()) return std::nullopt;
            coeff = *q;
        }
        vshift[static_cast<std::size_t>(v)] = m - k;
        root = add(F, root, shift_exponents(coeff, vshift));
    }
    if (!(mul_scalar(F, pow_naive(F, root, l), c) == f)) return std::nullopt;
    Fp lc = root.leading_term().second;
    // fold the root's unit into c
    Fp cl = F.one();
    for (u64 i = 0; i < l; ++i) cl = F.mul(cl, lc);
    return std::make_pair(F.mul(c, cl), normalize_leading(F, root));
}

// dense repeated-gcd square-free decomposition over the recursive view
SparseFactorization msquarefree_dense(const PrimeField& F, const SparsePoly& f) {
    int n = f.nvars();
    SparseFactorization out;
    out.unit = f.leading_term().second;
    SparsePoly g = normalize_leading(F, f);
    if (g.is_constant()) return out;

    bool all_p = true;
    SparsePoly u(n);
    for (int v = 0; v < n && all_p; ++v) {
        SparsePoly d = derivative(F, g, v);
        if (!d.is_zero()) all_p = false;
    }
    if (all_p) {
        // every exponent divisible by p: g = h^p with the same coefficients
        u64 p = F.modulus();
        SparsePoly h(n);
        for (auto& [e, c] : g.terms()) {
            ExpVec e2 = e;
            for (auto& x : e2) x /= static_cast<i64>(p);
            h.insert_nonzero(std::move(e2), c);
        }
        SparseFactorization inner = msquarefree_dense(F, h);
        out.unit = F.mul(out.unit, inner.unit);
        for (auto& [part, m] : inner.parts)
            out.parts.emplace_back(part, m * static_cast<int>(p));
        return out;
    }
    u = g;
    for (int v = 0; v < n; ++v) {
        SparsePoly d = derivative(F, g, v);
        if (!d.is_zero()) u = gcd_dense(F, u, d);
        if (u.is_constant()) break;
    }
    SparsePoly w = *exact_div_naive(F, g, u);
    int i = 1;
    while (!w.is_constant()) {
        SparsePoly h = gcd_dense(F, u, w);
        SparsePoly part = *exact_div_naive(F, w, h);
        if (!part.is_constant()) out.parts.emplace_back(normalize_leading(F, part), i);
        w = std::move(h);
        if (!w.is_constant()) u = *exact_div_naive(F, u, w);
        ++i;
    }
    if (!u.is_constant()) {
        SparseFactorization inner = msquarefree_dense(F, u);
        out.unit = F.mul(out.unit, inner.unit);
        for (auto& pm : inner.parts) out.parts.push_back(pm);
    }
    std::sort(out.parts.begin(), out.parts.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    // the unit was fixed by normalization up front; verify and restore exactly
    SparsePoly check = SparsePoly::constant(F, n, out.unit);
    for (auto& [part, m] : out.parts)
        check = mul_naive(F, check, pow_naive(F, part, static_cast<u64>(m)));
    if (!(check == f)) throw verification_failed("dense square-free decomposition");
    return out;
}

}  // namespace

std::vector<int> contentfree_test(const PrimeField& F, const SparsePoly& f, Rng& rng) {
    if (f.is_constant()) throw error("contentfree_test expects a nonconstant polynomial");
    std::vector<int> offending;
    for (int var = 0; var < f.nvars(); ++var) {
        if (f.deg_in(var) == 0) {
            // a variable absent from f: every factorization has a factor free
            // of it, unless f is univariate in some other variable only
            continue;
        }
        std::vector<Fp> alphas(static_cast<std::size_t>(f.nvars()));
        Rng arng = rng.split("cf", static_cast<u64>(var));
        for (auto& a : alphas) a = F.random_nonzero(arng);
        bool probed = false;
        for (int attempt = 0; attempt < 4 && !probed; ++attempt) {
            BivPoly b = bivariate_collapse(F, f, var, alphas);
            if (b.deg_x() == f.deg_in(var)) {
                DensePoly cont = content_x(F, b, arng);
                if (cont.deg() > 0) offending.push_back(var);
                probed = true;
                break;
            }
            for (auto& a : alphas) a = F.random_nonzero(arng);
        }
        if (!probed) {
            // exact fallback: gcd of the coefficient slices of x_var
            SparsePoly g(f.nvars());
            for (i64 e = 0; e <= f.deg_in(var) && !g.is_constant(); ++e) {
                SparsePoly s(f.nvars());
                for (auto& [ex, c] : f.terms())
                    if (ex[static_cast<std::size_t>(var)] == e) {
                        ExpVec e2 = ex;
                        e2[static_cast<std::size_t>(var)] = 0;
                        s.insert_nonzero(std::move(e2), c);
                    }
                if (!s.is_zero()) g = gcd(F, g, s, arng);
            }
            if (!g.is_constant()) offending.push_back(var);
        }
    }
    return offending;
}

std::pair<SparsePoly, SparsePoly> content_extract(const PrimeField& F, const SparsePoly& f,
                                                  int var, Rng& rng) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        Rng local = rng.split("extract", static_cast<u64>(attempt));
        Fp sigma = F.random_nonzero(local), tau = F.random_nonzero(local);
        if (sigma == tau) continue;
        SparsePoly a = substitute(F, f, {{var, sigma}});
        SparsePoly b = substitute(F, f, {{var, tau}});
        SparsePoly cont = gcd(F, a, b, local);
        if (cont.is_constant())
            throw error("polynomial is content-free in x" + std::to_string(var + 1));
        auto prim = exact_div_naive(F, f, cont);
        if (!prim) continue;
        return {cont, *prim};
    }
    throw verification_failed("content extraction");
}

std::optional<std::pair<Fp, SparsePoly>> mroot_extract(const PrimeField& F,
                                                       const SparsePoly& f, u64 l, Rng& rng) {
    if (f.is_zero()) throw zero_polynomial();
    if (l == 0) throw error("mroot_extract: l must be positive");
    int n = f.nvars();
    if (l == 1) return std::make_pair(f.leading_term().second, normalize_leading(F, f));
    if (f.is_constant()) return std::make_pair(f.leading_term().second,
                                               SparsePoly::constant(F, n, F.one()));

    ExpVec vals = f.val_vec();
    for (i64 v : vals)
        if (v % static_cast<i64>(l) != 0) return std::nullopt;
    ExpVec neg = vals;
    for (auto& x : neg) x = -x;
    SparsePoly base = shift_exponents(f, neg);
    for (int j = 0; j < n; ++j)
        if (base.deg_in(j) % static_cast<i64>(l) != 0) return std::nullopt;
    if (base.is_constant()) {
        ExpVec vl = vals;
        for (auto& x : vl) x /= static_cast<i64>(l);
        SparsePoly r = SparsePoly::monomial(F, n, vl, F.one());
        return std::make_pair(base.leading_term().second, r);
    }

    Rng wrng = rng.split("weight");
    WeightVector w = regularizing_weight(F, base, 16, wrng);
    WeightProfile prof = weight_profile(F, base, w);
    const ExpVec& gamma = prof.lp.leading_term().first;
    for (i64 g : gamma)
        if (g % static_cast<i64>(l) != 0) return std::nullopt;
    Fp c = prof.lc_w;

    // normalized tagging: divide by lc and by the leading monomial so the
    // collapse is monic in t with valuation zero
    SparsePoly scaled = mul_scalar(F, base, F.inv(c));
    ExpVec gneg = gamma;
    for (auto& x : gneg) x = -x;
    scaled = shift_exponents(scaled, gneg);
    SparsePoly tagged = tag(scaled, w);
    std::map<i64, SparsePoly> levels = levels_of(tagged);
    i64 val_t = levels.begin()->first, deg_t = levels.rbegin()->first;

    std::vector<i64> window(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        window[static_cast<std::size_t>(j)] = base.deg_in(j) / static_cast<i64>(l);
    Rng seq_rng = rng.split("seq");
    std::optional<GeometricSequence> seq_opt;
    try {
        seq_opt.emplace(make_sequence(F, window, seq_rng, true));
    } catch (const kronecker_overflow&) {
        return mroot_dense(F, f, l);
    }
    GeometricSequence& seq = *seq_opt;

    auto gamma_fn = [&](u64 i) -> std::optional<DensePoly> {
        DensePoly fi = collapse_at(F, levels, val_t, deg_t, seq, i);
        if (fi.is_zero() || fi.deg() != deg_t - val_t) return std::nullopt;
        auto root = root_extract(F, fi, l);
        if (!root) return std::nullopt;
        return root->second;
    };
    Rng irng = rng.split("interp");
    auto rhat = interpolate_tagged(F, seq, gamma_fn, irng);
    if (!rhat) return mroot_dense(F, f, l);

    ExpVec shift = gamma;
    for (auto& x : shift) x /= static_cast<i64>(l);
    for (std::size_t j = 0; j < shift.size(); ++j)
        shift[j] += vals[j] / static_cast<i64>(l);
    SparsePoly r = shift_exponents(untag(F, *rhat), shift);
    if (r.is_zero() || r.has_negative_exponents()) return mroot_dense(F, f, l);
    SparsePoly rn = normalize_leading(F, r);
    Fp cout = f.leading_term().second;
    if (!(mul_scalar(F, pow_naive(F, rn, l), cout) == f)) return mroot_dense(F, f, l);
    return std::make_pair(cout, rn);
}

SparseFactorization msquarefree(const PrimeField& F, const SparsePoly& f, Rng& rng) {
    if (f.is_zero()) throw zero_polynomial();
    SparseFactorization out;
    int n = f.nvars();
    if (f.is_constant()) {
        out.unit = f.leading_term().second;
        return out;
    }

    for (int attempt = 0; attempt < 4; ++attempt) {
        Rng outer = rng.split("msq", static_cast<u64>(attempt));
        Rng wrng = outer.split("weight");
        WeightVector w = regularizing_weight(F, f, 16, wrng);
        SparsePoly tagged = tag(f, w);
        std::map<i64, SparsePoly> levels = levels_of(tagged);
        i64 val_t = levels.begin()->first, deg_t = levels.rbegin()->first;

        Rng seq_rng = outer.split("seq");
        std::optional<GeometricSequence> seq_opt;
        try {
            seq_opt.emplace(make_sequence(F, f.deg_vec(), seq_rng, true));
        } catch (const kronecker_overflow&) {
            return msquarefree_dense(F, f);
        }
        GeometricSequence& seq = *seq_opt;

        // per-point Yun decompositions, cached and profile-checked
        std::vector<std::vector<std::pair<DensePoly, int>>> cache;
        std::vector<std::pair<i64, int>> profile;  // (degree, multiplicity) reference
        auto ensure_points = [&](std::size_t count) -> bool {
            while (cache.size() < count) {
                DensePoly fi = collapse_at(F, levels, val_t, deg_t, seq, cache.size());
                if (fi.is_zero() || fi.deg() != deg_t - val_t) return false;
                UniFactorization uf = squarefree_decomposition(F, fi);
                std::vector<std::pair<i64, int>> prof;
                for (auto& [part, m] : uf.parts) prof.emplace_back(part.deg(), m);
                if (cache.empty())
                    profile = prof;
                else if (prof != profile)
                    return false;
                cache.push_back(uf.parts);
            }
            return true;
        };

        if (!ensure_points(1)) continue;
        bool failed = false;
        std::vector<std::pair<SparsePoly, int>> parts;
        for (std::size_t part_idx = 0; part_idx < profile.size() && !failed; ++part_idx) {
            int mult = profile[part_idx].second;
            auto gamma_fn = [&](u64 i) -> std::optional<DensePoly> {
                if (!ensure_points(static_cast<std::size_t>(i) + 1)) return std::nullopt;
                return cache[static_cast<std::size_t>(i)][part_idx].first;
            };
            Rng irng = outer.split("part", static_cast<u64>(part_idx));
            auto phat = interpolate_tagged(F, seq, gamma_fn, irng);
            if (!phat) {
                failed = true;
                break;
            }
            // untag to a valuation-zero polynomial part
            ExpVec nu(static_cast<std::size_t>(n));
            SparsePoly flat = untag(F, *phat);
            if (flat.is_zero()) {
                failed = true;
                break;
            }
            for (int j = 0; j < n; ++j) nu[static_cast<std::size_t>(j)] = -flat.val_in(j);
            SparsePoly part = shift_exponents(flat, nu);
            if (!part.is_constant()) parts.emplace_back(normalize_leading(F, part), mult);
        }
        if (failed) continue;

        SparsePoly check = SparsePoly::constant(F, n, f.leading_term().second);
        for (auto& [part, m] : parts)
            check = mul_naive(F, check, pow_naive(F, part, static_cast<u64>(m)));
        if (check == f) {
            out.unit = f.leading_term().second;
            out.parts = std::move(parts);
            std::sort(out.parts.begin(), out.parts.end(),
                      [](const auto& a, const auto& b) { return a.second < b.second; });
            return out;
        }
    }
    return msquarefree_dense(F, f);
}

}  // namespace spf
