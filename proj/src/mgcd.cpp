#include "spf/mgcd.hpp"

#include <algorithm>
#include <map>

#include "spf/unipoly.hpp"

namespace spf {

namespace {

struct Stripped {
    ExpVec val;
    SparsePoly poly;
};

Stripped strip_monomial(const SparsePoly& p) {
    Stripped out{p.val_vec(), SparsePoly(p.nvars())};
    ExpVec neg = out.val;
    for (auto& x : neg) x = -x;
    out.poly = shift_exponents(p, neg);
    return out;
}

// u-degree slices of a (k+1)-variable polynomial as k-variable polynomials
std::vector<SparsePoly> upper_slices(const SparsePoly& a, int k) {
    i64 du = a.is_zero() ? -1 : a.deg_in(k);
    std::vector<SparsePoly> slices(static_cast<std::size_t>(du + 1), SparsePoly(k));
    for (auto& [e, c] : a.terms()) {
        ExpVec head(e.begin(), e.begin() + k);
        slices[static_cast<std::size_t>(e[static_cast<std::size_t>(k)])].insert_nonzero(
            std::move(head), c);
    }
    return slices;
}

// one level of Algorithm 3.1: from G at level k to level k+1
SparsePoly lift_gcd_level(const PrimeField& F, const SparsePoly& gk, const SparsePoly& p_next,
                          const SparsePoly& q_next, Fp anchor, Rng& rng, int refresh_cap) {
    int k = gk.nvars();
    std::size_t m = gk.term_count();
    std::vector<ExpVec> support;
    support.reserve(m);
    for (auto& [e, c] : gk.terms()) support.push_back(e);

    std::vector<SparsePoly> pslices = upper_slices(p_next, k);
    std::vector<SparsePoly> qslices = upper_slices(q_next, k);

    Rng seq_rng = rng.split("level-seq");
    GeometricSequence seq(F, ExpVec(static_cast<std::size_t>(k), 0), gk.deg_vec(), seq_rng);

    for (int attempt = 0;; ++attempt) {
        // evaluate every slice and the anchor polynomial along the sequence
        std::vector<std::vector<Fp>> pv, qv;
        pv.reserve(pslices.size());
        qv.reserve(qslices.size());
        for (auto& s : pslices) pv.push_back(eval_sequence(F, s, seq, 0, m));
        for (auto& s : qslices) qv.push_back(eval_sequence(F, s, seq, 0, m));
        std::vector<Fp> gv = eval_sequence(F, gk, seq, 0, m);

        bool bad = false;
        std::vector<DensePoly> gammas(m);
        for (std::size_t i = 0; i < m && !bad; ++i) {
            DensePoly pu, qu;
            pu.c.resize(pslices.size());
            for (std::size_t e = 0; e < pslices.size(); ++e) pu.c[e] = pv[e][i];
            pu.trim();
            qu.c.resize(qslices.size());
            for (std::size_t e = 0; e < qslices.size(); ++e) qu.c[e] = qv[e][i];
            qu.trim();
            if (pu.deg() != static_cast<i64>(pslices.size()) - 1 ||
                qu.deg() != static_cast<i64>(qslices.size()) - 1) {
                bad = true;  // degree dropped at this point
                break;
            }
            DensePoly gamma = gcd(F, pu, qu);
            Fp at_anchor = eval(F, gamma, anchor);
            if (at_anchor.v == 0 || gv[i].v == 0) {
                bad = true;  // the paper's normalization anchor vanished
                break;
            }
            gammas[i] = mul_scalar(F, gamma, F.div(gv[i], at_anchor));
        }
        if (!bad) {
            i64 du = -1;
            for (auto& g : gammas) du = std::max(du, g.deg());
            SparsePoly out(k + 1);
            for (i64 e = 0; e <= du; ++e) {
                std::vector<Fp> vals(m);
                for (std::size_t i = 0; i < m; ++i)
                    vals[i] = gammas[i].coeff(static_cast<std::size_t>(e));
                SparsePoly slice = interpolate_known_support(F, support, vals, seq, 0);
                for (auto& [ex, c] : slice.terms()) {
                    ExpVec full = ex;
                    full.push_back(e);
                    out.insert_nonzero(std::move(full), c);
                }
            }
            // consistency with the previous level
            SparsePoly back(k);
            for (auto& [e, c] : out.terms()) {
                Fp scaled = F.mul(c, F.pow_i(anchor, e.back()));
                back.add_term(F, ExpVec(e.begin(), e.end() - 1), scaled);
            }
            if (back == gk) return out;
        }
        if (attempt >= refresh_cap)
            throw normalization_failed("gcd level " + std::to_string(k + 1));
        Rng orng = rng.split("level-offset", static_cast<u64>(attempt));
        seq.refresh_offset(orng);
    }
}

SparsePoly monomial_gcd_part(const PrimeField& F, int n, const ExpVec& a, const ExpVec& b) {
    ExpVec m(a.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(a[i], b[i]);
    return SparsePoly::monomial(F, n, m, F.one());
}

bool divides_both(const PrimeField& F, const SparsePoly& g, const SparsePoly& p,
                  const SparsePoly& q) {
    if (g.is_zero()) return p.is_zero() && q.is_zero();
    return exact_div_naive(F, p, g).has_value() && exact_div_naive(F, q, g).has_value();
}

}  // namespace

SparsePoly gcd_iterative(const PrimeField& F, const SparsePoly& p, const SparsePoly& q,
                         Rng& rng, const GcdConfig& cfg) {
    int n = p.nvars();
    if (p.is_zero()) return normalize_leading(F, q);
    if (q.is_zero()) return normalize_leading(F, p);
    Stripped sp = strip_monomial(p), sq = strip_monomial(q);
    SparsePoly mono = monomial_gcd_part(F, n, sp.val, sq.val);
    if (sp.poly.is_constant() || sq.poly.is_constant()) return normalize_leading(F, mono);

    for (int outer = 0; outer < cfg.refresh_cap; ++outer) {
        Rng arng = rng.split("anchors", static_cast<u64>(outer));
        std::vector<Fp> anchors(static_cast<std::size_t>(n));
        for (auto& c : anchors) c = F.random_nonzero(arng);

        SparsePoly p1 = project_prefix(F, sp.poly, 1, anchors);
        SparsePoly q1 = project_prefix(F, sq.poly, 1, anchors);
        if (p1.is_zero() || q1.is_zero()) continue;
        SparsePoly g = from_dense(F, gcd(F, to_dense(F, p1), to_dense(F, q1)));

        try {
            Rng lrng = rng.split("levels", static_cast<u64>(outer));
            for (int k = 1; k < n; ++k) {
                SparsePoly p_next = project_prefix(F, sp.poly, k + 1, anchors);
                SparsePoly q_next = project_prefix(F, sq.poly, k + 1, anchors);
                g = lift_gcd_level(F, g, p_next, q_next, anchors[static_cast<std::size_t>(k)],
                                   lrng, cfg.refresh_cap);
            }
        } catch (const normalization_failed&) {
            continue;
        }
        if (divides_both(F, g, sp.poly, sq.poly))
            return normalize_leading(F, mul_naive(F, mono, g));
    }
    throw verification_failed("iterative gcd did not verify");
}

SparsePoly gcd_regularizing(const PrimeField& F, const SparsePoly& p, const SparsePoly& q,
                            Rng& rng, const GcdConfig& cfg) {
    int n = p.nvars();
    if (p.is_zero()) return normalize_leading(F, q);
    if (q.is_zero()) return normalize_leading(F, p);
    Stripped sp = strip_monomial(p), sq = strip_monomial(q);
    SparsePoly mono = monomial_gcd_part(F, n, sp.val, sq.val);
    if (sp.poly.is_constant() || sq.poly.is_constant()) return normalize_leading(F, mono);

    Rng wrng = rng.split("weight");
    WeightVector w = regularizing_weight_pair(F, sp.poly, sq.poly, cfg.weight_trials, wrng);
    SparsePoly ptag = tag(sp.poly, w), qtag = tag(sq.poly, w);

    // group the tagged polynomials by t-level
    auto by_level = [&](const SparsePoly& a) {
        std::map<i64, SparsePoly> levels;
        for (auto& [e, c] : a.terms()) {
            auto [it, fresh] = levels.try_emplace(e.back(), SparsePoly(n));
            it->second.insert_nonzero(ExpVec(e.begin(), e.end() - 1), c);
        }
        return levels;
    };
    std::map<i64, SparsePoly> plev = by_level(ptag), qlev = by_level(qtag);

    std::vector<i64> window(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        window[static_cast<std::size_t>(j)] =
            std::min(sp.poly.deg_in(j), sq.poly.deg_in(j));
    Rng seq_rng = rng.split("seq");
    GeometricSequence seq = make_sequence(F, window, seq_rng, true);

    // term bound per t-level is capped by the window; the point count must
    // still be able to reach twice that
    u64 term_cap = std::min<u64>(seq.window_size(), 1ull << 20);
    u64 cap = 2 * term_cap;
    Rng prng = rng.split("prony");
    Rng vrng = rng.split("verify");

    auto univariate_at = [&](u64 i) -> std::optional<DensePoly> {
        // gcd of the two tagged collapses at point i, monic with val_t = 0
        auto collapse = [&](const std::map<i64, SparsePoly>& levels) {
            std::map<i64, Fp> vals;
            for (auto& [lev, poly] : levels) {
                Fp v = eval_sequence(F, poly, seq, i, 1)[0];
                if (v.v != 0) vals[lev] = v;
            }
            return vals;
        };
        std::map<i64, Fp> pc = collapse(plev), qc = collapse(qlev);
        if (pc.empty() || qc.empty()) return std::nullopt;
        auto to_poly = [&](const std::map<i64, Fp>& vals) {
            i64 lo = vals.begin()->first;
            DensePoly f;
            f.c.assign(static_cast<std::size_t>(vals.rbegin()->first - lo) + 1, Fp{0});
            for (auto& [lev, v] : vals) f.c[static_cast<std::size_t>(lev - lo)] = v;
            f.trim();
            return f;
        };
        DensePoly g = gcd(F, to_poly(pc), to_poly(qc));
        if (g.coeff(0).v == 0) return std::nullopt;  // val_t must stay zero
        return g;
    };

    std::vector<DensePoly> gammas;
    int refreshes = 0;
    for (std::size_t imax = 1; imax <= cap; imax *= 2) {
        while (gammas.size() < imax) {
            auto g = univariate_at(gammas.size());
            if (!g) {
                // restart the whole sequence on a degenerate point
                if (++refreshes > 32)
                    throw verification_failed("regularizing gcd: degenerate points persist");
                Rng orng = rng.split("refresh", static_cast<u64>(refreshes));
                seq.refresh_offset(orng);
                gammas.clear();
                continue;
            }
            gammas.push_back(std::move(*g));
        }
        i64 ec = -1;
        for (auto& g : gammas) ec = std::max(ec, g.deg());
        // per-level adaptive interpolation
        bool ok = true;
        SparsePoly cand(n + 1);
        std::size_t bound = imax / 2 == 0 ? 1 : imax / 2;
        bound = std::min<std::size_t>(bound, static_cast<std::size_t>(term_cap));
        for (i64 e = 0; e <= ec && ok; ++e) {
            std::vector<Fp> vals(imax);
            for (std::size_t i = 0; i < imax; ++i)
                vals[i] = gammas[i].coeff(static_cast<std::size_t>(e));
            if (std::all_of(vals.begin(), vals.end(), [](Fp x) { return x.v == 0; })) continue;
            if (2 * bound > imax) {
                ok = false;
                break;
            }
            auto slice = prony_interpolate(F, vals, seq, bound, prng, imax < cap);
            if (!slice) {
                ok = false;
                break;
            }
            for (auto& [ex, c] : slice->terms()) {
                ExpVec full = ex;
                full.push_back(e);
                cand.insert_nonzero(std::move(full), c);
            }
        }
        if (ok && !cand.is_zero()) {
            // untag with the Laurent monomial correction, then verify
            ExpVec nu(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) nu[static_cast<std::size_t>(j)] = -cand.val_in(j);
            SparsePoly g = shift_exponents(untag(F, cand), nu);
            bool laurent_free = !g.has_negative_exponents();
            if (laurent_free && divides_both(F, g, sp.poly, sq.poly))
                return normalize_leading(F, mul_naive(F, mono, g));
        }
        if (imax == cap) break;
    }
    throw verification_failed("regularizing gcd did not verify");
}

namespace {

i64 dense_deg_of(const SparsePoly& f, int var) { return f.is_zero() ? -1 : f.deg_in(var); }

SparsePoly dense_coeff_slice(const SparsePoly& f, int var, i64 e) {
    SparsePoly s(f.nvars());
    for (auto& [ex, c] : f.terms())
        if (ex[static_cast<std::size_t>(var)] == e) {
            ExpVec e2 = ex;
            e2[static_cast<std::size_t>(var)] = 0;
            s.insert_nonzero(std::move(e2), c);
        }
    return s;
}

SparsePoly gcd_dense_rec(const PrimeField& F, const SparsePoly& a, const SparsePoly& b,
                         int var) {
    if (a.is_zero()) return normalize_leading(F, b);
    if (b.is_zero()) return normalize_leading(F, a);
    if (var < 0) return SparsePoly::constant(F, a.nvars(), F.one());
    int n = a.nvars();
    auto content = [&](const SparsePoly& f) {
        SparsePoly g(n);
        for (i64 e = 0; e <= dense_deg_of(f, var); ++e) {
            SparsePoly s = dense_coeff_slice(f, var, e);
            if (!s.is_zero()) g = gcd_dense_rec(F, g, s, var - 1);
            if (g.is_constant() && !g.is_zero()) break;
        }
        return g;
    };
    if (dense_deg_of(a, var) == 0 && dense_deg_of(b, var) == 0)
        return gcd_dense_rec(F, a, b, var - 1);
    SparsePoly ca = content(a), cb = content(b);
    SparsePoly pa = *exact_div_naive(F, a, ca), pb = *exact_div_naive(F, b, cb);
    while (!pb.is_zero()) {
        i64 da = dense_deg_of(pa, var), db = dense_deg_of(pb, var);
        if (da < db) {
            std::swap(pa, pb);
            std::swap(da, db);
        }
        // pseudo-remainder of pa by pb in x_var
        SparsePoly r = pa;
        while (!r.is_zero() && dense_deg_of(r, var) >= db) {
            i64 dr = dense_deg_of(r, var);
            SparsePoly lr = dense_coeff_slice(r, var, dr);
            SparsePoly lb = dense_coeff_slice(pb, var, db);
            ExpVec shift(static_cast<std::size_t>(n), 0);
            shift[static_cast<std::size_t>(var)] = dr - db;
            r = sub(F, mul_naive(F, r, lb), mul_naive(F, shift_exponents(lr, shift), pb));
        }
        pa = std::move(pb);
        if (r.is_zero()) {
            pb = SparsePoly(n);
        } else {
            pb = *exact_div_naive(F, r, content(r));
        }
    }
    return normalize_leading(F, mul_naive(F, gcd_dense_rec(F, ca, cb, var - 1), pa));
}

}  // namespace

SparsePoly gcd_dense(const PrimeField& F, const SparsePoly& p, const SparsePoly& q) {
    if (p.is_zero() && q.is_zero()) return SparsePoly(p.nvars());
    return gcd_dense_rec(F, p, q, p.nvars() - 1);
}

SparsePoly gcd(const PrimeField& F, const SparsePoly& p, const SparsePoly& q, Rng& rng,
               const GcdConfig& cfg) {
    if (p.is_zero() && q.is_zero()) return SparsePoly(p.nvars());
    if (p.is_zero()) return normalize_leading(F, q);
    if (q.is_zero()) return normalize_leading(F, p);

    bool weight_first = false;
    if (!p.is_constant() && !q.is_constant()) {
        Rng wrng = rng.split("probe");
        WeightVector w = regularizing_weight_pair(F, p, q, cfg.weight_trials, wrng);
        i64 ec = std::max(weight_profile(F, p, w).ec_w, weight_profile(F, q, w).ec_w);
        i64 d = std::max(p.total_degree(), q.total_degree());
        weight_first = ec <= cfg.ecart_threshold_mul * std::max<i64>(d, 1);
    }
    Rng r1 = rng.split("route-a");
    Rng r2 = rng.split("route-b");
    try {
        if (weight_first) {
            try {
                return gcd_regularizing(F, p, q, r1, cfg);
            } catch (const error&) {
                return gcd_iterative(F, p, q, r2, cfg);
            }
        }
        try {
            return gcd_iterative(F, p, q, r1, cfg);
        } catch (const error&) {
            return gcd_regularizing(F, p, q, r2, cfg);
        }
    } catch (const error&) {
        // fields too small for the Kronecker windows land here
        return gcd_dense(F, p, q);
    }
}

}  // namespace spf
