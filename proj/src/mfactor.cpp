#include "spf/mfactor.hpp"

#include <algorithm>
#include <map>

#include "spf/mgcd.hpp"
#include "spf/unipoly.hpp"

namespace spf {

namespace {

// terms grouped by (sum of the first k exponents, trailing exponent): the
// shape of the bivariate collapse A(a^i t, ..., a^i t, u)
struct CollapseSlices {
    std::map<std::pair<i64, i64>, SparsePoly> slices;  // (t-level, u-degree) -> k-var poly
    i64 max_t = 0, max_u = 0;
};

CollapseSlices tu_slices(const SparsePoly& a, int k) {
    CollapseSlices out;
    for (auto& [e, c] : a.terms()) {
        i64 lev = 0;
        for (int j = 0; j < k; ++j) lev += e[static_cast<std::size_t>(j)];
        i64 u = e[static_cast<std::size_t>(k)];
        auto [it, fresh] =
            out.slices.try_emplace({lev, u}, SparsePoly(k));
        it->second.insert_nonzero(ExpVec(e.begin(), e.begin() + k), c);
        out.max_t = std::max(out.max_t, lev);
        out.max_u = std::max(out.max_u, u);
    }
    return out;
}

// evaluations of every slice along the sequence; result[point] is the
// bivariate collapse at that point as a BivPoly in (t, u)
std::vector<BivPoly> collapse_points(const PrimeField& F, const CollapseSlices& sl,
                                     const GeometricSequence& seq, std::size_t m) {
    std::vector<BivPoly> out(m);
    for (auto& b : out) b.rows.resize(static_cast<std::size_t>(sl.max_t) + 1);
    for (auto& [key, poly] : sl.slices) {
        auto [lev, u] = key;
        std::vector<Fp> vals = eval_sequence(F, poly, seq, 0, m);
        for (std::size_t i = 0; i < m; ++i) {
            if (vals[i].v == 0) continue;
            DensePoly& row = out[i].rows[static_cast<std::size_t>(lev)];
            if (row.c.size() <= static_cast<std::size_t>(u))
                row.c.resize(static_cast<std::size_t>(u) + 1, Fp{0});
            row.c[static_cast<std::size_t>(u)] = vals[i];
        }
    }
    for (auto& b : out) {
        for (auto& row : b.rows) row.trim();
        b.trim();
    }
    return out;
}

// t-level slices only (for the factors being evaluated at the same points)
std::map<i64, SparsePoly> t_slices(const SparsePoly& a) {
    std::map<i64, SparsePoly> out;
    int k = a.nvars();
    for (auto& [e, c] : a.terms()) {
        i64 lev = std::accumulate(e.begin(), e.end(), static_cast<i64>(0));
        auto [it, fresh] = out.try_emplace(lev, SparsePoly(k));
        it->second.insert_nonzero(e, c);
    }
    return out;
}

std::vector<DensePoly> factor_points(const PrimeField& F, const SparsePoly& a,
                                     const GeometricSequence& seq, std::size_t m) {
    std::map<i64, SparsePoly> slices = t_slices(a);
    i64 top = slices.empty() ? 0 : slices.rbegin()->first;
    std::vector<DensePoly> out(m);
    for (auto& f : out) f.c.assign(static_cast<std::size_t>(top) + 1, Fp{0});
    for (auto& [lev, poly] : slices) {
        std::vector<Fp> vals = eval_sequence(F, poly, seq, 0, m);
        for (std::size_t i = 0; i < m; ++i) out[i].c[static_cast<std::size_t>(lev)] = vals[i];
    }
    for (auto& f : out) f.trim();
    return out;
}

// reassemble an (k+1)-variable polynomial from the per-point lifted bivariate
// factors, using the known k-variable support of the previous level
SparsePoly interpolate_from_lifts(const PrimeField& F, const SparsePoly& prev,
                                  const std::vector<BivPoly>& lifted,
                                  const GeometricSequence& seq) {
    int k = prev.nvars();
    // group the known support by t-level
    std::map<i64, std::vector<ExpVec>> by_level;
    for (auto& [e, c] : prev.terms()) {
        i64 lev = std::accumulate(e.begin(), e.end(), static_cast<i64>(0));
        by_level[lev].push_back(e);
    }
    i64 max_u = -1;
    for (auto& b : lifted) max_u = std::max(max_u, b.deg_y());
    SparsePoly out(k + 1);
    for (auto& [lev, support] : by_level) {
        for (i64 u = 0; u <= max_u; ++u) {
            std::vector<Fp> vals(lifted.size());
            bool any = false;
            for (std::size_t i = 0; i < lifted.size(); ++i) {
                vals[i] = lifted[i].coeff(static_cast<std::size_t>(lev),
                                          static_cast<std::size_t>(u));
                any |= vals[i].v != 0;
            }
            if (!any) continue;
            SparsePoly slice = interpolate_known_support(F, support, vals, seq, 0);
            for (auto& [e, c] : slice.terms()) {
                ExpVec full = e;
                full.push_back(u);
                out.insert_nonzero(std::move(full), c);
            }
        }
    }
    return out;
}

struct LevelGuard {
    LiftReport* report;
    LiftReport::Level lvl;
    ~LevelGuard() {
        if (report) report->levels.push_back(lvl);
    }
};

}  // namespace

std::pair<SparsePoly, SparsePoly> lift_two(const PrimeField& F, const SparsePoly& f,
                                           const SparsePoly& a, const SparsePoly& b,
                                           const std::vector<Fp>& anchors, Rng& rng,
                                           LiftReport* report) {
    std::vector<SparsePoly> got =
        lift_multi(F, f, {extend_vars(a, f.nvars()), extend_vars(b, f.nvars())}, {1, 1},
                   F.one(), anchors, rng, report);
    return {got[0], got[1]};
}

std::vector<SparsePoly> lift_multi(const PrimeField& F, const SparsePoly& f,
                                   const std::vector<SparsePoly>& a,
                                   const std::vector<int>& mult, Fp lambda,
                                   const std::vector<Fp>& anchors, Rng& rng,
                                   LiftReport* report) {
    int n = f.nvars();
    if (a.empty() || a.size() != mult.size()) throw lift_error("bad factor list");
    std::size_t ell = a.size();

    // current factors, all embedded in n variables with the x_3.. exponents 0
    std::vector<SparsePoly> cur;
    cur.reserve(ell);
    for (auto& ai : a) cur.push_back(extend_vars(ai, n));
    {
        SparsePoly check = SparsePoly::constant(F, n, lambda);
        for (std::size_t j = 0; j < ell; ++j)
            check = mul_naive(F, check, pow_naive(F, cur[j], static_cast<u64>(mult[j])));
        if (!(check == extend_vars(project_prefix(F, f, 2, anchors), n)))
            throw lift_error("bivariate base does not match F^[2]");
    }

    for (int k = 2; k < n; ++k) {
        LevelGuard guard{report, {k + 1, 0, 0, ""}};
        SparsePoly fk1 = extend_vars(project_prefix(F, f, k + 1, anchors), n);
        std::size_t m = 1;
        for (auto& p : cur) m = std::max(m, p.term_count());
        guard.lvl.points = m;

        // evaluation sequence over the first k variables
        std::vector<i64> bounds(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j)
            bounds[static_cast<std::size_t>(j)] = std::max<i64>(f.deg_in(j), 1);
        Rng seq_rng = rng.split("lift-seq", static_cast<u64>(k));
        GeometricSequence seq(F, std::vector<i64>(static_cast<std::size_t>(k), 0), bounds,
                              seq_rng);

        SparsePoly fk1_proj(k + 1);
        for (auto& [e, c] : fk1.terms())
            fk1_proj.insert_nonzero(ExpVec(e.begin(), e.begin() + k + 1), c);
        CollapseSlices fsl = tu_slices(fk1_proj, k);
        std::vector<BivPoly> fpoints = collapse_points(F, fsl, seq, m);

        std::vector<SparsePoly> proj(ell, SparsePoly(k));
        std::vector<i64> proj_deg(ell, 0);
        std::vector<std::vector<DensePoly>> factor_vals(ell);
        for (std::size_t j = 0; j < ell; ++j) {
            for (auto& [e, c] : cur[j].terms())
                proj[j].insert_nonzero(ExpVec(e.begin(), e.begin() + k), c);
            for (auto& [e, c] : proj[j].terms())
                proj_deg[j] = std::max(
                    proj_deg[j], std::accumulate(e.begin(), e.end(), static_cast<i64>(0)));
            factor_vals[j] = factor_points(F, proj[j], seq, m);
        }

        Fp anchor = anchors[static_cast<std::size_t>(k)];
        std::vector<std::vector<BivPoly>> lifted(ell, std::vector<BivPoly>(m));
        for (std::size_t i = 0; i < m; ++i) {
            // shift u so the known fiber sits at the origin
            BivPoly gi = shift_y(F, fpoints[i], anchor);
            std::vector<DensePoly> blocks(ell);
            std::vector<Fp> units(ell);
            Fp mu = lambda;
            for (std::size_t j = 0; j < ell; ++j) {
                DensePoly pj = factor_vals[j][i];
                if (pj.is_zero() || pj.deg() != proj_deg[j])
                    throw lift_error("factor degenerated at a lift point");
                units[j] = pj.lc();
                blocks[j] = monic(F, pj);
                for (int rep = 0; rep < mult[j]; ++rep) mu = F.mul(mu, units[j]);
            }
            BivPoly gs = mul_scalar(F, gi, F.inv(mu));
            Rng hrng = rng.split("hensel", static_cast<u64>(k) * 1000003 + i);
            std::vector<BivPoly> parts = hensel_lift_multi(F, gs, blocks, mult, hrng);
            for (std::size_t j = 0; j < ell; ++j) {
                BivPoly pj = mul_scalar(F, parts[j], units[j]);
                lifted[j][i] = shift_y(F, pj, F.neg(anchor));
            }
        }

        std::vector<SparsePoly> next(ell);
        for (std::size_t j = 0; j < ell; ++j) {
            SparsePoly lifted_poly = interpolate_from_lifts(F, proj[j], lifted[j], seq);
            next[j] = extend_vars(lifted_poly, n);
        }
        // the product must match this level's projection exactly
        SparsePoly check = SparsePoly::constant(F, n, lambda);
        for (std::size_t j = 0; j < ell; ++j)
            check = mul_naive(F, check, pow_naive(F, next[j], static_cast<u64>(mult[j])));
        if (!(check == fk1)) throw lift_error("level re-expansion mismatch");
        cur = std::move(next);
    }
    return cur;
}

namespace {

// variable compression: drop variables a polynomial does not use
struct VarMap {
    std::vector<int> kept;  // kept[i] = original index of compressed variable i
};

std::pair<SparsePoly, VarMap> compress_vars(const SparsePoly& f) {
    VarMap vm;
    for (int j = 0; j < f.nvars(); ++j)
        if (!f.is_zero() && (f.deg_in(j) != 0 || f.val_in(j) != 0)) vm.kept.push_back(j);
    SparsePoly out(static_cast<int>(vm.kept.size()));
    for (auto& [e, c] : f.terms()) {
        ExpVec e2(vm.kept.size());
        for (std::size_t i = 0; i < vm.kept.size(); ++i)
            e2[i] = e[static_cast<std::size_t>(vm.kept[i])];
        out.insert_nonzero(std::move(e2), c);
    }
    return {out, vm};
}

SparsePoly expand_vars(const SparsePoly& f, const VarMap& vm, int n) {
    SparsePoly out(n);
    for (auto& [e, c] : f.terms()) {
        ExpVec e2(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < vm.kept.size(); ++i)
            e2[static_cast<std::size_t>(vm.kept[i])] = e[i];
        out.insert_nonzero(std::move(e2), c);
    }
    return out;
}

void push_factor(const PrimeField& F, Factorization& fac, const SparsePoly& g, int mult) {
    if (g.is_constant()) return;  // units never enter the factor list
    SparsePoly ng = normalize_leading(F, g);
    for (auto& [existing, m] : fac.factors)
        if (existing == ng) {
            m += mult;
            return;
        }
    fac.factors.emplace_back(std::move(ng), mult);
}

void canonicalize(const PrimeField& F, Factorization& fac) {
    (void)F;
    std::sort(fac.factors.begin(), fac.factors.end(), [](const auto& x, const auto& y) {
        const SparsePoly& a = x.first;
        const SparsePoly& b = y.first;
        if (a.term_count() != b.term_count()) return a.term_count() < b.term_count();
        auto ia = a.terms().begin();
        auto ib = b.terms().begin();
        for (; ia != a.terms().end(); ++ia, ++ib) {
            if (GradedLexLess{}(ia->first, ib->first)) return true;
            if (GradedLexLess{}(ib->first, ia->first)) return false;
            if (ia->second.v != ib->second.v) return ia->second.v < ib->second.v;
        }
        return x.second < y.second;
    });
}

SparsePoly expand_factorization(const PrimeField& F, const Factorization& fac, int n) {
    SparsePoly out = SparsePoly::constant(F, n, fac.unit);
    for (auto& [g, m] : fac.factors) out = mul_naive(F, out, pow_naive(F, g, static_cast<u64>(m)));
    return out;
}

// irreducible factorization of a square-free, content-free part whose
// variables are all effective (compressed)
std::vector<SparsePoly> factor_part(const PrimeField& F, const SparsePoly& s, Rng& rng,
                                    const FactorOptions& opts, LiftReport* report,
                                    int depth);

std::vector<SparsePoly> factor_part_by_lift(const PrimeField& F, const SparsePoly& s,
                                            Rng& rng, const FactorOptions& opts,
                                            LiftReport* report, int depth) {
    int n = s.nvars();
    for (int attempt = 0; attempt < opts.anchor_retries; ++attempt) {
        Rng arng = rng.split("anchors", static_cast<u64>(attempt));
        std::vector<Fp> anchors(static_cast<std::size_t>(n));
        for (auto& c : anchors) c = F.random_nonzero(arng);
        SparsePoly f2 = project_prefix(F, s, 2, anchors);
        if (f2.is_zero() || f2.is_constant()) continue;
        BivFactorization base;
        try {
            Rng brng = arng.split("bivfactor");
            base = biv_factor(F, from_sparse(F, f2), brng);
        } catch (const error&) {
            continue;
        }
        bool squarefree_base = std::all_of(base.parts.begin(), base.parts.end(),
                                           [](const auto& pm) { return pm.second == 1; });
        if (!squarefree_base) continue;  // unfaithful anchors: s itself is square-free
        if (base.parts.size() == 1) {
            // the collapse stayed irreducible, so s is irreducible (whp)
            return {normalize_leading(F, s)};
        }
        std::vector<SparsePoly> a;
        std::vector<int> mults;
        for (auto& [g, m] : base.parts) {
            a.push_back(to_sparse(F, g));
            mults.push_back(1);
        }
        try {
            Rng lrng = arng.split("lift");
            std::vector<SparsePoly> lifted =
                lift_multi(F, s, a, mults, base.unit, anchors, lrng, report);
            SparsePoly check = SparsePoly::constant(F, n, base.unit);
            for (auto& g : lifted) check = mul_naive(F, check, g);
            if (check == s) {
                std::vector<SparsePoly> out;
                for (auto& g : lifted) out.push_back(normalize_leading(F, g));
                return out;
            }
        } catch (const error&) {
        }
    }

    if (opts.allow_substitution && depth == 0) {
        // one random unimodular monomial substitution with nonnegative entries
        Rng mrng = rng.split("subst");
        std::vector<std::vector<i64>> M(static_cast<std::size_t>(n),
                                        std::vector<i64>(static_cast<std::size_t>(n), 0));
        for (int i = 0; i < n; ++i) {
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
            for (int j = 0; j < i; ++j)
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    mrng.range(0, 2);
        }
        SparsePoly mapped = monomial_map(F, s, M);
        FactorOptions sub_opts = opts;
        sub_opts.allow_substitution = false;
        Rng srng = rng.split("subst-run");
        Factorization inner = factor_irreducible(F, mapped, srng, sub_opts, report);
        // invert the substitution on every factor; monomial parts are units in
        // the Laurent ring and must cancel against the valuation of s
        std::vector<std::vector<i64>> Minv(static_cast<std::size_t>(n),
                                           std::vector<i64>(static_cast<std::size_t>(n), 0));
        // unit lower-triangular inverse by forward substitution
        for (int i = 0; i < n; ++i) {
            Minv[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
            for (int j = 0; j < i; ++j) {
                i64 acc = 0;
                for (int t2 = j; t2 < i; ++t2)
                    acc += M[static_cast<std::size_t>(i)][static_cast<std::size_t>(t2)] *
                           Minv[static_cast<std::size_t>(t2)][static_cast<std::size_t>(j)];
                Minv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -acc;
            }
        }
        std::vector<SparsePoly> out;
        SparsePoly check = SparsePoly::constant(F, n, inner.unit);
        for (auto& [g, m] : inner.factors) {
            SparsePoly back = monomial_map(F, g, Minv);
            ExpVec strip = back.val_vec();
            for (auto& x : strip) x = -x;
            back = shift_exponents(back, strip);
            for (int rep = 0; rep < m; ++rep) {
                if (!back.is_constant()) out.push_back(normalize_leading(F, back));
                check = mul_naive(F, check, back);
            }
        }
        // re-expansion modulo the stripped monomials must give s back exactly
        Fp lc_fix = F.div(s.leading_term().second, check.leading_term().second);
        check = mul_scalar(F, check, lc_fix);
        if (check == mul_scalar(F, normalize_leading(F, s), s.leading_term().second) ||
            check == s) {
            return out;
        }
        throw inconclusive("substitution rescue produced an inconsistent factorization");
    }
    throw inconclusive("no anchor admitted a liftable bivariate factorization");
}

std::vector<SparsePoly> factor_part(const PrimeField& F, const SparsePoly& s, Rng& rng,
                                    const FactorOptions& opts, LiftReport* report,
                                    int depth) {
    auto [c, vm] = compress_vars(s);
    int n_eff = c.nvars();
    std::vector<SparsePoly> got;
    if (n_eff == 0) return got;
    if (n_eff == 1) {
        Rng urng = rng.split("uni");
        UniFactorization uf = factor_univariate(F, to_dense(F, c), urng);
        for (auto& [q, m] : uf.parts)
            for (int rep = 0; rep < m; ++rep) got.push_back(from_dense(F, q));
    } else if (n_eff == 2) {
        Rng brng = rng.split("biv");
        BivFactorization bf = biv_factor(F, from_sparse(F, c), brng);
        for (auto& [q, m] : bf.parts)
            for (int rep = 0; rep < m; ++rep) got.push_back(to_sparse(F, q));
    } else {
        Rng lrng = rng.split("nvar");
        got = factor_part_by_lift(F, c, lrng, opts, report, depth);
    }
    std::vector<SparsePoly> out;
    for (auto& g : got) out.push_back(normalize_leading(F, expand_vars(g, vm, s.nvars())));
    return out;
}

}  // namespace

Factorization factor_irreducible(const PrimeField& F, const SparsePoly& f, Rng& rng,
                                 const FactorOptions& opts, LiftReport* report) {
    if (f.is_zero()) throw zero_polynomial();
    int n = f.nvars();
    Factorization out;
    if (f.is_constant()) {
        out.unit = f.leading_term().second;
        return out;
    }

    // monomial content first: x_j^v are the trivial factors
    SparsePoly work = f;
    {
        ExpVec vals = work.val_vec();
        ExpVec neg = vals;
        for (auto& x : neg) x = -x;
        work = shift_exponents(work, neg);
        for (int j = 0; j < n; ++j)
            if (vals[static_cast<std::size_t>(j)] > 0)
                push_factor(F, out, SparsePoly::variable(F, n, j),
                            static_cast<int>(vals[static_cast<std::size_t>(j)]));
    }

    // general content: peel offending variables until content-free
    {
        Rng crng = rng.split("content");
        bool progress = true;
        while (progress && !work.is_constant()) {
            progress = false;
            std::vector<int> off = contentfree_test(F, work, crng);
            for (int var : off) {
                SparsePoly cont, prim;
                try {
                    std::tie(cont, prim) = content_extract(F, work, var, crng);
                } catch (const error&) {
                    continue;  // probe false positive
                }
                Factorization inner = factor_irreducible(F, cont, crng, opts, report);
                out.unit = F.mul(out.unit, inner.unit);
                for (auto& [g, m] : inner.factors) push_factor(F, out, g, m);
                work = prim;
                progress = true;
                break;
            }
        }
    }

    if (!work.is_constant()) {
        Rng qrng = rng.split("squarefree");
        SparseFactorization sq = msquarefree(F, work, qrng);
        for (auto& [part, mult] : sq.parts) {
            Rng prng = rng.split("part", static_cast<u64>(mult));
            std::vector<SparsePoly> irr = factor_part(F, part, prng, opts, report, 0);
            for (auto& g : irr) push_factor(F, out, g, mult);
        }
    }

    // unit and the binding verification
    canonicalize(F, out);
    out.unit = F.one();
    SparsePoly expanded = expand_factorization(F, out, n);
    Fp lead = expanded.leading_term().second;
    out.unit = F.div(f.leading_term().second, lead);
    expanded = mul_scalar(F, expanded, out.unit);
    if (!(expanded == f)) throw inconclusive("factorization failed re-expansion");
    {
        // one extra random-point identity check
        Rng vrng = rng.split("verify");
        std::vector<Fp> pt(static_cast<std::size_t>(n));
        for (auto& x : pt) x = F.random_nonzero(vrng);
        if (eval(F, expanded, pt) != eval(F, f, pt))
            throw inconclusive("factorization failed the random point check");
    }
    return out;
}

namespace {

// adaptive interpolation of an n-variable polynomial from bivariate (x1, t)
// collapses supplied per point; slices keyed by (x1-degree, t-level)
std::optional<SparsePoly> interpolate_collapses(
    const PrimeField& F, const GeometricSequence& seq,
    const std::function<std::optional<BivPoly>(u64)>& gamma, Rng& rng) {
    u64 term_cap = std::min<u64>(seq.window_size(), 1ull << 20);
    u64 cap = 2 * term_cap;
    Rng prng = rng.split("prony");
    std::vector<BivPoly> vals;
    int k = seq.nvars();  // number of collapsed variables (x_2 .. x_n)
    for (std::size_t imax = 1; imax <= cap; imax *= 2) {
        while (vals.size() < imax) {
            auto g = gamma(vals.size());
            if (!g) return std::nullopt;
            vals.push_back(std::move(*g));
        }
        i64 dx = -1, dt = -1;
        for (auto& b : vals) {
            dx = std::max(dx, b.deg_x());
            dt = std::max(dt, b.deg_y());
        }
        std::size_t bound = std::max<std::size_t>(imax / 2, 1);
        bound = std::min<std::size_t>(bound, static_cast<std::size_t>(term_cap));
        if (2 * bound > imax) continue;
        bool ok = true;
        SparsePoly cand(k + 1);  // (x1, x2, ..., xn)
        std::vector<std::vector<SparsePoly>> slices(
            static_cast<std::size_t>(dx + 1),
            std::vector<SparsePoly>(static_cast<std::size_t>(dt + 1), SparsePoly(k)));
        for (i64 a = 0; a <= dx && ok; ++a) {
            for (i64 t = 0; t <= dt && ok; ++t) {
                std::vector<Fp> level_vals(imax);
                bool any = false;
                for (std::size_t i = 0; i < imax; ++i) {
                    level_vals[i] = vals[i].coeff(static_cast<std::size_t>(a),
                                                  static_cast<std::size_t>(t));
                    any |= level_vals[i].v != 0;
                }
                if (!any) continue;
                auto slice = prony_interpolate(F, level_vals, seq, bound, prng, imax < cap);
                if (!slice) {
                    ok = false;
                    break;
                }
                slices[static_cast<std::size_t>(a)][static_cast<std::size_t>(t)] = *slice;
                for (auto& [ex, c] : slice->terms()) {
                    ExpVec full;
                    full.reserve(ex.size() + 1);
                    full.push_back(a);
                    full.insert(full.end(), ex.begin(), ex.end());
                    cand.insert_nonzero(std::move(full), c);
                }
            }
        }
        if (ok) {
            auto probe = gamma(imax);
            if (!probe) return std::nullopt;
            std::vector<Fp> pt = seq.point(imax);
            bool match = true;
            for (i64 a = 0; a <= std::max(dx, probe->deg_x()) && match; ++a)
                for (i64 t = 0; t <= std::max(dt, probe->deg_y()) && match; ++t) {
                    Fp want = probe->coeff(static_cast<std::size_t>(a),
                                           static_cast<std::size_t>(t));
                    Fp got = (a <= dx && t <= dt)
                                 ? eval(F,
                                        slices[static_cast<std::size_t>(a)]
                                              [static_cast<std::size_t>(t)],
                                        pt)
                                 : Fp{0};
                    match = want == got;
                }
            if (match) return cand;
        }
    }
    return std::nullopt;
}

// F(x1, b2 a2^i t, ..., bn an^i t) as a BivPoly in (x1, t)
BivPoly projective_collapse(const PrimeField& F, const SparsePoly& f,
                            const GeometricSequence& seq, u64 i) {
    std::vector<Fp> pt = seq.point(i);
    BivPoly out;
    for (auto& [e, c] : f.terms()) {
        std::size_t a = static_cast<std::size_t>(e[0]);
        i64 lev = 0;
        Fp coef = c;
        for (std::size_t j = 1; j < e.size(); ++j) {
            lev += e[j];
            if (e[j] != 0) coef = F.mul(coef, F.pow_i(pt[j - 1], e[j]));
        }
        if (coef.v == 0) continue;
        std::size_t t = static_cast<std::size_t>(lev);
        if (out.rows.size() <= a) out.rows.resize(a + 1);
        if (out.rows[a].c.size() <= t) out.rows[a].c.resize(t + 1, Fp{0});
        out.rows[a].c[t] = F.add(out.rows[a].c[t], coef);
    }
    for (auto& row : out.rows) row.trim();
    out.trim();
    return out;
}

// move the x1-slot of a recovered polynomial back into full variable order:
// interpolate_collapses returns (x1, x2, ..., xn) already, so nothing to do;
// kept for symmetry if the layout ever changes
SparsePoly finish_candidate(SparsePoly cand) { return cand; }

}  // namespace

std::pair<SparsePoly, SparsePoly> factor_projective(const PrimeField& F, const SparsePoly& f,
                                                    const DensePoly& p0, const DensePoly& q0,
                                                    Rng& rng) {
    int n = f.nvars();
    if (n < 2) throw hypothesis_violated("need at least two variables");
    std::map<int, Fp> zeros;
    for (int j = 1; j < n; ++j) zeros[j] = Fp{0};
    SparsePoly f0_sparse = substitute(F, f, zeros);
    SparsePoly f0_1(1);
    for (auto& [e, c] : f0_sparse.terms()) f0_1.insert_nonzero(ExpVec{e[0]}, c);
    DensePoly f0 = to_dense(F, f0_1);
    if (f0.deg() != f.deg_in(0)) throw hypothesis_violated("H1: degree drops at the origin");
    if (gcd(F, p0, q0).deg() != 0) throw hypothesis_violated("H2: split is not coprime");
    if (!(mul(F, p0, q0) == f0)) throw hypothesis_violated("split does not match F(x1,0,...)");
    if (p0.lc().v != 1) throw hypothesis_violated("p0 must be monic");

    std::vector<i64> bounds(static_cast<std::size_t>(n - 1));
    for (int j = 1; j < n; ++j) bounds[static_cast<std::size_t>(j - 1)] = f.deg_in(j);
    Rng seq_rng = rng.split("seq");
    GeometricSequence seq(F, std::vector<i64>(static_cast<std::size_t>(n - 1), 0), bounds,
                          seq_rng);

    auto gamma = [&](u64 i) -> std::optional<BivPoly> {
        BivPoly fi = projective_collapse(F, f, seq, i);
        try {
            Rng hrng = rng.split("hensel", i);
            auto [pl, ql] = hensel_lift_two(F, fi, p0, q0, hrng);
            (void)ql;
            return pl;
        } catch (const error&) {
            return std::nullopt;
        }
    };
    Rng irng = rng.split("interp");
    auto cand = interpolate_collapses(F, seq, gamma, irng);
    if (!cand) throw verification_failed("projective lifting did not stabilize");
    SparsePoly p = finish_candidate(*cand);
    auto q = exact_div_naive(F, f, p);
    if (!q || q->has_negative_exponents())
        throw verification_failed("projective candidate does not divide");
    return {normalize_leading(F, p), normalize_leading(F, *q)};
}

std::pair<SparsePoly, SparsePoly> factor_single_slope(const PrimeField& F, const SparsePoly& f,
                                                      Rng& rng) {
    int n = f.nvars();
    if (n < 2) throw hypothesis_violated("need at least two variables");
    // projected support and its polygon
    std::vector<std::pair<i64, i64>> pts;
    for (auto& [e, c] : f.terms()) {
        i64 rest = 0;
        for (std::size_t j = 1; j < e.size(); ++j) rest += e[j];
        pts.emplace_back(e[0], rest);
    }
    NewtonPolygon np = newton_polygon(pts);
    if (np.edges.empty()) throw hypothesis_violated("projected polygon has no edge");
    auto edge = np.edges.back();
    i64 p_slope = edge.p, q_slope = edge.q;

    WeightVector w;
    w.w.assign(static_cast<std::size_t>(n), q_slope);
    w.w[0] = p_slope;
    WeightProfile prof = weight_profile(F, f, w);
    SparsePoly tp = prof.tp;
    if (tp.deg_in(0) != f.deg_in(0))
        throw hypothesis_violated("H1': trailing part loses the x1-degree");

    if (tp == f) {
        // w-homogeneous: Remark 7.4 reduction through x1 := 1
        if (p_slope == 0) throw hypothesis_violated("degenerate homogeneous support");
        SparsePoly reduced = substitute(F, f, {{0, F.one()}});
        Rng rrng = rng.split("homog");
        Factorization inner = factor_irreducible(F, reduced, rrng);
        if (inner.factors.size() < 2 ||
            (inner.factors.size() == 1 && inner.factors[0].second < 2))
            throw hypothesis_violated("trailing part is irreducible");
        // re-homogenize each factor: x1-exponents follow from the weight
        auto rehom = [&](const SparsePoly& g) -> std::optional<SparsePoly> {
            // choose C so that every exponent is integral and minimal >= 0
            std::optional<i64> residue;
            i64 cmin = std::numeric_limits<i64>::min();
            for (auto& [e, c] : g.terms()) {
                i64 rest = 0;
                for (std::size_t j = 1; j < e.size(); ++j) rest += e[j];
                i64 r = ((q_slope * rest) % p_slope + p_slope) % p_slope;
                if (!residue)
                    residue = r;
                else if (*residue != r)
                    return std::nullopt;
                cmin = std::max(cmin, q_slope * rest);
            }
            // smallest C with C >= q*rest for all terms and C = r (mod p)
            i64 C = cmin;
            while (((C % p_slope) + p_slope) % p_slope !=
                   ((*residue % p_slope) + p_slope) % p_slope)
                ++C;
            SparsePoly out(n);
            for (auto& [e, c] : g.terms()) {
                i64 rest = 0;
                for (std::size_t j = 1; j < e.size(); ++j) rest += e[j];
                i64 e1 = (C - q_slope * rest) / p_slope;
                if (e1 < 0) return std::nullopt;
                ExpVec e2 = e;
                e2[0] = e1;
                out.insert_nonzero(std::move(e2), c);
            }
            return out;
        };
        std::vector<SparsePoly> homs;
        for (auto& [g, m] : inner.factors)
            for (int rep = 0; rep < m; ++rep) {
                auto h = rehom(g);
                if (!h) throw hypothesis_violated("factors do not re-homogenize");
                homs.push_back(*h);
            }
        SparsePoly first = homs[0];
        SparsePoly rest = SparsePoly::constant(F, n, inner.unit);
        for (std::size_t i = 1; i < homs.size(); ++i) rest = mul_naive(F, rest, homs[i]);
        // absorb a possible monomial mismatch in x1
        SparsePoly check = mul_naive(F, first, rest);
        if (!(check == f)) {
            auto qd = exact_div_naive(F, f, first);
            if (!qd || qd->has_negative_exponents())
                throw lift_error("homogeneous reconstruction failed");
            rest = *qd;
        }
        return {normalize_leading(F, first), normalize_leading(F, mul_scalar(F, rest, F.inv(rest.leading_term().second)))};
    }

    // factor the edge polynomial recursively (it has strictly fewer terms)
    Rng erng = rng.split("edge");
    Factorization edge_fac = factor_irreducible(F, tp, erng);
    std::size_t nf = 0;
    for (auto& [g, m] : edge_fac.factors) nf += static_cast<std::size_t>(m);
    if (nf < 2) throw hypothesis_violated("edge polynomial is irreducible");
    std::vector<SparsePoly> pieces;
    for (auto& [g, m] : edge_fac.factors)
        for (int rep = 0; rep < m; ++rep) pieces.push_back(g);
    if (pieces.size() > 16) throw hypothesis_violated("too many edge pieces");

    std::vector<i64> bounds(static_cast<std::size_t>(n - 1));
    for (int j = 1; j < n; ++j) bounds[static_cast<std::size_t>(j - 1)] = f.deg_in(j);
    Rng seq_rng = rng.split("seq");
    GeometricSequence seq(F, std::vector<i64>(static_cast<std::size_t>(n - 1), 0), bounds,
                          seq_rng);

    for (u64 mask = 1; mask + 1 < (1ull << pieces.size()); ++mask) {
        if (mask & 1) continue;  // fix piece 0 on the Q side to kill mirror duplicates
        SparsePoly tpP = SparsePoly::constant(F, n, F.one());
        SparsePoly tpQ = SparsePoly::constant(F, n, edge_fac.unit);
        for (std::size_t j = 0; j < pieces.size(); ++j) {
            if (mask & (1ull << j))
                tpP = mul_naive(F, tpP, pieces[j]);
            else
                tpQ = mul_naive(F, tpQ, pieces[j]);
        }
        auto gamma = [&](u64 i) -> std::optional<BivPoly> {
            BivPoly fi = projective_collapse(F, f, seq, i);
            BivPoly tpPi = projective_collapse(F, tpP, seq, i);
            BivPoly tpQi = projective_collapse(F, tpQ, seq, i);
            try {
                Rng hrng = rng.split("slope-hensel", mask * 1000003 + i);
                auto [pl, ql] =
                    hensel_lift_single_slope(F, fi, tpPi, tpQi, p_slope, q_slope, hrng);
                (void)ql;
                return pl;
            } catch (const error&) {
                return std::nullopt;
            }
        };
        Rng irng = rng.split("interp", mask);
        auto cand = interpolate_collapses(F, seq, gamma, irng);
        if (!cand) continue;
        auto q = exact_div_naive(F, *cand, SparsePoly::constant(F, n, F.one()));
        auto quot = exact_div_naive(F, f, *cand);
        if (!quot || quot->has_negative_exponents()) continue;
        return {normalize_leading(F, *cand), normalize_leading(F, *quot)};
    }
    throw lift_error("no edge bipartition lifted to a factorization");
}

}  // namespace spf
