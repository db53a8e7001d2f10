#include "spf/sparseinterp.hpp"

#include <algorithm>

#include "spf/unipoly.hpp"

namespace spf {

GeometricSequence::GeometricSequence(const PrimeField& field, std::vector<i64> lo,
                                     std::vector<i64> hi, Rng& rng)
    : field_(&field), lo_(std::move(lo)), hi_(std::move(hi)) {
    std::size_t n = lo_.size();
    if (hi_.size() != n) throw error("window bounds disagree");
    radix_.assign(n + 1, 1);
    u128 acc = 1;
    for (std::size_t j = 0; j < n; ++j) {
        if (hi_[j] < lo_[j]) throw error("empty exponent window");
        u64 width = static_cast<u64>(hi_[j] - lo_[j]) + 1;
        acc *= width;
        if (acc >= field.modulus() - 1) throw kronecker_overflow();
        radix_[j + 1] = static_cast<u64>(acc);
    }
    window_ = radix_[n];
    Fp g = field.primitive_root();
    alpha_.resize(n);
    for (std::size_t j = 0; j < n; ++j) alpha_[j] = field.pow(g, radix_[j]);
    beta_.resize(n);
    refresh_offset(rng);

    __int128 base = 0;
    for (std::size_t j = 0; j < n; ++j)
        base += static_cast<__int128>(radix_[j]) * lo_[j];
    __int128 m = static_cast<__int128>(field.modulus()) - 1;
    base %= m;
    if (base < 0) base += m;
    base_log_ = static_cast<u64>(base);
}

void GeometricSequence::refresh_offset(Rng& rng) {
    for (auto& b : beta_) b = field_->random_nonzero(rng);
}

std::vector<Fp> GeometricSequence::point(u64 i) const {
    std::vector<Fp> out(alpha_.size());
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = field_->mul(beta_[j], field_->pow(alpha_[j], i));
    return out;
}

Fp GeometricSequence::root_of(const ExpVec& e) const {
    Fp r = field_->one();
    for (std::size_t j = 0; j < e.size(); ++j)
        r = field_->mul(r, field_->pow_i(alpha_[j], e[j]));
    return r;
}

std::optional<ExpVec> GeometricSequence::decode_root(Fp root) const {
    u64 d = field_->discrete_log(root);
    u64 m = field_->modulus() - 1;
    u64 k = d >= base_log_ ? d - base_log_ : d + m - base_log_;
    if (k >= window_) return std::nullopt;
    ExpVec e(lo_.size());
    for (std::size_t j = 0; j < lo_.size(); ++j) {
        u64 width = static_cast<u64>(hi_[j] - lo_[j]) + 1;
        e[j] = lo_[j] + static_cast<i64>(k % width);
        k /= width;
    }
    return e;
}

GeometricSequence make_sequence(const PrimeField& F, const std::vector<i64>& degree_bounds,
                                Rng& rng, bool laurent) {
    std::vector<i64> lo(degree_bounds.size(), 0), hi = degree_bounds;
    if (laurent)
        for (std::size_t j = 0; j < lo.size(); ++j) lo[j] = -degree_bounds[j];
    return GeometricSequence(F, std::move(lo), std::move(hi), rng);
}

std::vector<Fp> eval_sequence(const PrimeField& F, const SparsePoly& a,
                              const GeometricSequence& seq, u64 i0, std::size_t m) {
    std::vector<Fp> roots, state;
    roots.reserve(a.term_count());
    state.reserve(a.term_count());
    for (auto& [e, c] : a.terms()) {
        Fp r = seq.root_of(e);
        Fp coef = c;
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[j] != 0) coef = F.mul(coef, F.pow_i(seq.beta()[j], e[j]));
        roots.push_back(r);
        state.push_back(F.mul(coef, F.pow(r, i0)));
    }
    std::vector<Fp> out(m, Fp{0});
    for (std::size_t i = 0; i < m; ++i) {
        Fp acc{0};
        for (std::size_t k = 0; k < state.size(); ++k) {
            acc = F.add(acc, state[k]);
            state[k] = F.mul(state[k], roots[k]);
        }
        out[i] = acc;
    }
    return out;
}

DensePoly berlekamp_massey(const PrimeField& F, const std::vector<Fp>& values) {
    std::vector<Fp> c = {F.one()};  // connection poly, c[0] + c[1] z + ...
    std::vector<Fp> b = {F.one()};
    std::size_t l = 0, m = 1;
    Fp bb = F.one();
    for (std::size_t i = 0; i < values.size(); ++i) {
        Fp delta = values[i];
        for (std::size_t j = 1; j <= l; ++j)
            if (j < c.size()) delta = F.add(delta, F.mul(c[j], values[i - j]));
        if (delta.v == 0) {
            ++m;
        } else if (2 * l <= i) {
            std::vector<Fp> t = c;
            Fp coef = F.neg(F.div(delta, bb));
            if (c.size() < b.size() + m) c.resize(b.size() + m, Fp{0});
            for (std::size_t j = 0; j < b.size(); ++j)
                c[j + m] = F.add(c[j + m], F.mul(coef, b[j]));
            l = i + 1 - l;
            b = std::move(t);
            bb = delta;
            m = 1;
        } else {
            Fp coef = F.neg(F.div(delta, bb));
            if (c.size() < b.size() + m) c.resize(b.size() + m, Fp{0});
            for (std::size_t j = 0; j < b.size(); ++j)
                c[j + m] = F.add(c[j + m], F.mul(coef, b[j]));
            ++m;
        }
    }
    // c encodes values[i] + sum_{j>=1} c[j] values[i-j] = 0; flip into the
    // monic connection polynomial z^l - c_1 z^(l-1) - ...
    DensePoly lambda;
    lambda.c.assign(l + 1, Fp{0});
    lambda.c[l] = F.one();
    for (std::size_t j = 1; j <= l; ++j)
        lambda.c[l - j] = j < c.size() ? c[j] : Fp{0};
    lambda.trim();
    return lambda;
}

std::optional<SparsePoly> prony_interpolate(const PrimeField& F, const std::vector<Fp>& values,
                                            const GeometricSequence& seq, std::size_t s,
                                            Rng& rng, bool reject_saturated) {
    if (values.size() < 2 * s) throw error("prony_interpolate needs 2s values");
    std::vector<Fp> v(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(2 * s));
    DensePoly lambda = berlekamp_massey(F, v);
    std::size_t sigma = static_cast<std::size_t>(std::max<i64>(lambda.deg(), 0));
    if (sigma == 0) {
        // zero sequence -> zero polynomial; anything else is inconsistent
        for (auto x : values)
            if (x.v != 0) return std::nullopt;
        return SparsePoly(seq.nvars());
    }
    if (sigma > s) return std::nullopt;
    if (reject_saturated && sigma == s) return std::nullopt;
    if (lambda.coeff(0).v == 0) return std::nullopt;  // 0 is never a term root
    if (gcd(F, lambda, derivative(F, lambda)).deg() != 0) return std::nullopt;
    std::vector<Fp> roots = find_roots(F, lambda, rng);
    if (roots.size() != sigma) return std::nullopt;

    std::vector<ExpVec> support;
    support.reserve(sigma);
    for (Fp r : roots) {
        auto e = seq.decode_root(r);
        if (!e) return std::nullopt;
        support.push_back(std::move(*e));
    }
    std::vector<Fp> coeffs = transposed_vandermonde_solve(F, roots, values);
    // consistency over the remaining samples makes the result exact
    {
        std::vector<Fp> state(sigma);
        for (std::size_t k = 0; k < sigma; ++k)
            state[k] = F.mul(coeffs[k], F.pow(roots[k], sigma));
        for (std::size_t i = sigma; i < values.size(); ++i) {
            Fp acc{0};
            for (std::size_t k = 0; k < sigma; ++k) {
                acc = F.add(acc, state[k]);
                state[k] = F.mul(state[k], roots[k]);
            }
            if (acc != values[i]) return std::nullopt;
        }
    }
    SparsePoly out(seq.nvars());
    for (std::size_t k = 0; k < sigma; ++k) {
        Fp c = coeffs[k];
        for (std::size_t j = 0; j < support[k].size(); ++j)
            if (support[k][j] != 0) c = F.mul(c, F.pow_i(F.inv(seq.beta()[j]), support[k][j]));
        out.add_term(F, support[k], c);
    }
    return out;
}

SparsePoly interpolate_known_support(const PrimeField& F, const std::vector<ExpVec>& support,
                                     const std::vector<Fp>& values,
                                     const GeometricSequence& seq, u64 i0) {
    std::vector<Fp> roots;
    roots.reserve(support.size());
    for (auto& e : support) roots.push_back(seq.root_of(e));
    std::vector<Fp> coeffs = transposed_vandermonde_solve(F, roots, values);
    SparsePoly out(seq.nvars());
    for (std::size_t k = 0; k < support.size(); ++k) {
        Fp c = F.mul(coeffs[k], F.pow_i(F.inv(roots[k]), static_cast<i64>(i0)));
        for (std::size_t j = 0; j < support[k].size(); ++j)
            if (support[k][j] != 0) c = F.mul(c, F.pow_i(F.inv(seq.beta()[j]), support[k][j]));
        out.add_term(F, support[k], c);
    }
    return out;
}

bool verify_candidate(const PrimeField& F, const EvalFn& oracle, const SparsePoly& candidate,
                      Rng& rng) {
    std::vector<Fp> point(static_cast<std::size_t>(candidate.nvars()));
    for (auto& x : point) x = F.random_nonzero(rng);
    return oracle(point) == eval(F, candidate, point);
}

namespace {

u64 capped_window_terms(const GeometricSequence& seq) {
    return std::min<u64>(seq.window_size(), 1ull << 22);
}

}  // namespace

SparsePoly sparse_mul(const PrimeField& F, const SparsePoly& a, const SparsePoly& b, Rng& rng) {
    if (a.nvars() != b.nvars()) throw error("variable counts disagree");
    if (a.is_zero() || b.is_zero()) return SparsePoly(a.nvars());
    int n = a.nvars();
    std::vector<i64> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        lo[static_cast<std::size_t>(j)] = a.val_in(j) + b.val_in(j);
        hi[static_cast<std::size_t>(j)] = a.deg_in(j) + b.deg_in(j);
    }
    Rng seq_rng = rng.split("mul-seq");
    GeometricSequence seq(F, lo, hi, seq_rng);
    u64 bound = a.term_count() * b.term_count();
    bound = std::min<u64>(bound, capped_window_terms(seq));
    EvalFn oracle = [&](const std::vector<Fp>& pt) {
        return F.mul(eval(F, a, pt), eval(F, b, pt));
    };
    Rng prng = rng.split("mul-prony");
    Rng vrng = rng.split("mul-verify");
    std::size_t s = 1;
    for (;;) {
        std::vector<Fp> va = eval_sequence(F, a, seq, 0, 2 * s);
        std::vector<Fp> vb = eval_sequence(F, b, seq, 0, 2 * s);
        std::vector<Fp> vc(2 * s);
        for (std::size_t i = 0; i < 2 * s; ++i) vc[i] = F.mul(va[i], vb[i]);
        auto cand = prony_interpolate(F, vc, seq, s, prng, s < bound);
        if (cand) {
            // at the hard term bound the reconstruction is deterministic
            if (s >= bound) return *cand;
            if (verify_candidate(F, oracle, *cand, vrng)) return *cand;
        } else if (s >= bound) {
            throw verification_failed("sparse_mul did not stabilize at the term bound");
        }
        s = std::min<std::size_t>(s * 2, static_cast<std::size_t>(bound));
    }
}

std::optional<SparsePoly> sparse_exact_divide(const PrimeField& F, const SparsePoly& c,
                                              const SparsePoly& a, Rng& rng) {
    if (a.is_zero()) throw division_by_zero();
    if (c.is_zero()) return SparsePoly(c.nvars());
    int n = c.nvars();
    std::vector<i64> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        lo[static_cast<std::size_t>(j)] = c.val_in(j) - a.val_in(j);
        hi[static_cast<std::size_t>(j)] = c.deg_in(j) - a.deg_in(j);
        if (hi[static_cast<std::size_t>(j)] < lo[static_cast<std::size_t>(j)])
            return std::nullopt;
    }
    Rng seq_rng = rng.split("div-seq");
    GeometricSequence seq(F, lo, hi, seq_rng);
    u64 bound = capped_window_terms(seq);
    EvalFn oracle = [&](const std::vector<Fp>& pt) {
        Fp av = eval(F, a, pt);
        if (av.v == 0) return F.add(eval(F, c, pt), F.one());  // force a mismatch
        return F.div(eval(F, c, pt), av);
    };
    Rng prng = rng.split("div-prony");
    Rng vrng = rng.split("div-verify");
    std::size_t s = 1;
    for (;;) {
        std::vector<Fp> va;
        bool zero_hit = false;
        for (int attempt = 0; attempt < 8; ++attempt) {
            va = eval_sequence(F, a, seq, 0, 2 * s);
            zero_hit = std::any_of(va.begin(), va.end(), [](Fp x) { return x.v == 0; });
            if (!zero_hit) break;
            Rng orng = rng.split("div-offset", static_cast<u64>(attempt));
            seq.refresh_offset(orng);
        }
        if (zero_hit) return std::nullopt;
        std::vector<Fp> vc = eval_sequence(F, c, seq, 0, 2 * s);
        std::vector<Fp> vq(2 * s);
        for (std::size_t i = 0; i < 2 * s; ++i) vq[i] = F.div(vc[i], va[i]);
        auto cand = prony_interpolate(F, vq, seq, s, prng, s < bound);
        if (cand && verify_candidate(F, oracle, *cand, vrng) &&
            verify_candidate(F, oracle, *cand, vrng)) {
            return cand;
        }
        if (s >= bound) return std::nullopt;
        s = std::min<std::size_t>(s * 2, static_cast<std::size_t>(bound));
    }
}

}  // namespace spf
