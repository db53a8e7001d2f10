#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spf/mfactor.hpp"
#include "test_helpers.hpp"

using namespace spf;
using spf::testing::dp;
using spf::testing::random_sparse;
using spf::testing::sp;

namespace {

std::vector<SparsePoly> normalized_set(const PrimeField& F, std::vector<SparsePoly> v) {
    for (auto& g : v) g = normalize_leading(F, g);
    std::sort(v.begin(), v.end(), [](const SparsePoly& a, const SparsePoly& b) {
        if (a.term_count() != b.term_count()) return a.term_count() < b.term_count();
        auto ia = a.terms().begin();
        auto ib = b.terms().begin();
        for (; ia != a.terms().end(); ++ia, ++ib) {
            if (GradedLexLess{}(ia->first, ib->first)) return true;
            if (GradedLexLess{}(ib->first, ia->first)) return false;
            if (ia->second.v != ib->second.v) return ia->second.v < ib->second.v;
        }
        return false;
    });
    return v;
}

SparsePoly expand(const PrimeField& F, const Factorization& fac, int n) {
    SparsePoly out = SparsePoly::constant(F, n, fac.unit);
    for (auto& [g, m] : fac.factors)
        out = mul_naive(F, out, pow_naive(F, g, static_cast<u64>(m)));
    return out;
}

}  // namespace

TEST_CASE("lift_two recovers a three-variable product") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(91);
    // (x1+x2+x3)(x1+2x2+3x3) given its bivariate collapse
    SparsePoly p = sp(F, 3, {{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {0, 0, 1}}});
    SparsePoly q = sp(F, 3, {{1, {1, 0, 0}}, {2, {0, 1, 0}}, {3, {0, 0, 1}}});
    SparsePoly f = mul_naive(F, p, q);
    std::vector<Fp> anchors(3);
    Rng arng(92);
    for (auto& c : anchors) c = F.random_nonzero(arng);
    SparsePoly p2 = project_prefix(F, p, 2, anchors);
    SparsePoly q2 = project_prefix(F, q, 2, anchors);
    auto [pl, ql] = lift_two(F, f, p2, q2, anchors, rng);
    CHECK(mul_naive(F, pl, ql) == f);
    CHECK(normalized_set(F, {pl, ql}) == normalized_set(F, {p, q}));

    // n = 2 base case: inputs come back unchanged (embedded)
    SparsePoly f2 = project_prefix(F, f, 2, anchors);
    auto [pb, qb] = lift_two(F, f2, p2, q2, anchors, rng);
    CHECK(mul_naive(F, pb, qb) == f2);

    // fabricated non-factorization raises
    SparsePoly bogus = add(F, p2, SparsePoly::constant(F, 2, F.one()));
    CHECK_THROWS_AS(lift_two(F, f, bogus, q2, anchors, rng), lift_error);
}

TEST_CASE("lift_multi with a square") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(93);
    SparsePoly p = sp(F, 3, {{1, {1, 0, 0}}, {1, {0, 1, 0}}});   // x1+x2
    SparsePoly q = sp(F, 3, {{1, {1, 0, 0}}, {1, {0, 0, 1}}});   // x1+x3
    SparsePoly f = mul_naive(F, mul_naive(F, p, p), q);
    std::vector<Fp> anchors(3);
    Rng arng(94);
    for (auto& c : anchors) c = F.random_nonzero(arng);
    SparsePoly p2 = project_prefix(F, p, 2, anchors);
    SparsePoly q2 = project_prefix(F, q, 2, anchors);
    auto lifted = lift_multi(F, f, {p2, q2}, {2, 1}, F.one(), anchors, rng);
    REQUIRE(lifted.size() == 2);
    CHECK(lifted[0] == p);
    CHECK(lifted[1] == q);
}

TEST_CASE("factor_irreducible fixtures") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(95);
    // (x1+x2+1)(x1 x2 + x3)
    SparsePoly a = sp(F, 3, {{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {0, 0, 0}}});
    SparsePoly b = sp(F, 3, {{1, {1, 1, 0}}, {1, {0, 0, 1}}});
    SparsePoly f = mul_naive(F, a, b);
    Factorization fac = factor_irreducible(F, f, rng);
    CHECK(fac.unit == Fp{1});
    REQUIRE(fac.factors.size() == 2);
    std::vector<SparsePoly> got = {fac.factors[0].first, fac.factors[1].first};
    CHECK(normalized_set(F, got) == normalized_set(F, {a, b}));
    CHECK(expand(F, fac, 3) == f);
}

TEST_CASE("factor_irreducible handles content and multiplicities") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(96);
    // x2^2 * (x2+1) * (x1+x2)^2
    SparsePoly f = sp(F, 2, {{1, {0, 2}}});
    f = mul_naive(F, f, sp(F, 2, {{1, {0, 1}}, {1, {0, 0}}}));
    SparsePoly x1px2 = sp(F, 2, {{1, {1, 0}}, {1, {0, 1}}});
    f = mul_naive(F, f, mul_naive(F, x1px2, x1px2));
    Factorization fac = factor_irreducible(F, f, rng);
    CHECK(expand(F, fac, 2) == f);
    // expect x2 (mult 2), x2+1 (mult 1), x1+x2 (mult 2)
    REQUIRE(fac.factors.size() == 3);
    int seen = 0;
    for (auto& [g, m] : fac.factors) {
        if (g == sp(F, 2, {{1, {0, 1}}})) {
            CHECK(m == 2);
            ++seen;
        } else if (g == sp(F, 2, {{1, {0, 1}}, {1, {0, 0}}})) {
            CHECK(m == 1);
            ++seen;
        } else if (g == x1px2) {
            CHECK(m == 2);
            ++seen;
        }
    }
    CHECK(seen == 3);
}

TEST_CASE("Example 6.3: irreducible or inconclusive, never wrong") {
    PrimeField F7(7);
    // (x1+x2)^2 - x3 over F_7
    SparsePoly f = sp(F7, 3, {{1, {2, 0, 0}}, {2, {1, 1, 0}}, {1, {0, 2, 0}}, {-1, {0, 0, 1}}});
    int correct = 0, inconclusive_count = 0;
    for (int seed = 0; seed < 30; ++seed) {
        Rng rng(9000 + static_cast<u64>(seed));
        try {
            Factorization fac = factor_irreducible(F7, f, rng);
            // any returned answer must re-expand; for this f the only correct
            // answer is irreducibility
            CHECK(expand(F7, fac, 3) == f);
            REQUIRE(fac.factors.size() == 1);
            CHECK(fac.factors[0].second == 1);
            ++correct;
        } catch (const inconclusive&) {
            ++inconclusive_count;
        }
    }
    CHECK(correct + inconclusive_count == 30);
    CHECK(correct >= 1);
}

TEST_CASE("Remark 6.15 rewrite factors after substitution") {
    const PrimeField& F = PrimeField::default_field();
    // (y1^2 y2^2 + y2^2 - 1) y3^2: the image of x1^2+x2^2-x3^2 under the
    // substitution x1 = y1y2y3, x2 = y2y3, x3 = y3
    SparsePoly g = sp(F, 3, {{1, {2, 0, 0}}, {1, {0, 2, 0}}, {-1, {0, 0, 2}}});
    std::vector<std::vector<i64>> M = {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
    SparsePoly mapped = monomial_map(F, g, M);
    Rng rng(97);
    Factorization fac = factor_irreducible(F, mapped, rng);
    CHECK(expand(F, fac, 3) == mapped);
    // y3^2 plus the irreducible 3-term part
    bool has_y3 = false, has_big = false;
    for (auto& [q, m] : fac.factors) {
        if (q == sp(F, 3, {{1, {0, 0, 1}}}) && m == 2) has_y3 = true;
        if (q.term_count() == 3 && m == 1) has_big = true;
    }
    CHECK(has_y3);
    CHECK(has_big);
}

TEST_CASE("factor_projective") {
    PrimeField F(10007);
    Rng rng(98);
    // (x1+x2+1)(x1+2x2+3): at (x1, 0) this is (x1+1)(x1+3), coprime
    SparsePoly a = sp(F, 2, {{1, {1, 0}}, {1, {0, 1}}, {1, {0, 0}}});
    SparsePoly b = sp(F, 2, {{1, {1, 0}}, {2, {0, 1}}, {3, {0, 0}}});
    SparsePoly f = mul_naive(F, a, b);
    auto [p, q] = factor_projective(F, f, dp(F, {1, 1}), dp(F, {3, 1}), rng);
    CHECK(mul_naive(F, p, q) == f);
    CHECK(normalized_set(F, {p, q}) == normalized_set(F, {a, b}));

    // homogeneous F violates H1/H2
    SparsePoly hom = mul_naive(F, sp(F, 2, {{1, {1, 0}}, {1, {0, 1}}}),
                               sp(F, 2, {{1, {1, 0}}, {2, {0, 1}}}));
    CHECK_THROWS_AS(factor_projective(F, hom, dp(F, {0, 1}), dp(F, {0, 1}), rng),
                    hypothesis_violated);
    // shared root
    CHECK_THROWS_AS(factor_projective(F, f, dp(F, {1, 1}), dp(F, {1, 1}), rng),
                    hypothesis_violated);
    // scaling invariance of the normalized output
    auto [ps, qs] = factor_projective(F, mul_scalar(F, f, F.from_int(5)),
                                      dp(F, {1, 1}), mul_scalar(F, dp(F, {3, 1}), F.from_int(5)), rng);
    CHECK(normalized_set(F, {ps, qs}) == normalized_set(F, {p, q}));
}

TEST_CASE("factor_single_slope") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(99);
    // homogeneous pair recovered through the x1 := 1 reduction
    SparsePoly a = sp(F, 2, {{1, {1, 0}}, {1, {0, 1}}});
    SparsePoly b = sp(F, 2, {{1, {1, 0}}, {2, {0, 1}}});
    SparsePoly f = mul_naive(F, a, b);
    auto [p, q] = factor_single_slope(F, f, rng);
    CHECK(mul_naive(F, normalize_leading(F, p), normalize_leading(F, q)) ==
          normalize_leading(F, f));
    CHECK(normalized_set(F, {p, q}) == normalized_set(F, {a, b}));

    // genuine two-edge-free case with a nontrivial slope: (x1^2 + x2)(x1 + x2)
    SparsePoly c = sp(F, 2, {{1, {2, 0}}, {1, {0, 1}}});
    SparsePoly d = sp(F, 2, {{1, {1, 0}}, {1, {0, 1}}});
    SparsePoly g = mul_naive(F, c, d);
    auto [p2, q2] = factor_single_slope(F, g, rng);
    CHECK(mul_naive(F, p2, q2) == normalize_leading(F, g));
    CHECK(normalized_set(F, {p2, q2}) == normalized_set(F, {c, d}));

    // Example 7.5: interior-monomial products defeat the edge machinery
    SparsePoly P = sp(F, 3, {{1, {1, 1, 0}}, {1, {1, 0, 1}}, {1, {0, 1, 1}},
                             {1, {2, 2, 1}}, {1, {2, 1, 2}}, {1, {1, 2, 2}}});
    SparsePoly M = sp(F, 3, {{1, {1, 1, 1}}});
    SparsePoly f1 = add(F, P, M);
    SparsePoly f2 = add(F, P, mul_scalar(F, M, F.from_int(2)));
    SparsePoly torture = mul_naive(F, f1, f2);
    CHECK_THROWS_AS(factor_single_slope(F, torture, rng), error);
}

TEST_CASE("completeness on constructed corpora (property)") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(100);
    int done = 0, recovered = 0;
    for (int t = 0; t < 40 && done < 30; ++t) {
        int n = 2 + static_cast<int>(rng.below(2));
        int nf = 2 + static_cast<int>(rng.below(2));
        std::vector<SparsePoly> factors;
        SparsePoly f = SparsePoly::constant(F, n, F.one());
        bool usable = true;
        for (int j = 0; j < nf; ++j) {
            // affine in one variable: always irreducible
            int var = static_cast<int>(rng.below(static_cast<u64>(n)));
            SparsePoly tail = random_sparse(F, rng, n, 2, 2);
            std::map<int, Fp> kill;
            kill[var] = F.one();
            // force the chosen variable out of the tail, then add x_var
            SparsePoly cleaned(n);
            for (auto& [e, c2] : tail.terms()) {
                ExpVec e2 = e;
                e2[static_cast<std::size_t>(var)] = 0;
                cleaned.add_term(F, e2, c2);
            }
            SparsePoly g = add(F, SparsePoly::variable(F, n, var), cleaned);
            if (g.term_count() < 2) {
                usable = false;
                break;
            }
            factors.push_back(normalize_leading(F, g));
            f = mul_naive(F, f, g);
        }
        if (!usable) continue;
        // pairwise distinct
        bool distinct = true;
        for (std::size_t i = 0; i < factors.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < factors.size() && distinct; ++j)
                distinct = !(factors[i] == factors[j]);
        if (!distinct) continue;
        ++done;
        try {
            Factorization fac = factor_irreducible(F, f, rng);
            CHECK(expand(F, fac, n) == f);  // soundness, unconditional
            std::vector<SparsePoly> got;
            for (auto& [g, m] : fac.factors)
                for (int rep = 0; rep < m; ++rep) got.push_back(g);
            if (normalized_set(F, got) == normalized_set(F, factors)) ++recovered;
        } catch (const inconclusive&) {
        }
    }
    CHECK(done == 30);
    CHECK(recovered >= 28);
}
