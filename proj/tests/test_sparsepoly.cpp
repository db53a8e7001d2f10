#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spf/sparsepoly.hpp"
#include "test_helpers.hpp"

using namespace spf;
using spf::testing::random_sparse;
using spf::testing::sp;

namespace {
// F of Example 2.10: 2x^2 y + 3x y^2 + x y + 3y + 2z + 4, variables (x, y, z)
SparsePoly example_2_10(const PrimeField& F) {
    return sp(F, 3,
              {{2, {2, 1, 0}}, {3, {1, 2, 0}}, {1, {1, 1, 0}}, {3, {0, 1, 0}}, {2, {0, 0, 1}}, {4, {0, 0, 0}}});
}
}  // namespace

TEST_CASE("add / mul_naive fixtures") {
    const PrimeField& F = PrimeField::default_field();
    // (x-1)(x^4+x^3+x^2+x+1) = x^5-1
    SparsePoly a = sp(F, 1, {{1, {1}}, {-1, {0}}});
    SparsePoly b = sp(F, 1, {{1, {4}}, {1, {3}}, {1, {2}}, {1, {1}}, {1, {0}}});
    CHECK(mul_naive(F, a, b) == sp(F, 1, {{1, {5}}, {-1, {0}}}));
    Rng rng1(1);
    SparsePoly c = random_sparse(F, rng1, 3, 10, 5);
    CHECK(add(F, c, neg(F, c)).is_zero());
    PrimeField F7(7);
    SparsePoly x1px2 = sp(F7, 2, {{1, {1, 0}}, {1, {0, 1}}});
    CHECK(mul_naive(F7, x1px2, x1px2) ==
          sp(F7, 2, {{1, {2, 0}}, {2, {1, 1}}, {1, {0, 2}}}));
}

TEST_CASE("weight profiles on Example 2.10") {
    const PrimeField& F = PrimeField::default_field();
    SparsePoly f = example_2_10(F);
    WeightProfile p2 = weight_profile(F, f, WeightVector{{2, 1, 0}});
    CHECK(p2.deg_w == 5);
    CHECK(p2.val_w == 0);
    CHECK(p2.ec_w == 5);
    CHECK(p2.regular);
    CHECK(p2.lp == sp(F, 3, {{2, {2, 1, 0}}}));
    WeightProfile p1 = weight_profile(F, f, WeightVector{{1, 1, 1}});
    CHECK_FALSE(p1.regular);
    WeightProfile p3 = weight_profile(F, f, WeightVector{{0, 0, 1}});
    CHECK(p3.regular);
    CHECK(p3.ec_w == 1);
    SparsePoly mono = sp(F, 3, {{5, {1, 2, 3}}});
    WeightProfile pm = weight_profile(F, mono, WeightVector{{1, -1, 2}});
    CHECK(pm.deg_w == pm.val_w);
    CHECK(pm.lp == mono);
    CHECK(pm.tp == mono);
}

TEST_CASE("tagging Example 2.10") {
    const PrimeField& F = PrimeField::default_field();
    SparsePoly f = example_2_10(F);
    SparsePoly tagged = tag(f, WeightVector{{2, 1, 0}});
    SparsePoly want = sp(F, 4,
                         {{2, {2, 1, 0, 5}},
                          {3, {1, 2, 0, 4}},
                          {1, {1, 1, 0, 3}},
                          {3, {0, 1, 0, 1}},
                          {2, {0, 0, 1, 0}},
                          {4, {0, 0, 0, 0}}});
    CHECK(tagged == want);
    CHECK(tagged.term_count() == f.term_count());
    CHECK(tagged.deg_in(3) == 5);
    CHECK(tagged.val_in(3) == 0);
    // t := 1 recovers f
    CHECK(untag(F, tagged) == f);
    SparsePoly c = sp(F, 2, {{9, {0, 0}}});
    CHECK(tag(c, WeightVector{{1, 1}}) == sp(F, 3, {{9, {0, 0, 0}}}));
}

TEST_CASE("tag preserves counts and maps weights to t-range (property)") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(21);
    for (int t = 0; t < 100; ++t) {
        SparsePoly f = random_sparse(F, rng, 3, 1 + rng.below(12), 6);
        if (f.is_zero()) continue;
        WeightVector w{{rng.range(-3, 3), rng.range(-3, 3), rng.range(-3, 3)}};
        if (w.w == std::vector<i64>{0, 0, 0}) continue;
        SparsePoly tagged = tag(f, w);
        WeightProfile prof = weight_profile(F, f, w);
        CHECK(tagged.term_count() == f.term_count());
        CHECK(tagged.deg_in(3) == prof.deg_w);
        CHECK(tagged.val_in(3) == prof.val_w);
    }
}

TEST_CASE("lp/tp multiplicativity (property)") {
    PrimeField F(101);
    Rng rng(22);
    for (int t = 0; t < 200; ++t) {
        SparsePoly a = random_sparse(F, rng, 2, 1 + rng.below(6), 4);
        SparsePoly b = random_sparse(F, rng, 2, 1 + rng.below(6), 4);
        if (a.is_zero() || b.is_zero()) continue;
        WeightVector w{{rng.range(-3, 3), rng.range(-3, 3)}};
        if (w.w == std::vector<i64>{0, 0}) continue;
        WeightProfile pa = weight_profile(F, a, w), pb = weight_profile(F, b, w);
        WeightProfile pab = weight_profile(F, mul_naive(F, a, b), w);
        CHECK(pab.lp == mul_naive(F, pa.lp, pb.lp));
        CHECK(pab.tp == mul_naive(F, pa.tp, pb.tp));
    }
}

TEST_CASE("monomial maps") {
    const PrimeField& F = PrimeField::default_field();
    SparsePoly f = sp(F, 2, {{1, {2, 0}}, {3, {1, 1}}, {-2, {0, 3}}});
    std::vector<std::vector<i64>> id = {{1, 0}, {0, 1}};
    CHECK(monomial_map(F, f, id) == f);
    // Remark 6.15: x1 = y1y2y3, x2 = y2y3, x3 = y3 on x1^2+x2^2-x3^2
    SparsePoly g = sp(F, 3, {{1, {2, 0, 0}}, {1, {0, 2, 0}}, {-1, {0, 0, 2}}});
    std::vector<std::vector<i64>> M = {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
    SparsePoly mapped = monomial_map(F, g, M);
    // (y1^2 y2^2 + y2^2 - 1) y3^2
    SparsePoly want = sp(F, 3, {{1, {2, 2, 2}}, {1, {0, 2, 2}}, {-1, {0, 0, 2}}});
    CHECK(mapped == want);
    // composition phi_{MN} = phi_M . phi_N
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
        SparsePoly h = random_sparse(F, rng, 2, 1 + rng.below(8), 4);
        std::vector<std::vector<i64>> A = {{rng.range(-2, 2), rng.range(-2, 2)},
                                           {rng.range(-2, 2), rng.range(-2, 2)}};
        std::vector<std::vector<i64>> B = {{rng.range(-2, 2), rng.range(-2, 2)},
                                           {rng.range(-2, 2), rng.range(-2, 2)}};
        std::vector<std::vector<i64>> AB = {
            {A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]},
            {A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]}};
        CHECK(monomial_map(F, h, AB) == monomial_map(F, monomial_map(F, h, B), A));
    }
    // unimodular maps are invertible
    std::vector<std::vector<i64>> U = {{1, 1}, {0, 1}}, Ui = {{1, -1}, {0, 1}};
    for (int t = 0; t < 20; ++t) {
        SparsePoly h = random_sparse(F, rng, 2, 5, 4);
        CHECK(monomial_map(F, monomial_map(F, h, U), Ui) == h);
    }
}

TEST_CASE("regularizing weights") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(24);
    SparsePoly f = example_2_10(F);
    WeightVector w = regularizing_weight(F, f, 16, rng);
    WeightProfile prof = weight_profile(F, f, w);
    CHECK(prof.regular);
    // monic in x1: w = (1,0,...,0) regularizes; our search must find some
    // regular weight with ecart at most deg^2
    SparsePoly monic_x1 = sp(F, 2, {{1, {3, 0}}, {5, {1, 2}}, {2, {0, 1}}});
    WeightVector w2 = regularizing_weight(F, monic_x1, 16, rng);
    CHECK(weight_profile(F, monic_x1, w2).regular);
    CHECK(weight_profile(F, monic_x1, WeightVector{{1, 0}}).regular);
    SparsePoly single = sp(F, 2, {{7, {2, 5}}});
    WeightVector w3 = regularizing_weight(F, single, 0, rng);
    CHECK(weight_profile(F, single, w3).regular);

    // fallback always regular with ec <= d^2: trials = 0 forces the fallback
    for (int t = 0; t < 100; ++t) {
        SparsePoly g = random_sparse(F, rng, 3, 1 + rng.below(10), 5);
        if (g.is_constant()) continue;
        WeightVector wf = regularizing_weight(F, g, 0, rng);
        WeightProfile pf = weight_profile(F, g, wf);
        CHECK(pf.regular);
        i64 d = g.total_degree();
        CHECK(pf.ec_w <= d * d);
    }
}

TEST_CASE("substitute") {
    const PrimeField& F = PrimeField::default_field();
    SparsePoly f = sp(F, 3, {{1, {1, 0, 0}}, {1, {0, 1, 1}}});  // x1 + x2 x3
    CHECK(substitute(F, f, {{2, F.from_int(2)}}) ==
          sp(F, 3, {{1, {1, 0, 0}}, {2, {0, 1, 0}}}));
    CHECK(substitute(F, f, {{0, Fp{1}}, {1, Fp{2}}, {2, Fp{3}}}) ==
          SparsePoly::constant(F, 3, F.from_int(7)));
    PrimeField F7(7);
    // Example 6.3 shape: (x1+x2)^2 - x3 at x3 := 4 = 2^2 splits
    SparsePoly g = sp(F7, 3, {{1, {2, 0, 0}}, {2, {1, 1, 0}}, {1, {0, 2, 0}}, {-1, {0, 0, 1}}});
    SparsePoly at4 = substitute(F7, g, {{2, F7.from_int(4)}});
    SparsePoly phi = sp(F7, 3, {{1, {1, 0, 0}}, {1, {0, 1, 0}}});
    SparsePoly split = mul_naive(F7, add(F7, phi, SparsePoly::constant(F7, 3, Fp{2})),
                                 sub(F7, phi, SparsePoly::constant(F7, 3, Fp{2})));
    CHECK(at4 == split);
    // Laurent guard
    SparsePoly laurent = sp(F, 2, {{1, {-1, 0}}});
    CHECK_THROWS_AS(substitute(F, laurent, {{0, Fp{0}}}), zero_substitution_for_laurent);
}

TEST_CASE("newton polygon") {
    std::vector<std::pair<i64, i64>> pts = {{0, 2}, {1, 1}, {2, 0}, {2, 2}, {3, 1}, {4, 2}};
    NewtonPolygon np = newton_polygon(pts);
    std::vector<std::pair<i64, i64>> want = {{0, 2}, {2, 0}, {4, 2}};
    CHECK(np.vertices == want);
    REQUIRE(np.edges.size() == 2);
    CHECK(np.edges[0].p == 1);
    CHECK(np.edges[0].q == 1);
    CHECK(np.edges[1].p == -1);
    CHECK(np.edges[1].q == 1);

    NewtonPolygon single = newton_polygon({{3, 4}});
    CHECK(single.vertices == std::vector<std::pair<i64, i64>>{{3, 4}});
    CHECK(single.edges.empty());

    NewtonPolygon flat = newton_polygon({{0, 0}, {3, 0}});
    CHECK(flat.vertices == std::vector<std::pair<i64, i64>>{{0, 0}, {3, 0}});
    REQUIRE(flat.edges.size() == 1);
    CHECK(flat.edges[0].p == 0);
    CHECK(flat.edges[0].q == 1);
}

TEST_CASE("hull minkowski check") {
    PrimeField F7(7);
    const PrimeField& F = PrimeField::default_field();
    CHECK(hull_minkowski_check(F, sp(F, 1, {{1, {1}}, {-1, {0}}}),
                               sp(F, 1, {{1, {1}}, {1, {0}}})));
    SparsePoly h = sp(F, 2, {{1, {1, 0}}, {1, {0, 1}}});
    CHECK(hull_minkowski_check(F, h, h));
    Rng rng(25);
    int checked = 0;
    for (int t = 0; t < 100; ++t) {
        SparsePoly a = random_sparse(F7, rng, 2, 3, 4);
        SparsePoly b = random_sparse(F7, rng, 2, 3, 4);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK(hull_minkowski_check(F7, a, b));
        ++checked;
    }
    CHECK(checked >= 90);
}

TEST_CASE("exact_div_naive") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(26);
    for (int t = 0; t < 100; ++t) {
        SparsePoly a = random_sparse(F, rng, 3, 1 + rng.below(8), 4);
        SparsePoly b = random_sparse(F, rng, 3, 1 + rng.below(8), 4);
        if (a.is_zero() || b.is_zero()) continue;
        SparsePoly c = mul_naive(F, a, b);
        auto q = exact_div_naive(F, c, a);
        REQUIRE(q);
        CHECK(*q == b);
    }
    SparsePoly x5m1 = sp(F, 1, {{1, {5}}, {-1, {0}}});
    CHECK_FALSE(exact_div_naive(F, x5m1, sp(F, 1, {{1, {1}}, {-2, {0}}})));
    CHECK(exact_div_naive(F, x5m1, sp(F, 1, {{1, {1}}, {-1, {0}}})).has_value());
}

TEST_CASE("project and extend") {
    const PrimeField& F = PrimeField::default_field();
    SparsePoly f = sp(F, 3, {{1, {1, 0, 0}}, {1, {0, 1, 1}}, {5, {0, 0, 2}}});
    std::vector<Fp> anchors = {Fp{0}, Fp{0}, F.from_int(3)};
    SparsePoly p2 = project_prefix(F, f, 2, anchors);
    CHECK(p2 == sp(F, 2, {{1, {1, 0}}, {3, {0, 1}}, {45, {0, 0}}}));
    CHECK(extend_vars(p2, 3).nvars() == 3);
}
