#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spf/bivar.hpp"
#include "test_helpers.hpp"

using namespace spf;
using spf::testing::dp;
using spf::testing::sp;

namespace {

BivPoly biv(const PrimeField& F, std::initializer_list<spf::testing::Term> terms) {
    return from_sparse(F, sp(F, 2, terms));
}

// F of Example 4.5: x^3 y^2 - x^3 + x^2 y^3 + x^2 + x y^2 + 3xy - 2x + 2y^2 - 2y
BivPoly example_4_5(const PrimeField& F) {
    return biv(F, {{1, {3, 2}},
                   {-1, {3, 0}},
                   {1, {2, 3}},
                   {1, {2, 0}},
                   {1, {1, 2}},
                   {3, {1, 1}},
                   {-2, {1, 0}},
                   {2, {0, 2}},
                   {-2, {0, 1}}});
}

BivPoly random_biv(const PrimeField& F, Rng& rng, std::size_t dx, std::size_t dy) {
    BivPoly r;
    r.rows.resize(dx + 1);
    for (auto& row : r.rows) row = spf::testing::random_dense(F, rng, dy);
    r.trim();
    return r;
}

}  // namespace

TEST_CASE("content_x fixtures") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(31);
    // (y^2-1)x + (y^2-1)
    BivPoly a = biv(F, {{1, {1, 2}}, {-1, {1, 0}}, {1, {0, 2}}, {-1, {0, 0}}});
    CHECK(content_x(F, a, rng) == dp(F, {-1, 0, 1}));
    BivPoly b = biv(F, {{1, {1, 0}}, {1, {0, 1}}});
    CHECK(content_x(F, b, rng) == dp(F, {1}));
}

TEST_CASE("section 5.4 content fixture") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(32);
    // F_{5,4} = x^20 - 1 + (x^9 - x^5 - x^4 + 1) y; content-free in x, but the
    // content in y (gcd of the y-rows, living in K[x]) has exactly 2q = 8 terms
    BivPoly f54 = biv(F, {{1, {20, 0}}, {-1, {0, 0}}, {1, {9, 1}}, {-1, {5, 1}}, {-1, {4, 1}}, {1, {0, 1}}});
    CHECK(content_x(F, f54, rng) == dp(F, {1}));
    DensePoly cont = content_x(F, transpose(F, f54), rng);
    // x^8+x^7+x^6+x^5-x^3-x^2-x-1: two blocks of 2q = 8 monomials in total
    DensePoly want = dp(F, {-1, -1, -1, -1, 0, 1, 1, 1, 1});
    CHECK(cont == want);
    std::size_t terms = 0;
    for (auto c : cont.c) terms += c.v != 0;
    CHECK(terms == 8);
}

TEST_CASE("series division and exact division") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(33);
    for (int t = 0; t < 50; ++t) {
        BivPoly a = random_biv(F, rng, 4, 3), b = random_biv(F, rng, 3, 2);
        if (a.is_zero() || b.is_zero()) continue;
        BivPoly c = mul(F, a, b);
        auto q = biv_exact_div(F, c, b);
        REQUIRE(q);
        CHECK(*q == a);
        if (!b.rows.empty() && b.rows.back().coeff(0).v != 0) {
            auto [qq, rr] = series_divrem_x(F, c, b, 12);
            CHECK(rr.is_zero());
            CHECK(truncate_y(qq, 12) == truncate_y(a, 12));
        }
    }
}

TEST_CASE("bivariate root extraction") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(34);
    BivPoly xy = biv(F, {{1, {1, 0}}, {1, {0, 1}}});
    auto r1 = biv_root_extract(F, mul(F, xy, xy), 2, rng);
    REQUIRE(r1);
    CHECK(r1->first == Fp{1});
    CHECK(r1->second == xy);
    auto r2 = biv_root_extract(F, mul_scalar(F, mul(F, xy, xy), F.from_int(3)), 2, rng);
    REQUIRE(r2);
    CHECK(r2->first == F.from_int(3));
    CHECK(r2->second == xy);
    CHECK_FALSE(biv_root_extract(F, biv(F, {{1, {2, 0}}, {1, {0, 1}}}), 2, rng));

    for (int t = 0; t < 60; ++t) {
        u64 l = 2 + rng.below(3);
        BivPoly g = random_biv(F, rng, 2, 2);
        if (g.is_zero()) continue;
        Fp c = F.random_nonzero(rng);
        BivPoly f = mul_scalar(F, pow(F, g, l), c);
        auto r = biv_root_extract(F, f, l, rng);
        REQUIRE(r);
        CHECK(mul_scalar(F, pow(F, r->second, l), r->first) == f);
    }
}

TEST_CASE("two-factor Hensel lifting fixtures") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(35);
    // F = (x+y)(x+1), split x * (x+1) at y = 0
    BivPoly f = mul(F, biv(F, {{1, {1, 0}}, {1, {0, 1}}}), biv(F, {{1, {1, 0}}, {1, {0, 0}}}));
    auto [p, q] = hensel_lift_two(F, f, dp(F, {0, 1}), dp(F, {1, 1}), rng);
    CHECK(p == biv(F, {{1, {1, 0}}, {1, {0, 1}}}));
    CHECK(q == biv(F, {{1, {1, 0}}, {1, {0, 0}}}));
    CHECK_THROWS_AS(hensel_lift_two(F, f, dp(F, {0, 1}), dp(F, {0, 1}), rng), lift_error);
}

TEST_CASE("Example 4.5 over F_10007") {
    PrimeField F(10007);
    Rng rng(36);
    BivPoly f = example_4_5(F);
    CHECK(eval_y(F, f, Fp{0}) == dp(F, {0, -2, 1, -1}));  // -x^3+x^2-2x
    DensePoly p0 = dp(F, {2, -1, 1});                     // monic x^2-x+2
    DensePoly q0 = dp(F, {0, -1});                        // -x
    auto [p, q] = hensel_lift_two(F, f, p0, q0, rng);
    CHECK(mul(F, p, q) == f);
    CHECK(eval_y(F, p, Fp{0}) == p0);
    // up to units the factors are (y^2-1)x^2 + (y+1)x + 2(y-1) and x + y
    BivPoly ptrue = biv(F, {{1, {2, 2}}, {-1, {2, 0}}, {1, {1, 1}}, {1, {1, 0}}, {2, {0, 1}}, {-2, {0, 0}}});
    BivPoly qtrue = biv(F, {{1, {1, 0}}, {1, {0, 1}}});
    auto norm = [&](const BivPoly& b) {
        SparsePoly s = to_sparse(F, b);
        return from_sparse(F, normalize_leading(F, s));
    };
    CHECK(norm(p) == norm(ptrue));
    CHECK(norm(q) == norm(qtrue));

    // the rational reconstruction fixture: P-hat(1, y) mod y^7 = (y^2+3y-2)/(y^2-1)
    DensePoly denom_true = dp(F, {-1, 0, 1});
    DensePoly num_true = dp(F, {-2, 3, 1});
    DensePoly series = mul(F, num_true, series_inverse(F, denom_true, 7));
    series.c.resize(7);
    series.trim();
    auto rr = rational_reconstruct(F, series, 7, 3);
    REQUIRE(rr);
    CHECK(rr->first == num_true);
    CHECK(rr->second == denom_true);
}

TEST_CASE("multifactor lifting") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(37);
    BivPoly xpy = biv(F, {{1, {1, 0}}, {1, {0, 1}}});
    BivPoly xp1 = biv(F, {{1, {1, 0}}, {1, {0, 0}}});
    BivPoly xp2y = biv(F, {{1, {1, 0}}, {2, {0, 0}}, {1, {0, 1}}});
    BivPoly f = mul(F, mul(F, xpy, xp1), xp2y);
    auto lifted = hensel_lift_multi(F, f, {dp(F, {0, 1}), dp(F, {1, 1}), dp(F, {2, 1})},
                                    {1, 1, 1}, rng);
    REQUIRE(lifted.size() == 3);
    CHECK(lifted[0] == xpy);
    CHECK(lifted[1] == xp1);
    CHECK(lifted[2] == xp2y);
    // l = 1 returns the input unchanged
    auto one = hensel_lift_multi(F, f, {eval_y(F, f, Fp{0})}, {1}, rng);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == f);
    CHECK_THROWS_AS(hensel_lift_multi(F, f, {dp(F, {0, 1}), dp(F, {0, 1})}, {1, 1}, rng),
                    lift_error);
    // multiplicities route through root extraction
    BivPoly g = mul(F, mul(F, xpy, xpy), xp1);
    auto lifted2 = hensel_lift_multi(F, g, {dp(F, {0, 1}), dp(F, {1, 1})}, {2, 1}, rng);
    REQUIRE(lifted2.size() == 2);
    CHECK(lifted2[0] == xpy);
    CHECK(lifted2[1] == xp1);
}

TEST_CASE("bivariate squarefree") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(38);
    BivPoly xpy = biv(F, {{1, {1, 0}}, {1, {0, 1}}});
    BivPoly xmy = biv(F, {{1, {1, 0}}, {-1, {0, 1}}});
    BivPoly f = mul(F, mul(F, xpy, xpy), xmy);
    BivFactorization sq = biv_squarefree(F, f, rng);
    REQUIRE(sq.parts.size() == 2);
    CHECK(sq.parts[0].second == 1);
    CHECK(sq.parts[0].first == xmy);
    CHECK(sq.parts[1].second == 2);
    CHECK(sq.parts[1].first == xpy);

    BivPoly g = mul(F, xpy, biv(F, {{1, {1, 0}}, {1, {0, 0}}}));
    BivFactorization sq2 = biv_squarefree(F, g, rng);
    REQUIRE(sq2.parts.size() == 1);
    CHECK(sq2.parts[0].second == 1);

    BivFactorization sq3 = biv_squarefree(F, pow(F, xpy, 3), rng);
    REQUIRE(sq3.parts.size() == 1);
    CHECK(sq3.parts[0].second == 3);
    CHECK(sq3.parts[0].first == xpy);
}

TEST_CASE("bivariate irreducible factorization") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(39);
    // x^2 - y^2 = (x-y)(x+y)
    BivPoly f = biv(F, {{1, {2, 0}}, {-1, {0, 2}}});
    BivFactorization fac = biv_factor(F, f, rng);
    CHECK(fac.unit == Fp{1});
    REQUIRE(fac.parts.size() == 2);
    CHECK(fac.parts[0].second == 1);
    CHECK(fac.parts[1].second == 1);
    BivPoly xmy = biv(F, {{1, {1, 0}}, {-1, {0, 1}}});
    BivPoly xpy = biv(F, {{1, {1, 0}}, {1, {0, 1}}});
    CHECK(((fac.parts[0].first == xmy && fac.parts[1].first == xpy) ||
           (fac.parts[0].first == xpy && fac.parts[1].first == xmy)));

    // Example 4.5 factors
    PrimeField F1(10007);
    Rng rng1(40);
    BivFactorization fac45 = biv_factor(F1, example_4_5(F1), rng1);
    REQUIRE(fac45.parts.size() == 2);
    BivPoly check = BivPoly::constant(F1, fac45.unit);
    for (auto& [part, m] : fac45.parts) check = mul(F1, check, pow(F1, part, static_cast<u64>(m)));
    CHECK(check == example_4_5(F1));

    // x^2 + 1 over F_7 (no y) stays irreducible
    PrimeField F7(7);
    Rng rng7(41);
    BivFactorization fac7 = biv_factor(F7, biv(F7, {{1, {2, 0}}, {1, {0, 0}}}), rng7);
    REQUIRE(fac7.parts.size() == 1);
    CHECK(fac7.parts[0].second == 1);
}

TEST_CASE("single slope transform") {
    const PrimeField& F = PrimeField::default_field();
    // homogeneous for w=(1,1): single t-slice
    BivPoly f = biv(F, {{1, {2, 0}}, {3, {1, 1}}, {2, {0, 2}}});
    BivPoly ft = single_slope_transform(F, f, 1, 1);
    CHECK(ft.deg_y() == 0);
    // x^2 + y with the edge weight (1, 2)
    BivPoly g = biv(F, {{1, {2, 0}}, {1, {0, 1}}});
    CHECK(single_slope_transform(F, g, 1, 2) == biv(F, {{1, {2, 0}}, {1, {0, 0}}}));
    // spec's orientation (-1, 2) also produces a polynomial, on levels {0, 4}
    CHECK(single_slope_transform(F, g, -1, 2) == biv(F, {{1, {2, 0}}, {1, {0, 4}}}));
    // p = 0, q = 1 only strips the y-valuation
    BivPoly h = biv(F, {{1, {1, 1}}, {1, {0, 2}}});
    CHECK(single_slope_transform(F, h, 0, 1) == biv(F, {{1, {1, 0}}, {1, {0, 1}}}));

    // multiplicativity on random coprime-slope pairs
    Rng rng(42);
    int done = 0;
    for (int t = 0; t < 200 && done < 100; ++t) {
        BivPoly a = random_biv(F, rng, 3, 3), b = random_biv(F, rng, 3, 3);
        if (a.is_zero() || b.is_zero()) continue;
        i64 p = rng.range(-3, 3), q = rng.range(1, 3);
        if (std::gcd(p < 0 ? -p : p, q) != 1) continue;
        CHECK(single_slope_transform(F, mul(F, a, b), p, q) ==
              mul(F, single_slope_transform(F, a, p, q), single_slope_transform(F, b, p, q)));
        ++done;
    }
    CHECK(done == 100);
}

TEST_CASE("single slope Hensel lifting") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(43);
    // trivial slope (0,1) behaves like plain lifting
    BivPoly xpy = biv(F, {{1, {1, 0}}, {1, {0, 1}}});
    BivPoly xp1 = biv(F, {{1, {1, 0}}, {1, {0, 0}}});
    BivPoly f = mul(F, xpy, xp1);
    auto [p1, q1] = hensel_lift_single_slope(F, f, biv(F, {{1, {1, 0}}}),
                                             biv(F, {{1, {1, 0}}, {1, {0, 0}}}), 0, 1, rng);
    CHECK(mul(F, p1, q1) == f);
    CHECK(p1 == xpy);

    // homogeneous: (x+y)(x+2y), edge factors known
    BivPoly a = mul(F, xpy, biv(F, {{1, {1, 0}}, {2, {0, 1}}}));
    auto [p2, q2] = hensel_lift_single_slope(F, a, xpy, biv(F, {{1, {1, 0}}, {2, {0, 1}}}), 1, 1, rng);
    CHECK(p2 == xpy);
    CHECK(q2 == biv(F, {{1, {1, 0}}, {2, {0, 1}}}));

    // non-coprime edge factors fail
    CHECK_THROWS_AS(hensel_lift_single_slope(F, mul(F, xpy, xpy), xpy, xpy, 1, 1, rng),
                    lift_error);
}
