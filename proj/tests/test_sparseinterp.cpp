#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spf/sparseinterp.hpp"
#include "test_helpers.hpp"

using namespace spf;
using spf::testing::random_sparse;
using spf::testing::sp;

TEST_CASE("sequence construction and Kronecker bounds") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(51);
    GeometricSequence seq = make_sequence(F, {10, 10, 10}, rng, false);
    CHECK(seq.window_size() == 1331);
    CHECK(seq.alpha()[0] == F.primitive_root());
    CHECK(seq.alpha()[1] == F.pow(F.primitive_root(), 11));
    PrimeField F101(101);
    CHECK_THROWS_AS(make_sequence(F101, {10, 10}, rng, false), kronecker_overflow);
    GeometricSequence seq1 = make_sequence(F101, {98}, rng, false);
    CHECK(seq1.alpha()[0] == F101.primitive_root());
    // round trip of the exponent encoding, including Laurent windows
    GeometricSequence lseq = make_sequence(F, {5, 7, 4}, rng, true);
    for (int t = 0; t < 50; ++t) {
        ExpVec e = {rng.range(-5, 5), rng.range(-7, 7), rng.range(-4, 4)};
        auto back = lseq.decode_root(lseq.root_of(e));
        REQUIRE(back);
        CHECK(*back == e);
    }
}

TEST_CASE("eval_sequence fixtures") {
    PrimeField F(101);
    Rng rng(52);
    // alpha = (2, 3), beta = (1, 1) by hand rather than through make_sequence
    GeometricSequence seq(F, {0, 0}, {5, 3}, rng);
    SparsePoly f = sp(F, 2, {{3, {2, 1}}, {5, {0, 0}}});
    // direct evaluation oracle at the sequence's own points
    for (u64 i0 : {0ull, 3ull}) {
        auto vals = eval_sequence(F, f, seq, i0, 4);
        for (u64 j = 0; j < 4; ++j) {
            auto pt = seq.point(i0 + j);
            CHECK(vals[j] == eval(F, f, pt));
        }
    }
    SparsePoly c5 = SparsePoly::constant(F, 2, Fp{5});
    auto vals = eval_sequence(F, c5, seq, 0, 3);
    CHECK(vals == std::vector<Fp>{Fp{5}, Fp{5}, Fp{5}});
    CHECK(eval_sequence(F, f, seq, 0, 0).empty());
}

TEST_CASE("eval against the spec's worked numbers") {
    PrimeField F(101);
    // F = 3 x1^2 x2 + 5 at points ((2^i, 3^i)): 3*4*3+5 = 41 at i = 1, and
    // direct evaluation gives 33 and 38 at i = 2, 3
    SparsePoly f = sp(F, 2, {{3, {2, 1}}, {5, {0, 0}}});
    for (u64 i = 0; i < 4; ++i) {
        std::vector<Fp> pt = {F.pow(Fp{2}, i), F.pow(Fp{3}, i)};
        static const u64 want[] = {8, 41, 33, 38};
        CHECK(eval(F, f, pt) == Fp{want[i]});
    }
}

TEST_CASE("berlekamp-massey") {
    PrimeField F(101);
    // constant sequence -> z - 1
    DensePoly l1 = berlekamp_massey(F, {Fp{5}, Fp{5}, Fp{5}, Fp{5}});
    CHECK(l1 == spf::testing::dp(F, {-1, 1}));
    // geometric with ratio 2 -> z - 2
    DensePoly l2 = berlekamp_massey(F, {Fp{1}, Fp{2}, Fp{4}, Fp{8}});
    CHECK(l2 == spf::testing::dp(F, {-2, 1}));
    // sum of two geometrics -> (z - 2)(z - 3)
    std::vector<Fp> v;
    for (u64 i = 0; i < 8; ++i) v.push_back(F.add(F.pow(Fp{2}, i), F.pow(Fp{3}, i)));
    DensePoly l3 = berlekamp_massey(F, v);
    CHECK(l3 == mul(F, spf::testing::dp(F, {-2, 1}), spf::testing::dp(F, {-3, 1})));
    CHECK(berlekamp_massey(F, {Fp{0}, Fp{0}}).deg() == 0);
}

TEST_CASE("prony round trips") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(53);
    // constant from 2 values
    GeometricSequence seq0 = make_sequence(F, {4}, rng, false);
    auto c = prony_interpolate(F, eval_sequence(F, SparsePoly::constant(F, 1, Fp{5}), seq0, 0, 2),
                               seq0, 1, rng);
    REQUIRE(c);
    CHECK(*c == SparsePoly::constant(F, 1, Fp{5}));

    SparsePoly f = sp(F, 2, {{3, {2, 1}}, {5, {0, 0}}});
    GeometricSequence seq = make_sequence(F, {4, 4}, rng, false);
    auto got = prony_interpolate(F, eval_sequence(F, f, seq, 0, 4), seq, 2, rng);
    REQUIRE(got);
    CHECK(*got == f);

    // a 3-term polynomial sampled for s = 2 must not silently interpolate
    SparsePoly g = sp(F, 2, {{3, {2, 1}}, {5, {1, 0}}, {7, {0, 0}}});
    auto wrong = prony_interpolate(F, eval_sequence(F, g, seq, 0, 4), seq, 2, rng);
    if (wrong) {
        EvalFn oracle = [&](const std::vector<Fp>& pt) { return eval(F, g, pt); };
        CHECK_FALSE(verify_candidate(F, oracle, *wrong, rng));
    }

    // deterministic exactness across sizes and windows
    for (int t = 0; t < 60; ++t) {
        int n = 1 + static_cast<int>(rng.below(4));
        bool laurent = rng.below(2) == 1;
        std::vector<i64> bounds(static_cast<std::size_t>(n));
        for (auto& b : bounds) b = 1 + rng.range(0, 7);
        GeometricSequence s2 = make_sequence(F, bounds, rng, laurent);
        SparsePoly h(n);
        std::size_t terms = 1 + rng.below(12);
        for (std::size_t k = 0; k < terms; ++k) {
            ExpVec e(static_cast<std::size_t>(n));
            for (std::size_t j = 0; j < e.size(); ++j)
                e[j] = laurent ? rng.range(-bounds[j], bounds[j]) : rng.range(0, bounds[j]);
            h.add_term(F, e, F.random(rng));
        }
        std::size_t sbound = std::max<std::size_t>(h.term_count(), 1);
        auto back = prony_interpolate(F, eval_sequence(F, h, s2, 0, 2 * sbound), s2, sbound, rng);
        REQUIRE(back);
        CHECK(*back == h);
    }
}

TEST_CASE("known support interpolation") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(54);
    GeometricSequence seq = make_sequence(F, {4, 4}, rng, false);
    SparsePoly f = sp(F, 2, {{3, {2, 1}}, {5, {0, 0}}});
    std::vector<ExpVec> support = {{2, 1}, {0, 0}};
    auto vals = eval_sequence(F, f, seq, 0, 2);
    CHECK(interpolate_known_support(F, support, vals, seq, 0) == f);
    // offset starts
    auto vals1 = eval_sequence(F, f, seq, 5, 2);
    CHECK(interpolate_known_support(F, support, vals1, seq, 5) == f);
    // single constant
    CHECK(interpolate_known_support(F, {{0, 0}}, {Fp{9}}, seq, 0) ==
          SparsePoly::constant(F, 2, Fp{9}));
    // colliding roots
    PrimeField F101(101);
    Rng rng2(55);
    GeometricSequence small(F101, {0, 0}, {4, 4}, rng2);
    // indices 1 and 1 + 25k collide only outside the window, so force equal
    CHECK_THROWS_AS(
        interpolate_known_support(F101, {{1, 0}, {1, 0}}, {Fp{1}, Fp{2}}, small, 0),
        singular_system);
}

TEST_CASE("verify_candidate") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(56);
    SparsePoly f = random_sparse(F, rng, 3, 10, 5);
    EvalFn oracle = [&](const std::vector<Fp>& pt) { return eval(F, f, pt); };
    CHECK(verify_candidate(F, oracle, f, rng));
    SparsePoly g = add(F, f, sp(F, 3, {{1, {1, 1, 1}}}));
    int false_positives = 0;
    for (int t = 0; t < 20; ++t)
        if (verify_candidate(F, oracle, g, rng)) ++false_positives;
    CHECK(false_positives == 0);
    SparsePoly z(2);
    EvalFn zero_oracle = [&](const std::vector<Fp>&) { return Fp{0}; };
    CHECK(verify_candidate(F, zero_oracle, z, rng));
}

TEST_CASE("sparse_mul and sparse_exact_divide fixtures") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(57);
    SparsePoly a = sp(F, 1, {{1, {1}}, {-1, {0}}});
    SparsePoly b = sp(F, 1, {{1, {4}}, {1, {3}}, {1, {2}}, {1, {1}}, {1, {0}}});
    SparsePoly x5m1 = sp(F, 1, {{1, {5}}, {-1, {0}}});
    CHECK(sparse_mul(F, a, b, rng) == x5m1);
    auto q = sparse_exact_divide(F, x5m1, a, rng);
    REQUIRE(q);
    CHECK(*q == b);
    PrimeField F7(7);
    Rng rng7(58);
    SparsePoly x5m1_7 = sp(F7, 1, {{1, {5}}, {-1, {0}}});
    CHECK_FALSE(sparse_exact_divide(F7, x5m1_7, sp(F7, 1, {{1, {1}}, {-2, {0}}}), rng7));
}

TEST_CASE("sparse_mul agrees with mul_naive (property)") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(59);
    for (int t = 0; t < 300; ++t) {
        int n = 1 + static_cast<int>(rng.below(4));
        SparsePoly a = random_sparse(F, rng, n, 1 + rng.below(30), 8);
        SparsePoly b = random_sparse(F, rng, n, 1 + rng.below(30), 8);
        CHECK(sparse_mul(F, a, b, rng) == mul_naive(F, a, b));
    }
}

TEST_CASE("divide inverts multiply (property)") {
    const PrimeField& F = PrimeField::default_field();
    Rng rng(60);
    for (int t = 0; t < 100; ++t) {
        int n = 1 + static_cast<int>(rng.below(3));
        SparsePoly a = random_sparse(F, rng, n, 1 + rng.below(10), 6);
        SparsePoly b = random_sparse(F, rng, n, 1 + rng.below(10), 6);
        if (a.is_zero()) continue;
        SparsePoly c = mul_naive(F, a, b);
        auto q = sparse_exact_divide(F, c, a, rng);
        REQUIRE(q);
        CHECK(*q == b);
    }
}
