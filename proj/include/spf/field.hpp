#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "spf/errors.hpp"
#include "spf/rng.hpp"

namespace spf {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Element of Z/pZ, always kept reduced to [0, p).
struct Fp {
    u64 v = 0;
    friend bool operator==(Fp a, Fp b) { return a.v == b.v; }
    friend bool operator!=(Fp a, Fp b) { return a.v != b.v; }
};

/// Arithmetic context for F_p with a word-size prime p. Construction verifies
/// primality, factors p-1, and finds a primitive root; the object is
/// immutable afterwards and safe to share across threads.
class PrimeField {
public:
    explicit PrimeField(u64 p);

    // p = 2^64 - 2^32 + 1; p-1 = 2^32 * 3 * 5 * 17 * 257 * 65537.
    static constexpr u64 kDefaultPrime = 18446744069414584321ull;
    static const PrimeField& default_field();

    u64 modulus() const { return p_; }
    Fp primitive_root() const { return g_; }
    const std::vector<std::pair<u64, int>>& unit_group_factorization() const {
        return factors_;
    }
    // largest v with 2^v | p-1, and an element of order exactly 2^v
    int two_adicity() const { return two_adicity_; }
    Fp two_adic_root() const { return two_adic_root_; }

    Fp zero() const { return Fp{0}; }
    Fp one() const { return Fp{1 % p_}; }
    bool is_zero(Fp a) const { return a.v == 0; }

    Fp from_uint(u64 x) const { return Fp{x % p_}; }
    Fp from_int(i64 x) const {
        i64 r = x % static_cast<i64>(p_);
        if (r < 0) r += static_cast<i64>(p_);
        return Fp{static_cast<u64>(r)};
    }

    Fp add(Fp a, Fp b) const {
        u64 t = p_ - b.v;
        return Fp{a.v >= t ? a.v - t : a.v + b.v};
    }
    Fp sub(Fp a, Fp b) const { return Fp{a.v >= b.v ? a.v - b.v : a.v + p_ - b.v}; }
    Fp neg(Fp a) const { return Fp{a.v == 0 ? 0 : p_ - a.v}; }
    Fp mul(Fp a, Fp b) const {
        return Fp{static_cast<u64>(static_cast<u128>(a.v) * b.v % p_)};
    }
    Fp pow(Fp a, u64 e) const;
    // Laurent-friendly power: negative exponents go through inv().
    Fp pow_i(Fp a, i64 e) const {
        return e >= 0 ? pow(a, static_cast<u64>(e)) : inv(pow(a, static_cast<u64>(-e)));
    }
    Fp inv(Fp a) const {
        if (a.v == 0) throw division_by_zero();
        return pow(a, p_ - 2);
    }
    Fp div(Fp a, Fp b) const { return mul(a, inv(b)); }

    Fp random(Rng& rng) const { return Fp{rng.below(p_)}; }
    Fp random_nonzero(Rng& rng) const { return Fp{1 + rng.below(p_ - 1)}; }

    // Discrete logarithm base primitive_root(); h != 0. Pohlig-Hellman over
    // the factorization of p-1 with baby-step/giant-step per prime subgroup.
    u64 discrete_log(Fp h) const;

private:
    u64 p_;
    Fp g_;
    int two_adicity_ = 0;
    Fp two_adic_root_{1};
    std::vector<std::pair<u64, int>> factors_;  // factorization of p-1
    // baby-step tables for the small prime-order subgroups, keyed by prime
    struct BsgsTable {
        u64 prime;
        u64 m;                               // ceil(sqrt(prime))
        Fp giant;                            // gamma^-m
        std::unordered_map<u64, u64> baby;   // gamma^j -> j
    };
    std::vector<BsgsTable> tables_;

    u64 subgroup_log(Fp gamma, Fp h, u64 q) const;
};

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(u64 n);

// Full factorization (trial division + Pollard rho), sorted by prime.
std::vector<std::pair<u64, int>> factorize_u64(u64 n);

}  // namespace spf
