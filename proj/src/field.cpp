#include "spf/field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace spf {

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 pollard_rho(u64 n, u64 c) {
    u64 x = 2, y = 2, d = 1;
    u64 count = 0;
    while (d == 1) {
        x = (mulmod(x, x, n) + c) % n;
        y = (mulmod(y, y, n) + c) % n;
        y = (mulmod(y, y, n) + c) % n;
        d = std::gcd(x > y ? x - y : y - x, n);
        if (++count > (1ull << 26)) return 0;  // give up, caller retries with new c
    }
    return d == n ? 0 : d;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::pair<u64, int>> factorize_u64(u64 n) {
    std::map<u64, int> acc;
    auto add_prime = [&](u64 q) { ++acc[q]; };

    // peel small factors first
    for (u64 q = 2; q < 100000 && q * q <= n; q == 2 ? q = 3 : q += 2) {
        while (n % q == 0) {
            add_prime(q);
            n /= q;
        }
    }
    // recursive rho on what remains
    std::vector<u64> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime_u64(m)) {
            add_prime(m);
            continue;
        }
        u64 d = 0;
        for (u64 c = 1; d == 0; ++c) d = pollard_rho(m, c);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    return {acc.begin(), acc.end()};
}

Fp PrimeField::pow(Fp a, u64 e) const {
    Fp r = one(), b = a;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

PrimeField::PrimeField(u64 p) : p_(p) {
    if (!is_prime_u64(p)) throw error("modulus " + std::to_string(p) + " is not prime");
    factors_ = factorize_u64(p - 1);

    // smallest g with g^((p-1)/q) != 1 for every prime q | p-1
    for (u64 cand = 2;; ++cand) {
        Fp g{cand % p_};
        if (g.v == 0) continue;
        bool ok = true;
        for (auto& [q, e] : factors_) {
            if (pow(g, (p_ - 1) / q).v == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            g_ = g;
            break;
        }
    }

    for (auto& [q, e] : factors_)
        if (q == 2) two_adicity_ = e;
    two_adic_root_ = pow(g_, (p_ - 1) >> two_adicity_);

    // precompute BSGS tables for the manageable prime subgroups
    for (auto& [q, e] : factors_) {
        if (q > (1ull << 40)) continue;  // discrete_log will reject such moduli
        u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(q))));
        if (m == 0) m = 1;
        BsgsTable t;
        t.prime = q;
        t.m = m;
        Fp gamma = pow(g_, (p_ - 1) / q);  // order exactly q
        if (q <= (1ull << 21)) {
            t.baby.reserve(m + 1);
            Fp cur = one();
            for (u64 j = 0; j < m; ++j) {
                t.baby.emplace(cur.v, j);
                cur = mul(cur, gamma);
            }
            t.giant = inv(pow(gamma, m));
        }
        tables_.push_back(std::move(t));
    }
}

const PrimeField& PrimeField::default_field() {
    static const PrimeField F(kDefaultPrime);
    return F;
}

// log of h in the cyclic group generated by gamma of prime order q
u64 PrimeField::subgroup_log(Fp gamma, Fp h, u64 q) const {
    const BsgsTable* table = nullptr;
    for (auto& t : tables_) {
        if (t.prime == q) {
            table = &t;
            break;
        }
    }
    if (!table) throw error("p-1 has a prime factor too large for discrete logs");
    u64 m = table->m;
    if (!table->baby.empty()) {
        Fp cur = h;
        for (u64 i = 0; i <= m; ++i) {
            auto it = table->baby.find(cur.v);
            if (it != table->baby.end()) {
                u64 x = i * m + it->second;
                if (x < q) return x;
            }
            cur = mul(cur, table->giant);
        }
        throw error("discrete log not found in subgroup");
    }
    // large prime: build the table on the fly
    std::unordered_map<u64, u64> baby;
    baby.reserve(m + 1);
    Fp cur = one();
    for (u64 j = 0; j < m; ++j) {
        baby.emplace(cur.v, j);
        cur = mul(cur, gamma);
    }
    Fp giant = inv(pow(gamma, m));
    cur = h;
    for (u64 i = 0; i <= m; ++i) {
        auto it = baby.find(cur.v);
        if (it != baby.end()) {
            u64 x = i * m + it->second;
            if (x < q) return x;
        }
        cur = mul(cur, giant);
    }
    throw error("discrete log not found in subgroup");
}

u64 PrimeField::discrete_log(Fp h) const {
    if (h.v == 0) throw division_by_zero();
    const u64 n = p_ - 1;
    // CRT accumulation of x mod q^e over the factorization of p-1
    u64 x = 0, mod = 1;
    for (auto& [q, e] : factors_) {
        u64 qe = 1;
        for (int i = 0; i < e; ++i) qe *= q;
        Fp gamma = pow(g_, n / q);  // order q
        // digits of x mod q^e
        u64 xk = 0, qk = 1;
        Fp hk = pow(h, n / qe);
        Fp g_qe = pow(g_, n / qe);
        for (int k = 0; k < e; ++k) {
            // strip the known digits, then drop into the order-q subgroup
            Fp rest = mul(hk, inv(pow(g_qe, xk)));
            Fp target = pow(rest, qe / (qk * q));
            u64 digit = subgroup_log(gamma, target, q);
            xk += digit * qk;
            qk *= q;
        }
        // CRT: combine x == xk (mod qe) into x (mod mod*qe)
        // mod and qe are coprime
        u64 m1_inv = 0;
        {
            i64 a = static_cast<i64>(mod % qe), m = static_cast<i64>(qe);
            i64 t0 = 0, t1 = 1, r0 = m, r1 = a;
            while (r1) {
                i64 qq = r0 / r1;
                t0 -= qq * t1;
                std::swap(t0, t1);
                r0 -= qq * r1;
                std::swap(r0, r1);
            }
            if (t0 < 0) t0 += m;
            m1_inv = static_cast<u64>(t0);
        }
        u64 diff = (xk + qe - x % qe) % qe;
        u64 t = mulmod(diff, m1_inv, qe);
        x = x + mod * t;
        mod *= qe;
    }
    return x % n;
}

}  // namespace spf
