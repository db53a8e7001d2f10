#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "spf/sparsepoly.hpp"
#include "spf/unipoly.hpp"

namespace spf::testing {

// dense polynomial from low-to-high integer coefficients
inline DensePoly dp(const PrimeField& F, std::initializer_list<i64> coeffs) {
    DensePoly f;
    for (i64 c : coeffs) f.c.push_back(F.from_int(c));
    f.trim();
    return f;
}

struct Term {
    i64 c;
    std::vector<i64> e;
};

inline SparsePoly sp(const PrimeField& F, int n, std::initializer_list<Term> terms) {
    SparsePoly r(n);
    for (auto& t : terms) r.add_term(F, t.e, F.from_int(t.c));
    return r;
}

// random dense polynomial of degree <= d (possibly smaller)
inline DensePoly random_dense(const PrimeField& F, Rng& rng, std::size_t d) {
    DensePoly f;
    f.c.resize(d + 1);
    for (auto& x : f.c) x = F.random(rng);
    f.trim();
    return f;
}

// random sparse polynomial: s terms, exponents in [0, dmax] per variable
inline SparsePoly random_sparse(const PrimeField& F, Rng& rng, int n, std::size_t s,
                                i64 dmax) {
    SparsePoly r(n);
    for (std::size_t k = 0; k < s; ++k) {
        ExpVec e(static_cast<std::size_t>(n));
        for (auto& x : e) x = rng.range(0, dmax);
        r.add_term(F, e, F.random_nonzero(rng));
    }
    return r;
}

}  // namespace spf::testing
