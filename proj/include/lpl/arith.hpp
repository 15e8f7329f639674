#pragma once

// Integer-arithmetic kernels: factorization, totient, the von Mangoldt
// function Lambda, its k-fold Dirichlet convolutions, and exact Bernoulli
// numbers for the Euler-Maclaurin machinery.
//
// Lambda(m) = log p when m = p^j, 0 otherwise.  The k-fold convolution
//   Lambda*^k(m) = sum_{m = m1*m2*...*mk} Lambda(m1)...Lambda(mk)
// satisfies Lambda*^k(m) <= (log m)^k, so every table here holds plain
// doubles with no overflow concern.  A table truncated at M is exact for
// every m <= M: Dirichlet convolution never pulls in factors above m.

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lpl/errors.hpp"

namespace lpl {

using std::int64_t;
using std::uint32_t;
using std::uint64_t;

struct prime_power {
    uint64_t prime;
    unsigned exponent;
    bool operator==(const prime_power&) const = default;
};

// n together with its factorization; primes strictly increasing.
struct factored_integer {
    uint64_t n = 1;
    std::vector<prime_power> factors;
};

// Trial division with a 2,3-wheel; fine up to ~10^12.
inline factored_integer factorize(uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    factored_integer out;
    out.n = n;
    auto strip = [&](uint64_t p) {
        if (n % p != 0) return;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.factors.push_back({p, e});
    };
    strip(2);
    strip(3);
    for (uint64_t p = 5; p * p <= n; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) out.factors.push_back({n, 1});
    return out;
}

inline uint64_t euler_phi(const factored_integer& f) {
    uint64_t phi = 1;
    for (const auto& [p, e] : f.factors) {
        uint64_t pe = 1;
        for (unsigned i = 0; i + 1 < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    return phi;
}

inline uint64_t euler_phi(uint64_t n) { return euler_phi(factorize(n)); }

// Default cap on table length: 1e7 doubles (~80 MB) per table.
inline constexpr uint64_t default_table_budget = 10'000'000;

inline void check_table_budget(uint64_t limit, uint64_t budget) {
    if (limit > budget)
        throw table_budget_exceeded("table limit " + std::to_string(limit) +
                                    " exceeds budget " + std::to_string(budget));
}

// Lambda(m) for m <= limit, plus the list of prime powers (the support),
// which makes convolution against this table O(M log log M).
struct mangoldt_table {
    uint64_t limit = 0;
    std::vector<double> values;        // values[m] = Lambda(m), index 0 unused
    std::vector<uint32_t> support;     // ascending prime powers <= limit
};

inline mangoldt_table build_mangoldt_table(uint64_t limit,
                                           uint64_t budget = default_table_budget) {
    if (limit < 1) throw std::invalid_argument("mangoldt_table: limit must be >= 1");
    check_table_budget(limit, budget);
    mangoldt_table t;
    t.limit = limit;
    t.values.assign(limit + 1, 0.0);

    // Linear sieve of smallest prime factors.
    std::vector<uint32_t> spf(limit + 1, 0);
    std::vector<uint32_t> primes;
    for (uint64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<uint32_t>(i);
            primes.push_back(static_cast<uint32_t>(i));
        }
        for (uint32_t p : primes) {
            if (p > spf[i] || i * p > limit) break;
            spf[i * p] = p;
        }
    }
    for (uint32_t p : primes) {
        const double logp = std::log(static_cast<double>(p));
        for (uint64_t pw = p; pw <= limit; pw *= p) {
            t.values[pw] = logp;
            t.support.push_back(static_cast<uint32_t>(pw));
            if (pw > limit / p) break; // next power would overflow past limit
        }
    }
    std::sort(t.support.begin(), t.support.end());
    return t;
}

// One truncated Dirichlet convolution step: out[d*e] += f[d] * Lambda(e),
// summed over prime powers e.  Exact below the truncation point.
inline std::vector<double> convolve_with_mangoldt(const std::vector<double>& f,
                                                  const mangoldt_table& lam) {
    const uint64_t limit = lam.limit;
    if (f.size() != limit + 1)
        throw std::invalid_argument("convolve_with_mangoldt: length mismatch");
    std::vector<double> out(limit + 1, 0.0);
    for (uint32_t e : lam.support) {
        const double le = lam.values[e];
        const uint64_t dmax = limit / e;
        for (uint64_t d = 1; d <= dmax; ++d) {
            if (f[d] != 0.0) out[d * e] += f[d] * le;
        }
    }
    return out;
}

// Lambda*^k(m) for m <= limit.
struct convolution_table {
    unsigned k = 0;
    uint64_t limit = 0;
    std::vector<double> values;
};

inline convolution_table convolve_mangoldt(unsigned k, uint64_t limit,
                                           uint64_t budget = default_table_budget) {
    if (k < 1) throw std::invalid_argument("convolve_mangoldt: k must be >= 1");
    if (limit < 1) throw std::invalid_argument("convolve_mangoldt: limit must be >= 1");
    check_table_budget(limit, budget);
    mangoldt_table lam = build_mangoldt_table(limit, budget);
    convolution_table t;
    t.k = k;
    t.limit = limit;
    t.values = lam.values;
    for (unsigned step = 1; step < k; ++step)
        t.values = convolve_with_mangoldt(t.values, lam);
    return t;
}

namespace detail {
using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;
} // namespace detail

// Even-index Bernoulli numbers B_2, B_4, ..., exact rationals with double
// renderings.  B_1 = -1/2 convention; odd B_n vanish for n >= 3.
struct bernoulli_table {
    unsigned count = 0;                     // number of even-index entries
    std::vector<detail::bigrat> exact;      // exact[i] = B_{2(i+1)}
    std::vector<double> values;             // same, rounded to double

    double b2j(unsigned j) const { return values.at(j - 1); } // B_{2j}
};

// Recurrence sum_{j=0}^{n} C(n+1, j) B_j = 0, run in exact rationals.
inline bernoulli_table build_bernoulli_table(unsigned count) {
    if (count < 1) throw std::invalid_argument("bernoulli: count must be >= 1");
    if (count > 60)
        throw std::invalid_argument(
            "bernoulli: count > 60 unsupported (Euler-Maclaurin terms diverge "
            "before convergence at working precision)");
    using detail::bigint;
    using detail::bigrat;
    const unsigned nmax = 2 * count;
    std::vector<bigrat> b(nmax + 1);
    b[0] = 1;
    for (unsigned n = 1; n <= nmax; ++n) {
        // B_n = -1/(n+1) * sum_{j<n} C(n+1, j) B_j
        bigrat acc = 0;
        bigint binom = 1; // C(n+1, 0)
        for (unsigned j = 0; j < n; ++j) {
            acc += bigrat(binom) * b[j];
            binom = binom * (n + 1 - j) / (j + 1);
        }
        b[n] = -acc / bigrat(n + 1);
    }
    bernoulli_table t;
    t.count = count;
    for (unsigned j = 1; j <= count; ++j) {
        t.exact.push_back(b[2 * j]);
        t.values.push_back(static_cast<double>(b[2 * j]));
    }
    return t;
}

} // namespace lpl
