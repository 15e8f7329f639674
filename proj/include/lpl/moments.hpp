#pragma once

// The two sides of the power-mean asymptotic, plus the smoothed double sum
// that links them.
//
// Main term:  M_k(q) = sum_{m>=1, (m,q)=1} (Lambda*^k(m))^2 / m^2, truncated
// at M with a rigorous tail bound from Lambda*^k(m) <= (log m)^k:
//   tail <= int_M^inf (log t)^{2k} / t^2 dt   (+ peak term if the integrand
//   is not yet decreasing at M), evaluated in closed form.
//
// Empirical side:  (1/phi(q)) sum_chi |L'/L(1+it0,chi)|^{2k}, every chi when
// t0 != 0, chi != chi0 when t0 = 0.  Conjugate-pair shortcuts are never
// taken; the symmetry stays available as a cross-check.
//
// Smoothed double sum: brute-force accumulation of
//   sum_{m==n (mod q), (q,mn)=1} Lambda*^k(m) Lambda*^k(n)
//       / (m^{1+it0} n^{1-it0}) * e^{-mn/X}
// over mn <= X log(1/eps), in compensated arithmetic with a certified bound
// on the discarded mass.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lpl/arith.hpp"
#include "lpl/characters.hpp"
#include "lpl/errors.hpp"
#include "lpl/lfun.hpp"
#include "lpl/numeric.hpp"

namespace lpl {

struct main_term_result {
    unsigned k = 1;
    uint64_t q = 0;          // 0 means unrestricted (no coprimality filter)
    bool restricted = false;
    double value = 0.0;
    uint64_t truncation = 0;
    double tail_bound = 0.0;
};

namespace detail {

// int_M^inf (log t)^n / t^2 dt = (1/M) sum_{i=0}^{n} C(n,i) (log M)^(n-i) i!
inline double log_power_integral_tail(double m_trunc, unsigned n) {
    const double lm = std::log(m_trunc);
    double total = 0.0;
    double binom = 1.0, fact = 1.0; // C(n,i), i!
    for (unsigned i = 0; i <= n; ++i) {
        if (i > 0) {
            binom = binom * (n - i + 1) / i;
            fact *= i;
        }
        total += binom * fact * std::pow(lm, static_cast<double>(n - i));
    }
    return total / m_trunc;
}

} // namespace detail

// Tail bound for sum_{m>M} (log m)^{2k}/m^2; valid for every M >= 2.
inline double main_term_tail_bound(uint64_t m_trunc, unsigned k) {
    const double m = static_cast<double>(m_trunc);
    double bound = detail::log_power_integral_tail(m, 2 * k);
    // (log t)^{2k}/t^2 peaks at log t = k; if M is left of the peak, one
    // more term covers the non-monotone stretch.
    if (std::log(m) < static_cast<double>(k))
        bound += std::pow(static_cast<double>(k), 2.0 * k) * std::exp(-2.0 * k);
    return bound;
}

inline main_term_result main_term_from_table(const convolution_table& table, uint64_t q,
                                             bool restricted) {
    if (restricted && q < 2)
        throw std::invalid_argument("main_term: restricted variant needs q >= 2");
    main_term_result r;
    r.k = table.k;
    r.q = restricted ? q : 0;
    r.restricted = restricted;
    r.truncation = table.limit;
    r.tail_bound = main_term_tail_bound(table.limit, table.k);
    neumaier_sum acc;
    for (uint64_t m = 2; m <= table.limit; ++m) {
        const double v = table.values[m];
        if (v == 0.0) continue;
        if (restricted && std::gcd(m, q) != 1) continue;
        const double dm = static_cast<double>(m);
        acc.add((v / dm) * (v / dm));
    }
    r.value = acc.value();
    return r;
}

inline main_term_result main_term(unsigned k, uint64_t q, uint64_t m_trunc, bool restricted,
                                  uint64_t budget = default_table_budget) {
    if (k < 1) throw std::invalid_argument("main_term: k must be >= 1");
    if (m_trunc < 2) throw std::invalid_argument("main_term: truncation must be >= 2");
    const convolution_table table = convolve_mangoldt(k, m_trunc, budget);
    return main_term_from_table(table, q, restricted);
}

struct empirical_moment_result {
    unsigned k = 1;
    uint64_t q = 0;
    double t0 = 0.0;
    double value = 0.0;
    uint64_t characters_used = 0;
    bool excluded_principal = false;
    double error = 0.0; // propagated evaluation error
};

namespace detail {

// |L'/L|^2 with first-order error propagation, per character, evaluation
// parallelized over characters with a serial index-ordered reduction so the
// result is bit-identical for every thread count.
inline void sweep_log_derivatives(const character_group& group, double t0,
                                  const eval_params& params, bool include_principal,
                                  unsigned threads, std::vector<double>& sq_values,
                                  std::vector<double>& sq_errors) {
    const l_sweep sweep(group, complex_d{1.0, t0}, params);
    const std::size_t count = group.size();
    sq_values.assign(count, 0.0);
    sq_errors.assign(count, 0.0);
    std::vector<std::string> failures(count);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (i == 0 && !include_principal) continue; // index 0 is principal
            try {
                const certified_complex r = sweep.log_derivative(group.character_at(i));
                const double mag = std::abs(r.value);
                sq_values[i] = mag * mag;
                sq_errors[i] = 2.0 * mag * r.error;
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };

    if (threads <= 1 || count < 8) {
        work(0, count);
    } else {
        const unsigned nt = std::min<unsigned>(threads, std::thread::hardware_concurrency());
        std::vector<std::thread> pool;
        const std::size_t chunk = (count + nt - 1) / nt;
        for (unsigned t = 0; t < nt; ++t) {
            const std::size_t b = t * chunk;
            if (b >= count) break;
            pool.emplace_back(work, b, std::min(count, b + chunk));
        }
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < count; ++i)
        if (!failures[i].empty())
            throw near_zero_denominator("character index " + std::to_string(i) + ": " +
                                        failures[i]);
}

inline double pow_uint(double x, unsigned n) {
    double r = 1.0;
    while (n) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

} // namespace detail

inline empirical_moment_result empirical_moment(unsigned k, uint64_t q, double t0,
                                                const eval_params& params,
                                                unsigned threads = 1) {
    if (k < 1) throw std::invalid_argument("empirical_moment: k must be >= 1");
    if (q < 2) throw std::invalid_argument("empirical_moment: q must be >= 2");
    const bool exclude_principal = (t0 == 0.0);
    if (q == 2 && exclude_principal)
        throw empty_character_set("empirical_moment: q=2 at t0=0 has no non-principal character");

    const character_group group(q);
    std::vector<double> sq, sq_err;
    detail::sweep_log_derivatives(group, t0, params, !exclude_principal, threads, sq, sq_err);

    empirical_moment_result r;
    r.k = k;
    r.q = q;
    r.t0 = t0;
    r.excluded_principal = exclude_principal;
    r.characters_used = group.phi() - (exclude_principal ? 1 : 0);
    neumaier_sum acc, err;
    for (std::size_t i = exclude_principal ? 1 : 0; i < group.size(); ++i) {
        acc.add(detail::pow_uint(sq[i], k));
        // d(x^k) = k x^(k-1) dx
        err.add(k * detail::pow_uint(sq[i], k - 1) * sq_err[i]);
    }
    r.value = acc.value() / static_cast<double>(group.phi());
    r.error = err.value() / static_cast<double>(group.phi());
    return r;
}

struct smoothed_sum_result {
    unsigned k = 1;
    uint64_t q = 0;
    double t0 = 0.0;
    double smoothing_x = 0.0;
    std::complex<double> value{0.0, 0.0};
    uint64_t cutoff = 0; // largest mn included
    double truncation_bound = 0.0;
};

inline smoothed_sum_result smoothed_double_sum(unsigned k, uint64_t q, double t0, double x,
                                               double eps,
                                               uint64_t budget = default_table_budget) {
    if (k < 1) throw std::invalid_argument("smoothed_double_sum: k must be >= 1");
    if (q < 2) throw std::invalid_argument("smoothed_double_sum: q must be >= 2");
    if (!(x > 1.0)) throw std::invalid_argument("smoothed_double_sum: X must be > 1");
    if (!(eps > 0.0) || eps >= 1.0)
        throw std::invalid_argument("smoothed_double_sum: eps must be in (0,1)");

    const double big_l = std::log(1.0 / eps);
    const double cutoff_real = x * big_l;
    if (cutoff_real > static_cast<double>(budget))
        throw table_budget_exceeded("smoothed_double_sum: X log(1/eps) exceeds table budget");
    const uint64_t cutoff = static_cast<uint64_t>(cutoff_real);

    const convolution_table table = convolve_mangoldt(k, cutoff, budget);

    smoothed_sum_result r;
    r.k = k;
    r.q = q;
    r.t0 = t0;
    r.smoothing_x = x;
    r.cutoff = cutoff;

    complex_sum acc;
    for (uint64_t m = 1; m <= cutoff; ++m) {
        const double vm = table.values[m];
        if (vm == 0.0 || std::gcd(m, q) != 1) continue;
        const double logm = std::log(static_cast<double>(m));
        const uint64_t nmax = cutoff / m;
        // n == m (mod q) and gcd(m,q)=1 force gcd(n,q)=1; m%q is never 0 here
        for (uint64_t n = m % q; n <= nmax; n += q) {
            const double vn = table.values[n];
            if (vn == 0.0) continue;
            const double logn = std::log(static_cast<double>(n));
            const double mn = static_cast<double>(m) * static_cast<double>(n);
            const double mag = vm * vn / mn * std::exp(-mn / x);
            const double phase = -t0 * (logm - logn);
            acc.add({mag * std::cos(phase), mag * std::sin(phase)});
        }
    }
    r.value = acc.value();

    // Discarded pairs have mn > C, so e^{-mn/X} <= eps.  With d(r) <= 2 sqrt(r)
    // and Lambda*^k <= log^k:
    //   tail <= 2 sum_{r>C} e^{-r/X} (log r)^{2k} / sqrt(r)
    //        <= 2 (X+1) eps * sup_{t>=C} (log t)^{2k}/sqrt(t).
    const double c = static_cast<double>(cutoff);
    double sup;
    if (std::log(c) >= 4.0 * k)
        sup = std::pow(std::log(c), 2.0 * k) / std::sqrt(c);
    else
        sup = std::pow(4.0 * k, 2.0 * k) * std::exp(-2.0 * k); // peak at log t = 4k
    r.truncation_bound = 2.0 * (x + 1.0) * eps * sup;
    return r;
}

inline bool is_prime(uint64_t n) {
    if (n < 2) return false;
    const factored_integer f = factorize(n);
    return f.factors.size() == 1 && f.factors[0].exponent == 1;
}

struct deviation_row {
    uint64_t q = 0;
    unsigned k = 1;
    double t0 = 0.0;
    bool restricted = false;
    double empirical = 0.0;
    double main_term = 0.0;
    double deviation = 0.0;
    double predicted_scale = 0.0;
    double tail_bound = 0.0;
    bool ok = false;
    std::string error;
};

struct deviation_report {
    std::vector<deviation_row> rows;
};

// Error scale of the theorems: (log q)^{8k}/q at t0 = 0, the Theorem-1.1
// composite scale otherwise.
inline double predicted_error_scale(uint64_t q, unsigned k, double t0) {
    const double lq = std::log(static_cast<double>(q));
    if (t0 == 0.0) return std::pow(lq, 8.0 * k) / static_cast<double>(q);
    const double phi = static_cast<double>(euler_phi(q));
    const double at = std::abs(t0);
    return std::pow(lq, 4.0 * k + 4.0) / static_cast<double>(q) +
           (std::pow(at, -(2.0 * k - 1.0)) +
            std::pow(std::log(static_cast<double>(q) * (at + 2.0)), 2.0 * k)) /
               phi;
}

// Per-q comparison of the empirical moment against the truncated main term.
// Prime q uses the unrestricted main term (the coprimality condition drops
// for primes); composite q uses the restricted one.  Failures are recorded
// per row, never aborting the sweep.
inline deviation_report deviation_sweep(unsigned k, const std::vector<uint64_t>& q_list,
                                        double t0, uint64_t m_trunc, const eval_params& params,
                                        unsigned threads = 1,
                                        uint64_t budget = default_table_budget) {
    if (q_list.empty()) throw std::invalid_argument("deviation_sweep: empty q list");
    const convolution_table table = convolve_mangoldt(k, m_trunc, budget);
    deviation_report report;
    for (uint64_t q : q_list) {
        deviation_row row;
        row.q = q;
        row.k = k;
        row.t0 = t0;
        try {
            if (q < 3) throw std::invalid_argument("deviation_sweep: q must be >= 3");
            row.restricted = !is_prime(q);
            const main_term_result mt = main_term_from_table(table, q, row.restricted);
            const empirical_moment_result em = empirical_moment(k, q, t0, params, threads);
            row.empirical = em.value;
            row.main_term = mt.value;
            row.deviation = std::abs(em.value - mt.value);
            row.predicted_scale = predicted_error_scale(q, k, t0);
            row.tail_bound = mt.tail_bound;
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(row);
    }
    return report;
}

} // namespace lpl
