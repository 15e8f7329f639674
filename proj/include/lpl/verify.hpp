#pragma once

// Self-check suites behind `verify`: every module's invariants at two
// scales.  quick: q <= 30, tables <= 1e4.  full: q <= 60, tables <= 1e6.
// All randomness is fixed-seed, so a verify run is reproducible.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lpl/arith.hpp"
#include "lpl/characters.hpp"
#include "lpl/distribution.hpp"
#include "lpl/hurwitz.hpp"
#include "lpl/lfun.hpp"
#include "lpl/moments.hpp"

namespace lpl {

struct check_result {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

struct checker {
    std::vector<check_result> results;
    double worst = 0.0;

    void run(const std::string& name, const std::function<std::string()>& body) {
        check_result r;
        r.name = name;
        try {
            r.detail = body();
            r.pass = true;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        results.push_back(std::move(r));
    }
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

// Ordered k-factorization brute force of Lambda*^k(m).
inline double convolution_brute(unsigned k, uint64_t m, const mangoldt_table& lam) {
    if (k == 1) return lam.values[m];
    double total = 0.0;
    for (uint64_t d = 1; d <= m; ++d) {
        if (m % d != 0 || lam.values[d] == 0.0) continue;
        total += lam.values[d] * convolution_brute(k - 1, m / d, lam);
    }
    return total;
}

} // namespace detail

inline std::vector<check_result> run_verification(bool full, unsigned threads = 1) {
    detail::checker c;
    std::mt19937_64 rng(0x5eed);
    const uint64_t table_m = full ? 1'000'000 : 10'000;
    const uint64_t q_max = full ? 60 : 30;

    c.run("arith/chebyshev-identity", [&] {
        const mangoldt_table lam = build_mangoldt_table(table_m);
        std::uniform_int_distribution<uint64_t> pick(2, table_m);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const uint64_t m = pick(rng);
            double s = 0.0;
            for (uint64_t d = 1; d * d <= m; ++d) {
                if (m % d != 0) continue;
                s += lam.values[d];
                if (d != m / d) s += lam.values[m / d];
            }
            worst = std::max(worst, std::abs(s - std::log(static_cast<double>(m))));
        }
        detail::require(worst < 1e-10, "sum_{d|m} Lambda(d) != log m, err=" + format_float(worst));
        return "max err " + format_float(worst);
    });

    c.run("arith/convolution-log-bound", [&] {
        const uint64_t limit = full ? 100'000 : 10'000;
        for (unsigned k = 1; k <= 4; ++k) {
            const convolution_table t = convolve_mangoldt(k, limit);
            for (uint64_t m = 2; m <= limit; ++m) {
                const double bound = std::pow(std::log(static_cast<double>(m)), k) + 1e-9;
                detail::require(t.values[m] >= 0.0 && t.values[m] <= bound,
                                "Lambda*^k out of [0, log^k] at m=" + std::to_string(m));
            }
        }
        return std::string("k <= 4, m <= ") + std::to_string(limit);
    });

    c.run("arith/convolution-brute-force", [&] {
        const mangoldt_table lam = build_mangoldt_table(200);
        for (unsigned k = 1; k <= 3; ++k) {
            const convolution_table t = convolve_mangoldt(k, 200);
            for (uint64_t m = 1; m <= 200; ++m)
                detail::require(std::abs(t.values[m] - detail::convolution_brute(k, m, lam)) < 1e-10,
                                "mismatch at k=" + std::to_string(k) + " m=" + std::to_string(m));
        }
        return "m <= 200, k <= 3";
    });

    c.run("arith/convolution-associativity", [&] {
        const uint64_t limit = full ? 100'000 : 5'000;
        const mangoldt_table lam = build_mangoldt_table(limit);
        const convolution_table t2 = convolve_mangoldt(2, limit);
        const convolution_table t3 = convolve_mangoldt(3, limit);
        const std::vector<double> t2x1 = convolve_with_mangoldt(t2.values, lam);
        for (uint64_t m = 1; m <= limit; ++m)
            detail::require(std::abs(t2x1[m] - t3.values[m]) < 1e-10,
                            "associativity fails at m=" + std::to_string(m));
        return "entrywise to 1e-10";
    });

    c.run("arith/phi-multiplicative", [&] {
        std::uniform_int_distribution<uint64_t> pick(1, 10'000);
        for (int i = 0; i < 200; ++i) {
            const uint64_t a = pick(rng), b = pick(rng);
            if (std::gcd(a, b) != 1) continue;
            detail::require(euler_phi(a * b) == euler_phi(a) * euler_phi(b),
                            "phi not multiplicative at " + std::to_string(a) + "," +
                                std::to_string(b));
        }
        return "coprime pairs below 1e4";
    });

    c.run("characters/orthogonality", [&] {
        double worst = 0.0;
        for (uint64_t q = 2; q <= q_max; ++q) {
            const character_group g(q);
            const auto chars = all_characters(g);
            for (uint64_t m = 0; m < q; ++m) {
                for (uint64_t n = 0; n < q; ++n) {
                    if (std::gcd(n, q) != 1) continue;
                    complex_d sum{0.0, 0.0};
                    for (const auto& chi : chars)
                        sum += chi.value(static_cast<int64_t>(m)) *
                               std::conj(chi.value(static_cast<int64_t>(n)));
                    const bool hit = (m % q == n % q) && std::gcd(m, q) == 1;
                    const complex_d want = hit ? complex_d{static_cast<double>(g.phi()), 0.0}
                                               : complex_d{0.0, 0.0};
                    worst = std::max(worst, std::abs(sum - want));
                }
            }
        }
        detail::require(worst < 1e-10, "orthogonality err " + format_float(worst));
        return "q <= " + std::to_string(q_max) + ", max err " + format_float(worst);
    });

    c.run("characters/multiplicativity", [&] {
        std::uniform_int_distribution<uint64_t> pickq(3, q_max);
        std::uniform_int_distribution<int64_t> pickn(1, 1000);
        for (int i = 0; i < 200; ++i) {
            const character_group g(pickq(rng));
            std::uniform_int_distribution<std::size_t> pickc(0, g.size() - 1);
            const auto chi = g.character_at(pickc(rng));
            const int64_t m = pickn(rng), n = pickn(rng);
            const complex_d lhs = chi.value(m * n);
            const complex_d rhs = chi.value(m) * chi.value(n);
            detail::require(std::abs(lhs - rhs) < 1e-12, "chi(mn) != chi(m)chi(n)");
        }
        return "200 random triples";
    });

    c.run("characters/column-orthogonality", [&] {
        for (uint64_t q = 3; q <= q_max; ++q) {
            const character_group g(q);
            for (std::size_t i = 1; i < g.size(); ++i) {
                const auto chi = g.character_at(i);
                complex_d sum{0.0, 0.0};
                for (uint64_t n = 0; n < q; ++n) sum += chi.value(static_cast<int64_t>(n));
                detail::require(std::abs(sum) < 1e-10, "nonzero column sum, q=" + std::to_string(q));
            }
        }
        return "non-principal columns vanish";
    });

    c.run("lfun/hurwitz-identities", [&] {
        eval_params params;
        std::uniform_real_distribution<double> sig(1.0, 3.0), tpart(-10.0, 10.0);
        double worst = 0.0;
        for (int i = 0; i < (full ? 20 : 8); ++i) {
            complex_d s{sig(rng), tpart(rng)};
            if (std::abs(s - 1.0) < 0.05) s += 0.1;
            const complex_d z1 = hurwitz_zeta(s, 1.0, params).value;
            const complex_d zh = hurwitz_zeta(s, 0.5, params).value;
            worst = std::max(worst, std::abs(zh - (std::pow(complex_d{2.0, 0.0}, s) - 1.0) * z1));
            const uint64_t q = 7;
            complex_d sum{0.0, 0.0};
            for (uint64_t a = 1; a <= q; ++a)
                sum += hurwitz_zeta(s, static_cast<double>(a) / q, params).value;
            worst = std::max(worst,
                             std::abs(sum - std::pow(complex_d{static_cast<double>(q), 0.0}, s) * z1));
        }
        detail::require(worst < 1e-9, "identity err " + format_float(worst));
        return "max err " + format_float(worst);
    });

    c.run("lfun/conjugate-symmetry", [&] {
        eval_params params;
        const character_group g(7);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto chi = g.character_at(i);
            const complex_d s{1.3, 0.7};
            const complex_d a = dirichlet_l(std::conj(s), chi.conjugate(), params).value;
            const complex_d b = std::conj(dirichlet_l(s, chi, params).value);
            worst = std::max(worst, std::abs(a - b));
        }
        detail::require(worst < 1e-10, "conjugate symmetry err " + format_float(worst));
        return "max err " + format_float(worst);
    });

    c.run("lfun/derivative-finite-difference", [&] {
        eval_params params;
        const character_group g(5);
        const auto chi = g.character_at(1);
        const complex_d s{1.0, 1.0};
        const double h = 1e-5;
        const complex_d fd =
            (dirichlet_l(s + h, chi, params).value - dirichlet_l(s - h, chi, params).value) /
            (2.0 * h);
        const complex_d lp = dirichlet_l_prime(s, chi, params).value;
        detail::require(std::abs(fd - lp) < 1e-7, "FD mismatch " + format_float(std::abs(fd - lp)));
        return "err " + format_float(std::abs(fd - lp));
    });

    c.run("lfun/dirichlet-series-oracle", [&] {
        eval_params params;
        const std::vector<uint64_t> qs = full ? std::vector<uint64_t>{5, 7, 12}
                                              : std::vector<uint64_t>{5};
        double worst = 0.0;
        for (uint64_t q : qs) {
            const character_group g(q);
            const l_sweep sweep(g, {3.0, 0.0}, params);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto chi = g.character_at(i);
                complex_sum series, series_p;
                for (uint64_t n = 1; n <= 1'000'000; ++n) {
                    const complex_d cv = chi.value(static_cast<int64_t>(n));
                    if (cv == complex_d{0.0, 0.0}) continue;
                    const double n3 = static_cast<double>(n) * n * n;
                    series.add(cv / n3);
                    series_p.add(-std::log(static_cast<double>(n)) * cv / n3);
                }
                worst = std::max(worst, std::abs(sweep.l(chi).value - series.value()));
                worst = std::max(worst, std::abs(sweep.l_prime(chi).value - series_p.value()));
            }
        }
        detail::require(worst < 1e-10, "series oracle err " + format_float(worst));
        return "max err " + format_float(worst);
    });

    c.run("lfun/error-certification", [&] {
        eval_params lo, hi;
        lo.target_eps = 1e-13;
        hi.target_eps = 2e-13;
        double worst = 0.0;
        for (double a : {1.0, 0.5, 0.25, 1.0 / 7.0}) {
            const complex_d s{1.5, 3.0};
            const auto vh = hurwitz_zeta(s, a, hi);
            const auto vl = hurwitz_zeta(s, a, lo);
            detail::require(std::abs(vh.value - vl.value) <= vh.error,
                            "certified error too small");
            worst = std::max(worst, std::abs(vh.value - vl.value));
        }
        return "halving eps moves values by at most " + format_float(worst);
    });

    c.run("moments/tail-soundness", [&] {
        const std::vector<uint64_t> ms = full ? std::vector<uint64_t>{10'000, 100'000, 1'000'000}
                                              : std::vector<uint64_t>{10'000, 100'000};
        for (unsigned k = 1; k <= 3; ++k) {
            for (uint64_t m : ms) {
                const main_term_result small = main_term(k, 0, m, false);
                const main_term_result big = main_term(k, 0, 2 * m, false);
                detail::require(std::abs(big.value - small.value) <= small.tail_bound,
                                "tail bound violated at k=" + std::to_string(k) +
                                    " M=" + std::to_string(m));
            }
        }
        return "doubling M stays within tail_bound";
    });

    c.run("moments/prime-decomposition", [&] {
        const uint64_t limit = full ? 200'000 : 20'000;
        for (unsigned k = 1; k <= 2; ++k) {
            const convolution_table t = convolve_mangoldt(k, limit);
            for (uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
                const double unres = main_term_from_table(t, p, false).value;
                const double res = main_term_from_table(t, p, true).value;
                // removed mass = sum over multiples of p
                neumaier_sum removed;
                for (uint64_t m = p; m <= limit; m += p) {
                    const double v = t.values[m];
                    if (v != 0.0) removed.add((v / m) * (v / m));
                }
                detail::require(std::abs((unres - res) - removed.value()) < 1e-14,
                                "decomposition off at p=" + std::to_string(p));
                if (k == 1) {
                    // Lambda is supported on prime powers, so at k=1 the removed
                    // mass is exactly the p-power subsum
                    neumaier_sum pp;
                    for (uint64_t pw = p; pw <= limit; pw *= p) {
                        const double v = t.values[pw];
                        pp.add((v / pw) * (v / pw));
                    }
                    detail::require(std::abs((unres - res) - pp.value()) < 1e-14,
                                    "prime-power subsum off at p=" + std::to_string(p));
                }
            }
        }
        return "p in {2,3,5,7}, k in {1,2}";
    });

    c.run("moments/conjugation-symmetry", [&] {
        eval_params params;
        const double t0 = 0.7;
        for (uint64_t q : {5ull, 12ull}) {
            const auto plus = empirical_moment(1, q, t0, params, threads);
            const auto minus = empirical_moment(1, q, -t0, params, threads);
            detail::require(std::abs(plus.value - minus.value) < 1e-9,
                            "empirical moment not symmetric in t0, q=" + std::to_string(q));
        }
        return "t0 -> -t0 invariant to 1e-9";
    });

    c.run("moments/smoothed-sum-reality", [&] {
        const auto r = smoothed_double_sum(1, 7, 0.0, 500.0, 1e-10);
        detail::require(std::abs(r.value.imag()) < 1e-12,
                        "imag part " + format_float(r.value.imag()));
        const auto rt = smoothed_double_sum(1, 5, 0.6, 300.0, 1e-10);
        detail::require(std::abs(rt.value.imag()) < 1e-9,
                        "t0!=0 sum should still be real by m<->n symmetry");
        return "imag " + format_float(r.value.imag());
    });

    c.run("distribution/cdf-and-moments", [&] {
        eval_params params;
        for (uint64_t q : {5ull, 11ull}) {
            const auto d = build_distribution(q, 0.0, params, threads);
            detail::require(d.samples.size() == d.phi - 1, "sample count != phi-1 at t0=0");
            double prev = -1.0;
            for (double v : d.samples) {
                detail::require(v >= 0.0 && v >= prev, "samples not sorted/nonnegative");
                prev = v;
            }
            detail::require(cdf_eval(d, -1.0) == 0.0, "cdf below min nonzero");
            detail::require(std::abs(cdf_eval(d, d.samples.back()) -
                                     static_cast<double>(d.phi - 1) / d.phi) < 1e-15,
                            "cdf top != (phi-1)/phi");
            const auto seq = moments_from_distribution(d, 2);
            const auto em = empirical_moment(1, q, 0.0, params, threads);
            detail::require(std::abs(seq.moments[1] - em.value) < 1e-9,
                            "cross-module moment mismatch");
        }
        return "CDF valid, moments agree across modules";
    });

    c.run("distribution/hankel-psd", [&] {
        eval_params params;
        for (uint64_t q : full ? std::vector<uint64_t>{11, 29, 53} : std::vector<uint64_t>{11, 29}) {
            const auto d = build_distribution(q, 0.0, params, threads);
            const auto seq = moments_from_distribution(d, 8);
            const auto rep = build_hankel_report(seq, 3);
            for (unsigned k = 0; k <= 3; ++k) {
                const double scale = std::abs(seq.moments[2 * k]) + 1.0;
                detail::require(rep.min_eig[k] >= -1e-9 * scale, "Hankel not PSD");
                detail::require(rep.min_eig_star[k] >= -1e-9 * scale, "shifted Hankel not PSD");
            }
        }
        return "moment matrices PSD to noise";
    });

    return c.results;
}

} // namespace lpl
