#pragma once

// The empirical distribution of |L'/L(1+it0,chi)|^2 over characters mod q,
// and the Stieltjes moment-problem checks applied to its moment sequence.
//
// CDF convention follows the distribution-function definition literally:
// jumps of 1/phi(q) at each sample, the principal character excluded from
// the count at t0 = 0 while phi(q) stays the normalizer, so the CDF tops out
// at (phi(q)-1)/phi(q) there, not 1.
//
// Hankel positivity is a statement about positive semidefiniteness, so the
// determinants Delta_k = |m_{i+j}| and Delta*_k = |m_{i+j+1}| come from an
// eigendecomposition of the symmetric Hankel matrices, with a
// condition-number-aware noise floor instead of trusting the sign of a tiny
// floating-point determinant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpl/moments.hpp"

namespace lpl {

struct empirical_distribution {
    uint64_t q = 0;
    double t0 = 0.0;
    uint64_t phi = 0;
    bool excluded_principal = false;
    std::vector<double> samples; // sorted ascending, weight 1/phi each
};

inline empirical_distribution build_distribution(uint64_t q, double t0,
                                                 const eval_params& params,
                                                 unsigned threads = 1) {
    if (q < 3) throw std::invalid_argument("build_distribution: q must be >= 3");
    const bool exclude_principal = (t0 == 0.0);
    const character_group group(q);
    std::vector<double> sq, sq_err;
    detail::sweep_log_derivatives(group, t0, params, !exclude_principal, threads, sq, sq_err);

    empirical_distribution d;
    d.q = q;
    d.t0 = t0;
    d.phi = group.phi();
    d.excluded_principal = exclude_principal;
    d.samples.assign(sq.begin() + (exclude_principal ? 1 : 0), sq.end());
    std::sort(d.samples.begin(), d.samples.end());
    return d;
}

// D_q(v, t0): right-continuous step function, jumps 1/phi(q).
inline double cdf_eval(const empirical_distribution& d, double v) {
    const auto it = std::upper_bound(d.samples.begin(), d.samples.end(), v);
    return static_cast<double>(it - d.samples.begin()) / static_cast<double>(d.phi);
}

struct moment_sequence {
    std::string source;          // "empirical q=... t0=..." or "main-term ..."
    std::vector<double> moments; // m_0 .. m_K
};

inline moment_sequence moments_from_distribution(const empirical_distribution& d, unsigned k_max) {
    moment_sequence seq;
    seq.source = "empirical q=" + std::to_string(d.q) + " t0=" + std::to_string(d.t0);
    const double norm = static_cast<double>(d.phi);
    for (unsigned k = 0; k <= k_max; ++k) {
        neumaier_sum acc;
        for (double s : d.samples) acc.add(detail::pow_uint(s, k));
        seq.moments.push_back(acc.value() / norm);
    }
    return seq;
}

// Truncated limit sequence M_0..M_K (M_0 = 1: the k = 0 convolution is the
// convolution identity, concentrated at m = 1).
inline moment_sequence main_term_moment_sequence(unsigned k_max, uint64_t m_trunc,
                                                 uint64_t q, bool restricted,
                                                 uint64_t budget = default_table_budget) {
    moment_sequence seq;
    seq.source = restricted ? "main-term q=" + std::to_string(q) : "main-term unrestricted";
    seq.moments.push_back(1.0);
    for (unsigned k = 1; k <= k_max; ++k)
        seq.moments.push_back(main_term(k, q, m_trunc, restricted, budget).value);
    return seq;
}

namespace detail {

// Cyclic Jacobi eigenvalues of a small symmetric matrix (row-major, n x n).
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t r = p + 1; r < n; ++r) off += a[p * n + r] * a[p * n + r];
        if (off < 1e-300) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const double apq = a[p * n + r];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[r * n + r];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i * n + p];
                    const double aiq = a[i * n + r];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + r] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p * n + i];
                    const double aqi = a[r * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[r * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

struct hankel_eigen {
    double det = 0.0;
    double min_eig = 0.0;
    double noise_floor = 0.0;
    bool singular = false;
};

inline hankel_eigen analyze_hankel(const std::vector<double>& moments, unsigned k,
                                   unsigned offset) {
    const std::size_t n = k + 1;
    std::vector<double> h(n * n);
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            h[i * n + j] = moments.at(i + j + offset);
            frob += h[i * n + j] * h[i * n + j];
        }
    frob = std::sqrt(frob);
    const std::vector<double> eig = symmetric_eigenvalues(std::move(h), n);

    hankel_eigen out;
    out.det = 1.0;
    for (double e : eig) out.det *= e;
    out.min_eig = eig.front();
    double min_abs = INFINITY;
    for (double e : eig) min_abs = std::min(min_abs, std::abs(e));
    // product of all but one copy of the smallest magnitude: the noise floor
    // scales like a perturbation along the most fragile eigendirection
    double prod_rest = 1.0;
    bool skipped = false;
    for (double e : eig) {
        if (!skipped && std::abs(e) == min_abs) {
            skipped = true;
            continue;
        }
        prod_rest *= std::abs(e);
    }
    out.noise_floor = static_cast<double>(n) * 2.3e-16 * frob * prod_rest;
    out.singular = std::abs(out.det) < out.noise_floor;
    return out;
}

} // namespace detail

struct hankel_report {
    unsigned k_max = 0;
    std::vector<double> delta;           // Delta_0 .. Delta_K
    std::vector<double> delta_star;      // Delta*_0 .. Delta*_K
    std::vector<double> min_eig;         // smallest eigenvalue per Delta_k matrix
    std::vector<double> min_eig_star;
    std::vector<bool> singular;          // |det| below its noise floor
    std::vector<bool> singular_star;
    std::vector<double> noise_floor;
    std::vector<double> noise_floor_star;
    std::vector<double> carleman_partial; // sum_{j<=k} m_j^(-1/(2j)), k = 1..K
    std::vector<double> factorial_ratio;  // m_k / (2k)!, k = 0..K
};

inline hankel_report build_hankel_report(const moment_sequence& seq, unsigned k_max) {
    if (seq.moments.size() < 2 * k_max + 2)
        throw std::invalid_argument("hankel_report: need at least 2K+2 moments");
    hankel_report rep;
    rep.k_max = k_max;
    for (unsigned k = 0; k <= k_max; ++k) {
        const auto h = detail::analyze_hankel(seq.moments, k, 0);
        const auto hs = detail::analyze_hankel(seq.moments, k, 1);
        rep.delta.push_back(h.det);
        rep.min_eig.push_back(h.min_eig);
        rep.singular.push_back(h.singular);
        rep.noise_floor.push_back(h.noise_floor);
        rep.delta_star.push_back(hs.det);
        rep.min_eig_star.push_back(hs.min_eig);
        rep.singular_star.push_back(hs.singular);
        rep.noise_floor_star.push_back(hs.noise_floor);
    }
    neumaier_sum carleman;
    for (unsigned k = 1; k <= k_max; ++k) {
        carleman.add(std::pow(seq.moments[k], -1.0 / (2.0 * k)));
        rep.carleman_partial.push_back(carleman.value());
    }
    double fact = 1.0; // (2k)!
    for (unsigned k = 0; k <= k_max; ++k) {
        if (k > 0) fact *= (2.0 * k - 1.0) * (2.0 * k);
        rep.factorial_ratio.push_back(seq.moments[k] / fact);
    }
    return rep;
}

// sup_v |D_a(v) - D_b(v)| between two step CDFs; the sup is attained at a
// breakpoint or its left limit, so scanning the merged sample set suffices.
inline double kolmogorov_distance(const empirical_distribution& a,
                                  const empirical_distribution& b) {
    std::vector<double> pts;
    pts.reserve(a.samples.size() + b.samples.size());
    pts.insert(pts.end(), a.samples.begin(), a.samples.end());
    pts.insert(pts.end(), b.samples.begin(), b.samples.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto left_count = [](const empirical_distribution& d, double v) {
        return static_cast<double>(std::lower_bound(d.samples.begin(), d.samples.end(), v) -
                                   d.samples.begin()) /
               static_cast<double>(d.phi);
    };
    double best = 0.0;
    for (double v : pts) {
        best = std::max(best, std::abs(cdf_eval(a, v) - cdf_eval(b, v)));
        best = std::max(best, std::abs(left_count(a, v) - left_count(b, v)));
    }
    return best;
}

// Step-function breakpoints (v, D_q(v)) for plotting; one row per sample.
struct plot_point {
    uint64_t q;
    double v;
    double cdf;
};

inline std::vector<plot_point> export_plot_data(const std::vector<empirical_distribution>& dists,
                                                double v_max = INFINITY) {
    std::vector<plot_point> rows;
    for (const auto& d : dists) {
        for (std::size_t i = 0; i < d.samples.size(); ++i) {
            if (d.samples[i] > v_max) break;
            rows.push_back({d.q, d.samples[i],
                            static_cast<double>(i + 1) / static_cast<double>(d.phi)});
        }
    }
    return rows;
}

} // namespace lpl
