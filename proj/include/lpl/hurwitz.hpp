#pragma once

// Hurwitz zeta and its s-derivative by Euler-Maclaurin summation.
//
//   zeta(s,a) = sum_{n<N} (n+a)^-s  +  (N+a)^(1-s)/(s-1)  +  (N+a)^-s / 2
//             + sum_{j=1}^{J} B_2j/(2j)! (s)_{2j-1} (N+a)^(-s-2j+1)  +  R_J
//
// with (s)_m the rising factorial.  The remainder obeys the classical bound
//   |R_J| <= |B_{2J+2}/(2J+2)! (s)_{2J+1} (N+a)^(-s-2J-1)| * |s+2J+1|/(sigma+2J+1),
// i.e. first-omitted-term times an explicit factor, which is what we certify
// against target_eps.  N is chosen adaptively as the smallest split point
// whose certified remainder is below target_eps/4.
//
// Everything is also available in pole-subtracted ("regularized") form
//   R(s,a)  = zeta(s,a)  - 1/(s-1)          (entire in s)
//   R'(s,a) = zeta_s(s,a) + 1/(s-1)^2
// evaluated stably through (e^w - 1)/w series near s = 1.  The regularized
// form is what L-function sweeps over non-principal characters consume:
// orthogonality kills the character-independent pole exactly, so the
// subtraction loses nothing and t0 = 0 needs no special casing upstream.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "lpl/arith.hpp"
#include "lpl/errors.hpp"
#include "lpl/numeric.hpp"

namespace lpl {

using complex_d = std::complex<double>;

struct eval_params {
    int shift = 50;           // minimum Euler-Maclaurin split point N
    int bernoulli_terms = 15; // J
    double target_eps = 1e-13;

    void validate() const {
        if (shift < 10) throw std::invalid_argument("eval_params: shift must be >= 10");
        if (bernoulli_terms < 1 || bernoulli_terms > 25)
            throw std::invalid_argument("eval_params: bernoulli_terms must be in [1,25]");
        if (target_eps < 1e-13)
            throw std::invalid_argument("eval_params: target_eps must be >= 1e-13");
    }
};

// Value plus a certified absolute error bound.
struct certified_complex {
    complex_d value{0.0, 0.0};
    double error = 0.0;
};

// Regularized zeta and its s-derivative, computed together (they share all
// the expensive powers).
struct hurwitz_pair {
    certified_complex zeta_reg;    // zeta(s,a) - 1/(s-1)
    certified_complex zeta_ds_reg; // zeta_s(s,a) + 1/(s-1)^2
};

namespace detail {

inline const bernoulli_table& em_bernoulli() {
    static const bernoulli_table t = build_bernoulli_table(30);
    return t;
}

// g(w) = (e^w - 1)/w and g'(w), stable at w = 0.
inline complex_d expm1_over(complex_d w) {
    if (std::abs(w) < 0.5) {
        complex_d term{1.0, 0.0}, acc{1.0, 0.0};
        for (int k = 1; k < 24; ++k) {
            term *= w / static_cast<double>(k + 1);
            acc += term;
            if (std::abs(term) < 1e-20 * std::abs(acc)) break;
        }
        return acc;
    }
    return (std::exp(w) - 1.0) / w;
}

inline complex_d expm1_over_deriv(complex_d w) {
    if (std::abs(w) < 0.5) {
        // sum_{m>=0} (m+1) w^m / (m+2)!
        complex_d acc{0.5, 0.0};
        complex_d wpow{1.0, 0.0};
        double fact = 2.0; // (m+2)!
        for (int m = 1; m < 24; ++m) {
            wpow *= w;
            fact *= (m + 2);
            const complex_d term = wpow * (static_cast<double>(m + 1) / fact);
            acc += term;
            if (std::abs(term) < 1e-20 * std::abs(acc)) break;
        }
        return acc;
    }
    return (std::exp(w) * (w - 1.0) + 1.0) / (w * w);
}

// Certified bound on |R_J| for split point N, plus the blow-up factor that
// converts it into a derivative-remainder bound.
inline double em_remainder_bound(complex_d s, double a, long n_split, int j_terms) {
    const int twoJ2 = 2 * j_terms + 2;
    const double sigma = s.real();
    if (sigma + twoJ2 - 1 <= 0.0) return INFINITY;
    const double p = n_split + a;
    double log_poch = 0.0;
    for (int i = 0; i <= 2 * j_terms; ++i) log_poch += std::log(std::abs(s + static_cast<double>(i)));
    const double log_b = std::log(std::abs(em_bernoulli().b2j(j_terms + 1))) - std::lgamma(twoJ2 + 1.0);
    const double log_term = log_b + log_poch - (sigma + 2 * j_terms + 1) * std::log(p);
    const double factor = std::abs(s + static_cast<double>(2 * j_terms + 1)) / (sigma + 2 * j_terms + 1);
    return std::exp(log_term) * factor;
}

inline long choose_split(complex_d s, double a, const eval_params& params) {
    long n = std::max<long>(params.shift, static_cast<long>(2.0 * std::abs(s)) + 10);
    const double want = params.target_eps / 4.0;
    while (n <= 2'000'000) {
        if (em_remainder_bound(s, a, n, params.bernoulli_terms) <= want) return n;
        n = n + n / 4 + 10;
    }
    throw non_convergence("hurwitz: no split point certifies target_eps within budget");
}

} // namespace detail

inline hurwitz_pair hurwitz_zeta_pair_reg(complex_d s, double a, const eval_params& params) {
    params.validate();
    if (!(a > 0.0) || a > 1.0)
        throw std::invalid_argument("hurwitz: a must lie in (0,1]");

    const long n_split = detail::choose_split(s, a, params);
    const int j_terms = params.bernoulli_terms;
    const bernoulli_table& bern = detail::em_bernoulli();

    complex_sum val, dval;
    neumaier_sum abs_val, abs_dval; // magnitudes, for the roundoff estimate

    // main block: sum (n+a)^-s and its derivative
    for (long n = 0; n < n_split; ++n) {
        const double lg = std::log(n + a);
        const complex_d t = std::exp(-s * lg);
        val.add(t);
        dval.add(-lg * t);
        abs_val.add(std::abs(t));
        abs_dval.add(std::abs(lg) * std::abs(t));
    }

    const double p = n_split + a;
    const double lp = std::log(p);
    const complex_d h = s - 1.0;
    const complex_d w = -h * lp;

    // (P^(1-s) - 1)/(s-1) = -lp * g(w);  d/ds of it = lp^2 * g'(w)
    {
        const complex_d t = -lp * detail::expm1_over(w);
        const complex_d dt = lp * lp * detail::expm1_over_deriv(w);
        val.add(t);
        dval.add(dt);
        abs_val.add(std::abs(t));
        abs_dval.add(std::abs(dt));
    }

    const complex_d p_ms = std::exp(-s * lp); // P^-s
    val.add(0.5 * p_ms);
    dval.add(-0.5 * lp * p_ms);
    abs_val.add(0.5 * std::abs(p_ms));
    abs_dval.add(0.5 * lp * std::abs(p_ms));

    // Bernoulli corrections
    complex_d poch = s;              // (s)_1
    complex_d poch_hsum = 1.0 / s;   // sum 1/(s+i), i = 0..2j-2
    complex_d p_pow = p_ms / p;      // P^(-s-2j+1) at j = 1
    for (int j = 1; j <= j_terms; ++j) {
        const double coeff = bern.b2j(j) / std::tgamma(2.0 * j + 1.0);
        const complex_d t = coeff * poch * p_pow;
        const complex_d dt = coeff * p_pow * (poch * poch_hsum - poch * lp);
        val.add(t);
        dval.add(dt);
        abs_val.add(std::abs(t));
        abs_dval.add(std::abs(dt));
        if (j < j_terms) {
            const complex_d s1 = s + static_cast<double>(2 * j - 1);
            const complex_d s2 = s + static_cast<double>(2 * j);
            poch *= s1 * s2;
            poch_hsum += 1.0 / s1 + 1.0 / s2;
            p_pow /= p * p;
        }
    }

    const double rem = detail::em_remainder_bound(s, a, n_split, j_terms);
    // derivative remainder: omitted terms pick up a factor log P + sum 1/|s+i|
    double dfactor = lp;
    for (int i = 0; i <= 2 * j_terms + 1; ++i) dfactor += 1.0 / std::abs(s + static_cast<double>(i));

    hurwitz_pair out;
    out.zeta_reg.value = val.value();
    out.zeta_reg.error = rem + 4e-16 * abs_val.value();
    out.zeta_ds_reg.value = dval.value();
    out.zeta_ds_reg.error = rem * dfactor + 4e-16 * abs_dval.value();
    return out;
}

inline certified_complex hurwitz_zeta_reg(complex_d s, double a, const eval_params& params) {
    return hurwitz_zeta_pair_reg(s, a, params).zeta_reg;
}

inline certified_complex hurwitz_zeta_ds_reg(complex_d s, double a, const eval_params& params) {
    return hurwitz_zeta_pair_reg(s, a, params).zeta_ds_reg;
}

inline void require_off_pole(complex_d s) {
    if (std::abs(s - 1.0) < 1e-12)
        throw pole_at_one("hurwitz: s within 1e-12 of the pole at s = 1");
}

inline certified_complex hurwitz_zeta(complex_d s, double a, const eval_params& params) {
    require_off_pole(s);
    certified_complex r = hurwitz_zeta_reg(s, a, params);
    r.value += 1.0 / (s - 1.0);
    return r;
}

inline certified_complex hurwitz_zeta_ds(complex_d s, double a, const eval_params& params) {
    require_off_pole(s);
    certified_complex r = hurwitz_zeta_ds_reg(s, a, params);
    r.value -= 1.0 / ((s - 1.0) * (s - 1.0));
    return r;
}

} // namespace lpl
