#pragma once

// Dirichlet L-functions at s = 1 + it0 via the Hurwitz decomposition
//
//   L(s,chi)  = q^-s sum_{a=1}^{q} chi(a) zeta(s, a/q)
//   L'(s,chi) = -log q * L(s,chi) + q^-s sum_a chi(a) zeta_s(s, a/q)
//
// For non-principal chi the character sum annihilates anything independent
// of a, so zeta may be replaced by its pole-subtracted version R(s,a) =
// zeta(s,a) - 1/(s-1) with zero error.  That substitution is exact and makes
// the s = 1 evaluation (the t0 = 0 case) an ordinary function call instead
// of a limit.  The principal character keeps its pole explicitly and is
// refused at s = 1.
//
// The logarithmic derivative is computed as the direct quotient L'/L; no
// logarithm branch is ever taken.  Note the Dirichlet series identity for
// L'/L at sigma > 1 carries a minus sign in this convention:
// L'/L(s,chi) = -sum chi(n) Lambda(n) n^-s.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lpl/arith.hpp"
#include "lpl/characters.hpp"
#include "lpl/errors.hpp"
#include "lpl/hurwitz.hpp"
#include "lpl/numeric.hpp"

namespace lpl {

// Shared per-(q, s) state for evaluating every character mod q: the Hurwitz
// values do not depend on chi, so one sweep precomputes them and each
// character costs a phi(q)-term dot product.
class l_sweep {
public:
    l_sweep(const character_group& group, complex_d s, const eval_params& params)
        : group_(&group), s_(s) {
        params.validate();
        const uint64_t q = group.modulus();
        logq_ = std::log(static_cast<double>(q));
        q_pow_ = std::exp(-s * logq_); // q^-s
        hurwitz_err_ = 0.0;
        hurwitz_ds_err_ = 0.0;
        for (uint64_t a = 1; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            const hurwitz_pair hp =
                hurwitz_zeta_pair_reg(s, static_cast<double>(a) / static_cast<double>(q), params);
            units_.push_back(a);
            zeta_reg_.push_back(hp.zeta_reg.value);
            zeta_ds_reg_.push_back(hp.zeta_ds_reg.value);
            hurwitz_err_ += hp.zeta_reg.error;
            hurwitz_ds_err_ += hp.zeta_ds_reg.error;
        }
    }

    const character_group& group() const { return *group_; }
    complex_d point() const { return s_; }

    certified_complex l(const dirichlet_character& chi) const {
        auto [dot, abs_dot] = character_dot(chi, zeta_reg_);
        if (chi.is_principal()) {
            require_off_pole(s_);
            dot += static_cast<double>(group_->phi()) / (s_ - 1.0);
        }
        certified_complex out;
        out.value = q_pow_ * dot;
        out.error = std::abs(q_pow_) * (hurwitz_err_ + 4e-16 * abs_dot);
        return out;
    }

    certified_complex l_prime(const dirichlet_character& chi) const {
        const certified_complex lv = l(chi);
        auto [dot, abs_dot] = character_dot(chi, zeta_ds_reg_);
        if (chi.is_principal()) {
            require_off_pole(s_);
            dot -= static_cast<double>(group_->phi()) / ((s_ - 1.0) * (s_ - 1.0));
        }
        certified_complex out;
        out.value = -logq_ * lv.value + q_pow_ * dot;
        out.error = logq_ * lv.error + std::abs(q_pow_) * (hurwitz_ds_err_ + 4e-16 * abs_dot);
        return out;
    }

    // L'/L with propagated error; refuses to divide by a value that is
    // indistinguishable from zero at the certified accuracy.
    certified_complex log_derivative(const dirichlet_character& chi) const {
        const certified_complex lv = l(chi);
        const certified_complex lp = l_prime(chi);
        const double labs = std::abs(lv.value);
        if (labs < 100.0 * lv.error)
            throw near_zero_denominator(
                "log_derivative: |L| below 100x certified error; escalate precision");
        certified_complex out;
        out.value = lp.value / lv.value;
        out.error = (lp.error + std::abs(out.value) * lv.error) / (labs - lv.error);
        return out;
    }

private:
    // (sum_a chi(a) * w_a, sum_a |w_a|) over units a, in ascending-a order.
    std::pair<complex_d, double> character_dot(const dirichlet_character& chi,
                                               const std::vector<complex_d>& w) const {
        complex_sum acc;
        neumaier_sum abs_acc;
        for (std::size_t i = 0; i < units_.size(); ++i) {
            const character_value cv = chi.evaluate(static_cast<int64_t>(units_[i]));
            acc.add(cv.to_complex() * w[i]);
            abs_acc.add(std::abs(w[i]));
        }
        return {acc.value(), abs_acc.value()};
    }

    const character_group* group_;
    complex_d s_;
    complex_d q_pow_;
    double logq_;
    std::vector<uint64_t> units_;
    std::vector<complex_d> zeta_reg_;
    std::vector<complex_d> zeta_ds_reg_;
    double hurwitz_err_;
    double hurwitz_ds_err_;
};

inline certified_complex dirichlet_l(complex_d s, const dirichlet_character& chi,
                                     const eval_params& params) {
    return l_sweep(chi.group(), s, params).l(chi);
}

inline certified_complex dirichlet_l_prime(complex_d s, const dirichlet_character& chi,
                                           const eval_params& params) {
    return l_sweep(chi.group(), s, params).l_prime(chi);
}

inline certified_complex log_derivative(complex_d s, const dirichlet_character& chi,
                                        const eval_params& params) {
    return l_sweep(chi.group(), s, params).log_derivative(chi);
}

// ---------------------------------------------------------------------------
// Stieltjes constants: Laurent coefficients of zeta at s = 1,
//   zeta(s) = 1/(s-1) + sum_n gamma_n (s-1)^n / ... (unnormalized gamma_n here:
//   gamma_n = lim_m [ sum_{k<=m} (log k)^n/k - (log m)^{n+1}/(n+1) ].
//
// Euler-Maclaurin with a small split point m: the cancellation against
// (log m)^{n+1}/(n+1) grows with m, so m stays small and the Bernoulli tail
// does the work.  Internals in long double; certified only empirically
// (tests pin gamma_0..gamma_5 and spot-check higher n against references).
// ---------------------------------------------------------------------------

struct stieltjes_table {
    unsigned count = 0;
    std::vector<double> values; // gamma_0 .. gamma_{count-1}

    // gamma(-1) = 1 by the convention used in the E_n recursion
    double gamma(int n) const {
        if (n == -1) return 1.0;
        return values.at(static_cast<std::size_t>(n));
    }
};

namespace detail {

inline long double powl_int(long double x, unsigned n) {
    long double r = 1.0L;
    for (unsigned i = 0; i < n; ++i) r *= x;
    return r;
}

inline const bernoulli_table& stieltjes_bernoulli() {
    static const bernoulli_table t = build_bernoulli_table(40);
    return t;
}

} // namespace detail

inline stieltjes_table build_stieltjes_table(unsigned count) {
    if (count < 1) throw std::invalid_argument("stieltjes: count must be >= 1");
    if (count > 20)
        throw std::invalid_argument("stieltjes: count > 20 exceeds double-precision reach");

    const long split = 16;
    const bernoulli_table& bern = detail::stieltjes_bernoulli();
    stieltjes_table out;
    out.count = count;

    const long double logm = std::log(static_cast<long double>(split));
    for (unsigned n = 0; n < count; ++n) {
        long double acc = 0.0L;
        for (long k = 1; k < split; ++k) {
            const long double lk = std::log(static_cast<long double>(k));
            acc += detail::powl_int(lk, n) / k;
        }
        const long double fm = detail::powl_int(logm, n) / split;
        acc += 0.5L * fm;
        acc -= detail::powl_int(logm, n + 1) / (n + 1);

        // f^(r)(x) = x^-(r+1) P_r(log x), P_0 = u^n, P_{r+1} = P_r' - (r+1) P_r
        std::vector<long double> poly(n + 1, 0.0L);
        poly[n] = 1.0L;
        long double m_pow = static_cast<long double>(split); // m^(r+1) at r = 0
        unsigned r = 0;
        long double prev_term = INFINITY;
        for (unsigned j = 1; j <= 40; ++j) {
            while (r < 2 * j - 1) {
                std::vector<long double> next(n + 1, 0.0L);
                for (unsigned i = 0; i + 1 <= n; ++i) next[i] += (i + 1) * poly[i + 1];
                for (unsigned i = 0; i <= n; ++i) next[i] -= (r + 1) * poly[i];
                poly = std::move(next);
                m_pow *= split;
                ++r;
            }
            if (j > bern.count) break;
            long double pv = 0.0L;
            for (unsigned i = n + 1; i-- > 0;) pv = pv * logm + poly[i];
            const long double b2j = bern.exact[j - 1].convert_to<long double>();
            long double fact = 1.0L;
            for (unsigned i = 2; i <= 2 * j; ++i) fact *= i;
            const long double term = b2j / fact * (pv / m_pow);
            if (std::abs(term) > prev_term) break; // divergence onset; stop at the smallest term
            acc -= term;
            prev_term = std::abs(term);
            if (prev_term < 1e-24L * std::max(std::abs(acc), 1.0L)) break;
        }
        out.values.push_back(static_cast<double>(acc));
    }
    return out;
}

// E_n coefficients of (s-1) zeta'/zeta(s) = sum E_n (s-1)^n:
//   E_0 = -1,  E_n = (n-1) a_{n-1} - sum_{k=1}^{n} a_{k-1} E_{n-k},  a_{-1} = 1,
// where a_n are the Laurent coefficients of zeta at 1 written as plain Taylor
// coefficients of the regular part: zeta(s) = 1/(s-1) + sum a_n (s-1)^n.
// They relate to the Stieltjes constants by a_n = (-1)^n gamma_n / n!
// (gamma_n being the limit-definition constants build_stieltjes_table
// returns); feeding gamma_n in directly would produce the wrong E_2.
struct e_coefficient_table {
    std::vector<double> values; // E_0 .. E_N
};

inline e_coefficient_table build_e_coefficients(unsigned n_max) {
    if (n_max > 15)
        throw std::invalid_argument("e_coefficients: N > 15 exceeds stieltjes accuracy");
    const stieltjes_table st = build_stieltjes_table(std::max(1u, n_max));
    auto laurent = [&](int n) -> double {
        if (n == -1) return 1.0;
        double fact = 1.0;
        for (int i = 2; i <= n; ++i) fact *= i;
        return (n % 2 ? -1.0 : 1.0) * st.gamma(n) / fact;
    };
    e_coefficient_table t;
    t.values.assign(n_max + 1, 0.0);
    t.values[0] = -1.0;
    for (unsigned n = 1; n <= n_max; ++n) {
        double e = (static_cast<double>(n) - 1.0) * laurent(static_cast<int>(n) - 1);
        for (unsigned k = 1; k <= n; ++k)
            e -= laurent(static_cast<int>(k) - 1) * t.values[n - k];
        t.values[n] = e;
    }
    return t;
}

} // namespace lpl
