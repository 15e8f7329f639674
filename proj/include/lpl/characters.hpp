#pragma once

// Dirichlet characters mod q as exact roots of unity.
//
// (Z/qZ)^x is decomposed by CRT into cyclic pieces: one generator per odd
// prime power, the pair (-1, 5) for 2^e with e >= 3.  A character is an
// exponent vector against those fixed generators; evaluation is a discrete
// log lookup per component plus exact rational phase arithmetic, so chi(n)
// is a root of unity with an exactly known phase numerator/denominator.
//
// Character indexing contract: characters are ordered lexicographically by
// exponent vector (first generator most significant); index 0 is principal.

#include <cstdint>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lpl/arith.hpp"

namespace lpl {

// e^{2 pi i num/den} with 0 <= num < den.
struct unit_root {
    uint64_t num = 0;
    uint64_t den = 1;

    std::complex<double> to_complex() const {
        const double theta =
            2.0 * std::numbers::pi * (static_cast<double>(num) / static_cast<double>(den));
        return {std::cos(theta), std::sin(theta)};
    }
};

// chi(n): either exactly zero (n not coprime to q) or an exact root of unity.
struct character_value {
    bool zero = true;
    unit_root root;

    std::complex<double> to_complex() const {
        return zero ? std::complex<double>{0.0, 0.0} : root.to_complex();
    }
};

namespace detail {

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Smallest primitive root mod an odd prime p.
inline uint64_t primitive_root_mod_prime(uint64_t p) {
    const factored_integer f = factorize(p - 1);
    for (uint64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (const auto& pp : f.factors) {
            if (powmod(g, (p - 1) / pp.prime, p) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root found"); // unreachable for prime p
}

// Smallest primitive root mod p^e (p odd).  A primitive root g mod p works
// for all e unless g^(p-1) = 1 mod p^2, in which case g + p does.
inline uint64_t primitive_root_mod_prime_power(uint64_t p, unsigned e) {
    uint64_t g = primitive_root_mod_prime(p);
    if (e == 1) return g;
    if (powmod(g, p - 1, p * p) == 1) g += p;
    return g;
}

} // namespace detail

class character_group;

class dirichlet_character {
public:
    dirichlet_character(const character_group& group, std::vector<uint32_t> exponents);

    const character_group& group() const { return *group_; }
    const std::vector<uint32_t>& exponents() const { return exponents_; }

    bool is_principal() const {
        for (uint32_t e : exponents_) if (e != 0) return false;
        return true;
    }

    character_value evaluate(int64_t n) const;
    std::complex<double> value(int64_t n) const { return evaluate(n).to_complex(); }

    dirichlet_character conjugate() const;
    std::size_t index() const;

private:
    const character_group* group_;
    std::vector<uint32_t> exponents_;
};

class character_group {
public:
    struct component {
        uint64_t prime_power;              // p^e
        std::vector<uint64_t> generators;  // empty for 2^1
        std::vector<uint64_t> orders;
        std::vector<int32_t> dlog;         // dlog[x*r + j], -1 on non-units
    };

    explicit character_group(uint64_t q) : q_(q) {
        if (q < 2) throw std::invalid_argument("character_group: q must be >= 2");
        const factored_integer f = factorize(q);
        phi_ = euler_phi(f);
        for (const auto& [p, e] : f.factors) {
            uint64_t pe = 1;
            for (unsigned i = 0; i < e; ++i) pe *= p;
            components_.push_back(make_component(p, e, pe));
        }
        for (const auto& c : components_)
            for (uint64_t o : c.orders) orders_.push_back(o);
        exponent_ = 1;
        for (uint64_t o : orders_) exponent_ = std::lcm(exponent_, o);
    }

    uint64_t modulus() const { return q_; }
    uint64_t phi() const { return phi_; }
    std::size_t size() const { return phi_; }               // number of characters
    const std::vector<component>& components() const { return components_; }
    const std::vector<uint64_t>& generator_orders() const { return orders_; }
    uint64_t group_exponent() const { return exponent_; }

    bool is_unit(int64_t n) const { return std::gcd(reduce(n), q_) == 1; }

    // Flattened discrete log of n against all generators; n must be a unit.
    std::vector<uint32_t> discrete_log(int64_t n) const {
        const uint64_t r = reduce(n);
        std::vector<uint32_t> out;
        out.reserve(orders_.size());
        for (const auto& c : components_) {
            const std::size_t rank = c.generators.size();
            if (rank == 0) continue;
            const uint64_t x = r % c.prime_power;
            for (std::size_t j = 0; j < rank; ++j) {
                const int32_t d = c.dlog[x * rank + j];
                if (d < 0) throw std::invalid_argument("discrete_log: n not a unit mod q");
                out.push_back(static_cast<uint32_t>(d));
            }
        }
        return out;
    }

    dirichlet_character principal_character() const {
        return {*this, std::vector<uint32_t>(orders_.size(), 0)};
    }

    // Lexicographic index -> exponent vector (first generator most significant).
    dirichlet_character character_at(std::size_t index) const {
        if (index >= phi_) throw std::out_of_range("character_at: index >= phi(q)");
        std::vector<uint32_t> e(orders_.size(), 0);
        for (std::size_t j = orders_.size(); j-- > 0;) {
            e[j] = static_cast<uint32_t>(index % orders_[j]);
            index /= orders_[j];
        }
        return {*this, std::move(e)};
    }

    std::size_t index_of(const std::vector<uint32_t>& exponents) const {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < orders_.size(); ++j)
            idx = idx * orders_[j] + exponents[j];
        return idx;
    }

private:
    friend class dirichlet_character;

    uint64_t reduce(int64_t n) const {
        int64_t m = n % static_cast<int64_t>(q_);
        if (m < 0) m += static_cast<int64_t>(q_);
        return static_cast<uint64_t>(m);
    }

    static component make_component(uint64_t p, unsigned e, uint64_t pe) {
        component c;
        c.prime_power = pe;
        if (p == 2) {
            if (e == 1) {
                // trivial group
            } else if (e == 2) {
                c.generators = {3};
                c.orders = {2};
            } else {
                c.generators = {pe - 1, 5};
                c.orders = {2, pe / 4};
            }
        } else {
            c.generators = {detail::primitive_root_mod_prime_power(p, e)};
            c.orders = {(p - 1) * (pe / p)};
        }
        const std::size_t rank = c.generators.size();
        if (rank == 0) return c;
        c.dlog.assign(pe * rank, -1);
        if (rank == 1) {
            uint64_t x = 1;
            for (uint64_t t = 0; t < c.orders[0]; ++t) {
                c.dlog[x] = static_cast<int32_t>(t);
                x = detail::mulmod(x, c.generators[0], pe);
            }
        } else {
            uint64_t xa = 1;
            for (uint64_t a = 0; a < c.orders[0]; ++a) {
                uint64_t x = xa;
                for (uint64_t b = 0; b < c.orders[1]; ++b) {
                    c.dlog[x * 2] = static_cast<int32_t>(a);
                    c.dlog[x * 2 + 1] = static_cast<int32_t>(b);
                    x = detail::mulmod(x, c.generators[1], pe);
                }
                xa = detail::mulmod(xa, c.generators[0], pe);
            }
        }
        return c;
    }

    uint64_t q_;
    uint64_t phi_;
    std::vector<component> components_;
    std::vector<uint64_t> orders_;
    uint64_t exponent_;
};

inline dirichlet_character::dirichlet_character(const character_group& group,
                                                std::vector<uint32_t> exponents)
    : group_(&group), exponents_(std::move(exponents)) {
    const auto& orders = group.generator_orders();
    if (exponents_.size() != orders.size())
        throw std::invalid_argument("dirichlet_character: exponent vector rank mismatch");
    for (std::size_t j = 0; j < orders.size(); ++j)
        if (exponents_[j] >= orders[j])
            throw std::invalid_argument("dirichlet_character: exponent out of range");
}

inline character_value dirichlet_character::evaluate(int64_t n) const {
    const character_group& g = *group_;
    const uint64_t r = g.reduce(n);
    if (std::gcd(r, g.modulus()) != 1) return character_value{};

    // phase = sum_j exponents[j] * dlog_j(n) / order_j  (mod 1), over the
    // common denominator N = lcm of orders.
    const uint64_t N = g.group_exponent();
    uint64_t num = 0;
    std::size_t idx = 0;
    for (const auto& c : g.components()) {
        const std::size_t rank = c.generators.size();
        if (rank == 0) continue;
        const uint64_t x = r % c.prime_power;
        for (std::size_t j = 0; j < rank; ++j, ++idx) {
            const uint64_t d = static_cast<uint64_t>(c.dlog[x * rank + j]);
            num = (num + exponents_[idx] % c.orders[j] * d % c.orders[j] * (N / c.orders[j])) % N;
        }
    }
    character_value v;
    v.zero = false;
    v.root = {num, N};
    return v;
}

inline dirichlet_character dirichlet_character::conjugate() const {
    const auto& orders = group_->generator_orders();
    std::vector<uint32_t> e(exponents_.size());
    for (std::size_t j = 0; j < e.size(); ++j)
        e[j] = exponents_[j] == 0 ? 0 : static_cast<uint32_t>(orders[j] - exponents_[j]);
    return {*group_, std::move(e)};
}

inline std::size_t dirichlet_character::index() const { return group_->index_of(exponents_); }

inline std::vector<dirichlet_character> all_characters(const character_group& g) {
    std::vector<dirichlet_character> out;
    out.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.push_back(g.character_at(i));
    return out;
}

} // namespace lpl
