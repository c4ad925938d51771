#pragma once

#include "error.hpp"
#include "rational.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <vector>

namespace periodcalc {

// Dirichlet characters with exact root-of-unity values (stored as rational
// angles) and their Gauss sums.  This is the only module that touches
// floating point; everything is summed directly from the definition.

namespace detail {

struct UnitFactor {
    long long prime_power = 1; // p^e
    std::vector<long long> generators;
    std::vector<long long> orders;
    std::map<long long, std::vector<long long>> dlog; // unit residue -> exponent per generator
};

inline long long pow_mod(long long base, long long exp, long long mod)
{
    long long r = 1 % mod;
    base %= mod;
    for (; exp > 0; exp >>= 1) {
        if (exp & 1)
            r = r * base % mod;
        base = base * base % mod;
    }
    return r;
}

inline long long multiplicative_order(long long a, long long mod)
{
    long long r = a % mod, k = 1;
    while (r != 1) {
        r = r * a % mod;
        ++k;
        require(k <= mod, "order computation diverged");
    }
    return k;
}

inline UnitFactor make_unit_factor(long long p, int e)
{
    UnitFactor f;
    f.prime_power = 1;
    for (int i = 0; i < e; ++i)
        f.prime_power *= p;
    const long long q = f.prime_power;
    long long phi = q / p * (p - 1);
    if (p == 2) {
        if (e == 1) {
            // trivial unit group
        } else if (e == 2) {
            f.generators = {3};
            f.orders = {2};
        } else {
            f.generators = {q - 1, 5};
            f.orders = {2, phi / 2};
        }
    } else {
        // smallest primitive root mod p^e
        for (long long g = 2; g < q; ++g) {
            if (std::gcd(g, q) != 1)
                continue;
            if (multiplicative_order(g, q) == phi) {
                f.generators = {g};
                f.orders = {phi};
                break;
            }
        }
        require(!f.generators.empty(), "no primitive root found (not a prime power?)");
    }
    // discrete logs by enumeration over the generator lattice
    std::vector<long long> idx(f.generators.size(), 0);
    for (;;) {
        long long v = 1;
        for (std::size_t i = 0; i < f.generators.size(); ++i)
            v = v * pow_mod(f.generators[i], idx[i], q) % q;
        if (f.dlog.find(v) == f.dlog.end())
            f.dlog[v] = idx;
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < f.orders[i])
                break;
            idx[i] = 0;
        }
        if (i == idx.size())
            break;
        if (f.generators.empty())
            break;
    }
    if (f.generators.empty())
        f.dlog[1 % q] = {};
    return f;
}

} // namespace detail

// The abelian group (Z/f)^* with generator decomposition; shared by all
// characters of the modulus.
class DirichletGroup {
public:
    explicit DirichletGroup(long long modulus) : modulus_(modulus)
    {
        require(modulus >= 1, "modulus must be positive");
        long long rest = modulus;
        for (long long p = 2; p * p <= rest; ++p) {
            if (rest % p != 0)
                continue;
            int e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            factors_.push_back(detail::make_unit_factor(p, e));
        }
        if (rest > 1)
            factors_.push_back(detail::make_unit_factor(rest, 1));
        for (const auto& f : factors_)
            for (auto o : f.orders)
                orders_.push_back(o);
    }

    long long modulus() const { return modulus_; }
    const std::vector<long long>& component_orders() const { return orders_; }

    long long character_count() const
    {
        long long c = 1;
        for (auto o : orders_)
            c *= o;
        return c;
    }

    // Exponents of a unit with respect to the full generator list.
    std::optional<std::vector<long long>> dlog(long long a) const
    {
        a %= modulus_;
        if (a < 0)
            a += modulus_;
        if (std::gcd(a, modulus_) != 1)
            return std::nullopt;
        std::vector<long long> out;
        for (const auto& f : factors_) {
            auto it = f.dlog.find(a % f.prime_power);
            require(it != f.dlog.end(), "unit missing from dlog table");
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
        return out;
    }

private:
    long long modulus_;
    std::vector<detail::UnitFactor> factors_;
    std::vector<long long> orders_;
};

class DirichletCharacter {
public:
    DirichletCharacter(const DirichletGroup* group, std::vector<long long> exponents)
        : group_(group), exponents_(std::move(exponents))
    {
        require(exponents_.size() == group_->component_orders().size(),
                "character exponent tuple has wrong length");
    }

    long long modulus() const { return group_->modulus(); }

    // chi(a) as an exact angle in [0,1); nullopt when gcd(a, f) > 1.
    std::optional<Rational> value_angle(long long a) const
    {
        auto d = group_->dlog(a);
        if (!d)
            return std::nullopt;
        Rational angle(0);
        for (std::size_t i = 0; i < d->size(); ++i) {
            long long ord = group_->component_orders()[i];
            long long num = exponents_[i] * (*d)[i] % ord;
            angle += Rational(num, ord);
        }
        angle -= floor_rat(angle);
        return angle;
    }

    std::complex<double> value(long long a) const
    {
        auto angle = value_angle(a);
        if (!angle)
            return {0.0, 0.0};
        double t = 2.0 * M_PI * static_cast<double>(angle->numerator()) / static_cast<double>(angle->denominator());
        return {std::cos(t), std::sin(t)};
    }

    bool is_trivial() const
    {
        for (std::size_t i = 0; i < exponents_.size(); ++i)
            if (exponents_[i] % group_->component_orders()[i] != 0)
                return false;
        return true;
    }

    DirichletCharacter conjugate() const
    {
        std::vector<long long> ex = exponents_;
        for (std::size_t i = 0; i < ex.size(); ++i)
            ex[i] = (group_->component_orders()[i] - ex[i] % group_->component_orders()[i]) %
                    group_->component_orders()[i];
        return DirichletCharacter(group_, std::move(ex));
    }

    // Smallest d | f with chi trivial on units congruent to 1 mod d.
    long long conductor() const
    {
        const long long f = modulus();
        for (long long d = 1; d <= f; ++d) {
            if (f % d != 0)
                continue;
            bool ok = true;
            for (long long a = 1; a <= f && ok; ++a) {
                if (std::gcd(a, f) != 1 || a % d != 1 % d)
                    continue;
                auto angle = value_angle(a);
                if (angle && *angle != Rational(0))
                    ok = false;
            }
            if (ok)
                return d;
        }
        return f;
    }

    bool is_primitive() const { return conductor() == modulus(); }

private:
    const DirichletGroup* group_;
    std::vector<long long> exponents_;
};

inline std::vector<DirichletCharacter> all_characters(const DirichletGroup& group)
{
    std::vector<DirichletCharacter> out;
    const auto& orders = group.component_orders();
    std::vector<long long> idx(orders.size(), 0);
    for (;;) {
        out.emplace_back(&group, idx);
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < orders[i])
                break;
            idx[i] = 0;
        }
        if (i == idx.size())
            break;
        if (orders.empty())
            break;
    }
    return out;
}

// G(eps) = sum_{a=1}^{f} eps(a) e^{2 pi i a / f}, with eps(a) = 0 off units.
inline std::complex<double> gauss_sum(const DirichletCharacter& eps)
{
    const long long f = eps.modulus();
    std::complex<double> total{0.0, 0.0};
    for (long long a = 1; a <= f; ++a) {
        auto angle = eps.value_angle(a);
        if (!angle)
            continue;
        Rational full = *angle + Rational(a, f);
        double t = 2.0 * M_PI * static_cast<double>(full.numerator()) / static_cast<double>(full.denominator());
        total += std::complex<double>(std::cos(t), std::sin(t));
    }
    return total;
}

struct MagnitudeCheck {
    bool applicable = false; // false for imprimitive characters
    bool passed = false;
    double deviation = 0.0; // | |G|^2 - f |
};

inline MagnitudeCheck check_magnitude(const DirichletCharacter& eps)
{
    MagnitudeCheck out;
    if (!eps.is_primitive())
        return out;
    out.applicable = true;
    double norm2 = std::norm(gauss_sum(eps));
    out.deviation = std::abs(norm2 - static_cast<double>(eps.modulus()));
    out.passed = out.deviation < 1e-9;
    return out;
}

} // namespace periodcalc
