#pragma once

#include "characters.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace periodcalc {

// Pure-weight Hodge types and critical-value ranges.  Two independent
// routes are provided: the closed-form interval and a pointwise criterion
// (deligne_oracle) scanned over a finite window; they must agree and the
// test suite enforces it.

struct HodgeType {
    Rational weight{0};
    std::vector<std::pair<Rational, Rational>> pairs; // multiset, sorted

    int rank() const { return static_cast<int>(pairs.size()); }
};

inline HodgeType make_hodge(std::vector<std::pair<Rational, Rational>> pairs)
{
    require(!pairs.empty(), "hodge type must be nonempty");
    HodgeType h;
    h.weight = pairs[0].first + pairs[0].second;
    for (const auto& [p, q] : pairs)
        require(p + q == h.weight, "hodge type is not pure: p+q not constant");
    std::sort(pairs.begin(), pairs.end());
    // Swap-closure: (p,q) and (q,p) appear with equal multiplicity.
    std::map<std::pair<Rational, Rational>, int> count;
    for (const auto& pq : pairs)
        ++count[pq];
    for (const auto& [pq, c] : count) {
        auto swapped = std::make_pair(pq.second, pq.first);
        auto it = count.find(swapped);
        require(it != count.end() && it->second == c, "hodge type is not closed under (p,q) <-> (q,p)");
    }
    h.pairs = std::move(pairs);
    return h;
}

struct CriticalRange {
    Rational lo{0};
    Rational hi{0};

    bool empty() const { return lo > hi; }
    bool contains(const Rational& m) const { return lo <= m && m <= hi; }

    friend bool operator==(const CriticalRange& a, const CriticalRange& b)
    {
        if (a.empty() && b.empty())
            return true;
        return a.lo == b.lo && a.hi == b.hi;
    }
};

namespace detail {

inline void require_no_middle_pair(const HodgeType& h)
{
    for (const auto& [p, q] : h.pairs)
        require(p != q, "hodge type has a (p,p) pair; no critical-value criterion applies");
}

inline std::vector<Rational> distinct_ps(const HodgeType& h)
{
    std::vector<Rational> ps;
    for (const auto& [p, q] : h.pairs)
        ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
}

} // namespace detail

// m is critical iff for every p in the type, either p-m <= -1 and w-p-m >= 0,
// or p-m >= 0 and w-p-m <= -1.  This is the pointwise Deligne criterion and
// serves as the independent oracle for the closed forms below.
inline bool deligne_oracle(const HodgeType& h, const Rational& m)
{
    detail::require_no_middle_pair(h);
    for (const auto& [p, q] : h.pairs) {
        (void)q;
        const Rational w = h.weight;
        bool left = (p - m <= Rational(-1)) && (w - p - m >= Rational(0));
        bool right = (p - m >= Rational(0)) && (w - p - m <= Rational(-1));
        if (!left && !right)
            return false;
    }
    return true;
}

// Closed-form critical interval: with p_1 < ... < p_n the distinct p's,
// sentinels p_0 = -inf, p_{n+1} = +inf and k = max{ i : p_i < w/2 },
// the critical m are exactly max(p_k+1, w+1-p_{k+1}) <= m <= min(w-p_k, p_{k+1}).
inline CriticalRange critical_range_closed(const HodgeType& h)
{
    detail::require_no_middle_pair(h);
    auto ps = detail::distinct_ps(h);
    const Rational w = h.weight;
    const Rational half = w / 2;
    int k = 0;
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (ps[i] < half)
            k = static_cast<int>(i) + 1;
    CriticalRange r;
    bool has_pk = k >= 1;
    bool has_pk1 = k < static_cast<int>(ps.size());
    Rational lo_a = has_pk ? ps[static_cast<std::size_t>(k - 1)] + 1 : Rational(0);
    Rational lo_b = has_pk1 ? w + 1 - ps[static_cast<std::size_t>(k)] : Rational(0);
    Rational hi_a = has_pk ? w - ps[static_cast<std::size_t>(k - 1)] : Rational(0);
    Rational hi_b = has_pk1 ? ps[static_cast<std::size_t>(k)] : Rational(0);
    if (has_pk && has_pk1) {
        r.lo = std::max(lo_a, lo_b);
        r.hi = std::min(hi_a, hi_b);
    } else if (has_pk) {
        r.lo = lo_a;
        r.hi = hi_a;
    } else {
        r.lo = lo_b;
        r.hi = hi_b;
    }
    return r;
}

// Exhaustive scan of the oracle over a window that provably contains the
// critical interval: outside [w - maxp - 1, maxp + 1] (widened by 2) the
// branch conditions are monotone and no further critical points exist.
// The scan steps through the integer lattice shifted by the fractional
// part of the Hodge entries, so half-integral types are handled too.
inline CriticalRange oracle_range_scan(const HodgeType& h)
{
    detail::require_no_middle_pair(h);
    auto ps = detail::distinct_ps(h);
    const Rational w = h.weight;
    Rational maxp = ps.back();
    Rational lo = w - maxp - 1 - 2;
    Rational hi = maxp + 1 + 2;
    if (lo > hi)
        std::swap(lo, hi);
    // Criticality can only hold on the lattice where p - m is an integer.
    Rational frac = ps.front() - floor_rat(ps.front());
    Rational m = floor_rat(lo) + frac;
    while (m < lo)
        m += 1;
    CriticalRange out;
    bool found = false;
    long long count = 0;
    for (; m <= hi; m += 1) {
        if (deligne_oracle(h, m)) {
            if (!found) {
                out.lo = m;
                found = true;
            }
            out.hi = m;
            ++count;
        }
    }
    if (!found) {
        out.lo = Rational(1);
        out.hi = Rational(0);
    } else {
        require(Rational(count) == out.hi - out.lo + 1, "critical set is not an interval");
    }
    return out;
}

// Hodge type of the conjectural rank-2n motive attached to a regular
// algebraic representation of GL_n over K with infinity exponents (a_i,b_i):
// pairs (-a_i + (n-1)/2, -b_i + (n-1)/2) together with their swaps.
inline HodgeType hodge_of_representation(const InfinityType& pi)
{
    const int n = pi.degree();
    require(n >= 1, "empty infinity type");
    const Rational shift = Rational(n - 1, 2);
    std::vector<std::pair<Rational, Rational>> pairs;
    for (const auto& [a, b] : pi.exps) {
        require(is_integer(a - shift) && is_integer(b - shift),
                "representation is not algebraic: exponents must lie in Z + (n-1)/2");
        pairs.emplace_back(-a + shift, -b + shift);
        pairs.emplace_back(-b + shift, -a + shift);
    }
    return make_hodge(std::move(pairs));
}

// Hodge type of the motive of a motivic Hecke character (no (n-1)/2 shift):
// pairs (-a_i, -b_i) with swaps, pure of weight w(chi).
inline HodgeType hodge_of_character(const InfinityType& chi)
{
    auto p = predicates(chi);
    require(p.motivic, "character is not motivic");
    std::vector<std::pair<Rational, Rational>> pairs;
    for (const auto& [a, b] : chi.exps) {
        pairs.emplace_back(-a, -b);
        pairs.emplace_back(-b, -a);
    }
    return make_hodge(std::move(pairs));
}

inline HodgeType tensor_hodge(const HodgeType& x, const HodgeType& y)
{
    std::vector<std::pair<Rational, Rational>> pairs;
    pairs.reserve(x.pairs.size() * y.pairs.size());
    for (const auto& [p1, q1] : x.pairs)
        for (const auto& [p2, q2] : y.pairs)
            pairs.emplace_back(p1 + p2, q1 + q2);
    return make_hodge(std::move(pairs));
}

// Hodge type of the K-linear tensor of the motives attached to two
// representations over K (degrees n and n'): one slot per index pair with
// exponents added and the combined shift (n-1)/2 + (n'-1)/2, plus swaps.
// This is the motive whose L-function is the Rankin-Selberg product; the
// full Q-tensor of the restrictions of scalars would also contain the
// mixed conjugate pairs and is a different (larger) motive.
inline HodgeType hodge_of_pair(const InfinityType& x, const InfinityType& y)
{
    const Rational shift = Rational(x.degree() - 1, 2) + Rational(y.degree() - 1, 2);
    std::vector<std::pair<Rational, Rational>> pairs;
    for (const auto& [a1, b1] : x.exps)
        for (const auto& [a2, b2] : y.exps) {
            require(is_integer(-(a1 + a2) + shift) && is_integer(-(b1 + b2) + shift),
                    "pair motive is not algebraic: exponents must lie in Z + (n-1)/2 slotwise");
            pairs.emplace_back(-(a1 + a2) + shift, -(b1 + b2) + shift);
            pairs.emplace_back(-(b1 + b2) + shift, -(a1 + a2) + shift);
        }
    return make_hodge(std::move(pairs));
}

// Critical range of L(m, chi) for a motivic critical chi, computed directly
// from the exponents: sort a_1 >= ... >= a_n, put k = max{ i : a_i > -w/2 },
// then max(-a_k+1, w+1+a_{k+1}) <= m <= min(w+a_k, -a_{k+1}).
inline CriticalRange critical_range_character(const InfinityType& chi)
{
    auto pred = predicates(chi);
    require(pred.motivic, "critical range: character must be motivic");
    require(pred.critical, "critical range: character must be critical (a_i != b_i)");
    const Rational w = pred.weight;
    std::vector<Rational> as;
    for (const auto& [a, b] : chi.exps) {
        (void)b;
        as.push_back(a);
    }
    std::sort(as.begin(), as.end(), std::greater<Rational>());
    const int n = static_cast<int>(as.size());
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (as[static_cast<std::size_t>(i)] > -w / 2)
            k = i + 1;
    bool has_ak = k >= 1;
    bool has_ak1 = k < n;
    CriticalRange r;
    Rational lo_a = has_ak ? -as[static_cast<std::size_t>(k - 1)] + 1 : Rational(0);
    Rational lo_b = has_ak1 ? w + 1 + as[static_cast<std::size_t>(k)] : Rational(0);
    Rational hi_a = has_ak ? w + as[static_cast<std::size_t>(k - 1)] : Rational(0);
    Rational hi_b = has_ak1 ? -as[static_cast<std::size_t>(k)] : Rational(0);
    if (has_ak && has_ak1) {
        r.lo = std::max(lo_a, lo_b);
        r.hi = std::min(hi_a, hi_b);
    } else if (has_ak) {
        r.lo = lo_a;
        r.hi = hi_a;
    } else {
        r.lo = lo_b;
        r.hi = hi_b;
    }
    return r;
}

// Critical range, in the variable shifted by (n-1)/2, of the pair motive of
// a representation with strictly decreasing exponents c_1 > ... > c_n and a
// character of K with exponents (a, b).  With r = max{ i : a-b+2c_i > 0 }:
// max(1-c_r-a, 1+c_{r+1}-b) <= m - (n-1)/2 <= min(c_r-b, -c_{r+1}-a).
inline CriticalRange critical_range_pair(const InfinityType& pi, const InfinityType& eta)
{
    require(eta.degree() == 1, "pair range: second argument must be a character over K");
    const auto [a, b] = eta.exps[0];
    std::vector<Rational> cs;
    for (const auto& [c, d] : pi.exps) {
        (void)d;
        cs.push_back(c);
    }
    for (std::size_t i = 0; i + 1 < cs.size(); ++i)
        require(cs[i] > cs[i + 1], "pair range: representation exponents must be strictly decreasing");
    for (const auto& c : cs)
        require(a - b + 2 * c != Rational(0),
                "no critical value: a-b+2c_i = 0 at index " + std::to_string(&c - cs.data() + 1));
    const int n = static_cast<int>(cs.size());
    int r = 0;
    for (int i = 0; i < n; ++i)
        if (a - b + 2 * cs[static_cast<std::size_t>(i)] > Rational(0))
            r = i + 1;
    bool has_cr = r >= 1;
    bool has_cr1 = r < n;
    CriticalRange out;
    Rational lo_a = has_cr ? Rational(1) - cs[static_cast<std::size_t>(r - 1)] - a : Rational(0);
    Rational lo_b = has_cr1 ? Rational(1) + cs[static_cast<std::size_t>(r)] - b : Rational(0);
    Rational hi_a = has_cr ? cs[static_cast<std::size_t>(r - 1)] - b : Rational(0);
    Rational hi_b = has_cr1 ? -cs[static_cast<std::size_t>(r)] - a : Rational(0);
    if (has_cr && has_cr1) {
        out.lo = std::max(lo_a, lo_b);
        out.hi = std::min(hi_a, hi_b);
    } else if (has_cr) {
        out.lo = lo_a;
        out.hi = hi_a;
    } else {
        out.lo = lo_b;
        out.hi = hi_b;
    }
    return out;
}

} // namespace periodcalc
