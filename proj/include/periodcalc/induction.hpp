#pragma once

#include "characters.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace periodcalc {

// Bookkeeping for the automorphic induction Pi(chi) of a Hecke character of
// a degree-n cyclic CM extension F/K, including the normalizing twist by
// ||.||^{-1/2} psi in even degree.

struct RepSpec {
    std::string name;
    CharId base_char{};
    FieldId field{};           // field of chi
    int n = 0;                 // degree of the induced representation
    InfinityType inftype;      // over K conceptually; stored as exponent list (c_i, -c_i), c strictly decreasing
    bool even_pipeline = false;
    bool psi_used = false;
    CharId psi{};              // meaningful iff psi_used

    std::vector<Rational> c() const
    {
        std::vector<Rational> out;
        for (const auto& [a, b] : inftype.exps) {
            (void)b;
            out.push_back(a);
        }
        return out;
    }
};

// Builds Pi(chi): in odd degree the induction itself (infinity exponents
// c_i = a_i); in even degree the algebraic twist Pi(chi) (x) ||.||^{-1/2} psi
// (c_i = a_i + 1/2).  Every precondition failure names its condition.
inline RepSpec induce(const FieldRegistry& fields, const CharacterRegistry& chars, CharId chi_id,
                      std::optional<CharId> psi_id = std::nullopt, const std::string& rep_name = "")
{
    require(chars.is_single_atom(chi_id) && !chars.value(chi_id).atoms.begin()->first.check &&
                !chars.value(chi_id).atoms.begin()->first.conj,
            "induce: argument must be a declared base character");
    const BaseCharacter& base = chars.base(chars.value(chi_id).atoms.begin()->first.base);
    const auto& field = fields[base.field];
    require(field.spec.cyclic_over_k, "induce: field " + field.name() + " is not cyclic over K");
    require(base.conj_self_dual, "induce: character " + base.name + " is not conjugate self-dual");
    require(base.supercuspidal_asserted,
            "induce: character " + base.name + " lacks the asserted local-distinctness hypothesis");
    auto pred = predicates(base.inftype);
    require(pred.regular, "induce: character " + base.name + " is not regular");
    for (const auto& [a, b] : base.inftype.exps) {
        (void)b;
        require(is_integer(a), "induce: character " + base.name + " has non-integral exponents");
    }
    const int n = field.degree();
    std::vector<Rational> c;
    for (const auto& [a, b] : base.inftype.exps) {
        (void)b;
        c.push_back(a);
    }
    std::sort(c.begin(), c.end(), std::greater<Rational>());
    RepSpec rep;
    rep.name = rep_name.empty() ? "Pi(" + base.name + ")" : rep_name;
    rep.base_char = chi_id;
    rep.field = base.field;
    rep.n = n;
    rep.even_pipeline = n % 2 == 0;
    if (rep.even_pipeline) {
        require(psi_id.has_value(), "induce: even degree requires the distinguished psi");
        require(chars.is_psi_family(*psi_id), "induce: supplied character is not the distinguished psi");
        rep.psi_used = true;
        rep.psi = *psi_id;
        for (auto& ci : c)
            ci += Rational(1, 2);
    }
    rep.inftype.field = FieldRegistry::base_k();
    for (const auto& ci : c)
        rep.inftype.exps.emplace_back(ci, -ci);
    return rep;
}

// s = #{ i : a-b+2c_i < 0 } and r = n-s for an auxiliary character of K
// with exponents (a, b); errors out when some a-b+2c_i vanishes (then no
// critical value exists for the pair).
inline std::pair<int, int> s_index(const RepSpec& pi, const std::pair<Rational, Rational>& eta_ab)
{
    const auto& [a, b] = eta_ab;
    int s = 0;
    for (const auto& ci : pi.c()) {
        Rational v = a - b + 2 * ci;
        require(v != Rational(0), "s_index: a-b+2c_i = 0, no critical value exists");
        if (v < Rational(0))
            ++s;
    }
    return {s, pi.n - s};
}

// Phi_{s,chi}: the full CM type containing sigma_i for exactly the s indices
// with smallest a_i, conjugates elsewhere.  Defined from the rank order of
// the exponents, so it depends only on s and chi.
inline CMType phi_s(const InfinityType& chi, int s)
{
    const int n = chi.degree();
    require(s >= 0 && s <= n, "phi_s: s out of range 0..n");
    auto pred = predicates(chi);
    require(pred.regular, "phi_s: character must be regular");
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return chi.exps[static_cast<std::size_t>(x)].first < chi.exps[static_cast<std::size_t>(y)].first;
    });
    std::vector<bool> unbarred(static_cast<std::size_t>(n), false);
    for (int j = 0; j < s; ++j)
        unbarred[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] = true;
    std::vector<EmbeddingRef> members;
    for (int i = 0; i < n; ++i)
        members.push_back(EmbeddingRef{i + 1, !unbarred[static_cast<std::size_t>(i)]});
    return CMType(chi.field, std::move(members));
}

// Highest weight of the finite-dimensional coefficient representation:
// mu_j = -c_{n+1-j} - (n+1-2j)/2 for c sorted strictly decreasing.
inline std::vector<Rational> highest_weights(const RepSpec& pi)
{
    const int n = pi.n;
    auto c = pi.c();
    std::vector<Rational> mu(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        mu[static_cast<std::size_t>(j - 1)] = -c[static_cast<std::size_t>(n - j)] - Rational(n + 1 - 2 * j, 2);
    for (std::size_t i = 0; i + 1 < mu.size(); ++i)
        require(mu[i] >= mu[i + 1], "highest weights not weakly decreasing; input exponents unsorted?");
    return mu;
}

// The alternating chain mu_1 >= -lambda_{n-1} >= mu_2 >= ... >= -lambda_1 >= mu_n.
inline bool check_interlacing(const std::vector<Rational>& mu, const std::vector<Rational>& lambda)
{
    const int n = static_cast<int>(mu.size());
    require(static_cast<int>(lambda.size()) == n - 1, "check_interlacing: lengths must be n and n-1");
    for (int j = 1; j <= n - 1; ++j) {
        if (!(mu[static_cast<std::size_t>(j - 1)] >= -lambda[static_cast<std::size_t>(n - 1 - j)]))
            return false;
        if (!(-lambda[static_cast<std::size_t>(n - 1 - j)] >= mu[static_cast<std::size_t>(j)]))
            return false;
    }
    return true;
}

// The chain -a_n > a'_1 >= -a_{n-1} > a'_2 >= ... >= -a_2 > a'_{n-1} >= -a_1
// on strictly decreasing exponent vectors of lengths n and n-1.
inline bool check_pair_hypothesis(const std::vector<Rational>& a, const std::vector<Rational>& a2)
{
    const int n = static_cast<int>(a.size());
    require(static_cast<int>(a2.size()) == n - 1, "check_pair_hypothesis: lengths must be n and n-1");
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        require(a[i] > a[i + 1], "check_pair_hypothesis: first vector not strictly decreasing");
    for (std::size_t i = 0; i + 1 < a2.size(); ++i)
        require(a2[i] > a2[i + 1], "check_pair_hypothesis: second vector not strictly decreasing");
    for (int j = 1; j <= n - 1; ++j) {
        if (!(-a[static_cast<std::size_t>(n - j)] > a2[static_cast<std::size_t>(j - 1)]))
            return false;
        if (!(a2[static_cast<std::size_t>(j - 1)] >= -a[static_cast<std::size_t>(n - j - 1)]))
            return false;
    }
    return true;
}

struct PhiPairResult {
    CMType phi;                 // CM type of the compositum
    bool hypothesis_holds = false;
    bool matches_grid_rule = false; // membership of tau_{jk} coincides with j+k >= n+1
    std::string note;
};

// Phi_{chi,chi'} over the compositum L = F*F': tau_{jk} belongs iff
// a_j + a'_k < 0.  Under the pair hypothesis this is equivalent to
// j + k >= n+1; the result reports whether the equivalence held.
inline PhiPairResult phi_pair(const FieldRegistry& fields, const InfinityType& chi, const InfinityType& chi2,
                              FieldId compositum)
{
    const auto& rec = fields[compositum];
    require(rec.parent_left && rec.parent_right, "phi_pair: field is not a compositum");
    const int n = fields[*rec.parent_left].degree();
    const int n2 = fields[*rec.parent_right].degree();
    require(chi.degree() == n && chi2.degree() == n2, "phi_pair: infinity type lengths do not match parents");
    require(n2 == n - 1, "phi_pair: parents must have degrees n and n-1");
    std::vector<Rational> a, a2;
    for (const auto& [x, y] : chi.exps) {
        (void)y;
        a.push_back(x);
    }
    for (const auto& [x, y] : chi2.exps) {
        (void)y;
        a2.push_back(x);
    }
    PhiPairResult out;
    {
        auto sa = a, sa2 = a2;
        std::sort(sa.begin(), sa.end(), std::greater<Rational>());
        std::sort(sa2.begin(), sa2.end(), std::greater<Rational>());
        out.hypothesis_holds = check_pair_hypothesis(sa, sa2);
    }
    std::vector<EmbeddingRef> members;
    out.matches_grid_rule = true;
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n - 1; ++k) {
            bool in = a[static_cast<std::size_t>(j - 1)] + a2[static_cast<std::size_t>(k - 1)] < Rational(0);
            bool grid = j + k >= n + 1;
            if (in != grid)
                out.matches_grid_rule = false;
            members.push_back(EmbeddingRef{fields.pair_index(compositum, j, k), !in});
        }
    out.phi = CMType(compositum, std::move(members));
    out.note = out.hypothesis_holds
                   ? (out.matches_grid_rule ? "membership coincides with j+k >= n+1"
                                            : "hypothesis holds but grid rule failed (unexpected)")
                   : "pair hypothesis fails; grid equivalence not guaranteed";
    return out;
}

// Multiplicity of each embedding of F across Phi_{j,chi}, j = 1..n-1,
// computed by enumeration.  Equals sigma_i -> i-1, conj(sigma_i) -> n-i.
inline std::map<EmbeddingRef, int> exponent_profile(int n)
{
    require(n >= 2, "exponent_profile: n must be >= 2");
    // Any regular chi gives the same profile; enumerate with a_i = -i so the
    // j smallest exponents sit at the largest indices.
    InfinityType chi;
    chi.field = FieldId{0};
    for (int i = 1; i <= n; ++i)
        chi.exps.emplace_back(Rational(-i), Rational(i));
    std::map<EmbeddingRef, int> profile;
    for (int i = 1; i <= n; ++i) {
        profile[EmbeddingRef{i, false}] = 0;
        profile[EmbeddingRef{i, true}] = 0;
    }
    for (int j = 1; j <= n - 1; ++j) {
        CMType phi = phi_s(chi, j);
        for (auto e : phi.members())
            ++profile[e];
    }
    return profile;
}

} // namespace periodcalc
