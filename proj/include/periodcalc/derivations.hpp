#pragma once

#include "hodge.hpp"
#include "period_algebra.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace periodcalc {

// Axiom instantiation and the canned derivations.  An axiom call validates
// its preconditions exactly and returns a Relation; a derivation chains
// axioms, eliminates the opaque L-values, solves for the period symbol of
// interest and checks the result against the expected template.

enum class Verdict { Verified, VerifiedWithAssumptions, Failed };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::VerifiedWithAssumptions: return "verified-with-assumptions";
    case Verdict::Failed: return "failed";
    }
    return "?";
}

struct DerivationReport {
    std::string name;
    Verdict verdict = Verdict::Failed;
    Relation solved;                      // the solved period relation
    PeriodMonomial residual;              // nonempty iff verdict == Failed
    std::vector<RewriteStep> trace;
    std::vector<std::string> assumptions;          // unproven inputs that weaken the verdict
    std::vector<std::string> asserted_hypotheses;  // declared flags consumed by preconditions
    std::vector<std::string> eta_choices;          // auxiliary characters used, for the record
};

namespace detail {

inline std::string lval_pair_label(const RepSpec& pi, const std::string& eta_name, const Rational& m)
{
    return "L(" + periodcalc::to_string(m) + ", " + pi.name + " x " + eta_name + ")";
}

inline std::string lval_char_label(const Session& session, CharId chr, const Rational& m)
{
    return "L(" + periodcalc::to_string(m) + ", " + session.chars().render(chr) + ")";
}

inline CMType k_one()
{
    return CMType(FieldRegistry::base_k(), {EmbeddingRef{1, false}});
}

inline CMType k_iota()
{
    return CMType(FieldRegistry::base_k(), {EmbeddingRef{1, true}});
}

inline const BaseCharacter& base_of(const Session& session, CharId id)
{
    require(session.chars().is_single_atom(id), "expected a declared base character");
    return session.chars().base(session.chars().value(id).atoms.begin()->first.base);
}

} // namespace detail

// L(chi, m) ~ D_{F+}^{1/2} (2 pi i)^{mn} p(chi-check, Phi_chi)  modulo E(chi),
// for m a critical value of the motivic critical character chi.
inline Relation axiom_blasius(Session& session, CharId chi, const Rational& m)
{
    auto& chars = session.chars();
    InfinityType t = chars.infinity_type(chi);
    auto pred = predicates(t);
    require(pred.motivic, "blasius: character is not motivic");
    require(pred.critical, "blasius: character is not critical");
    require(is_integer(m), "blasius: m must be an integer");
    CriticalRange range = critical_range_character(t);
    require(range.contains(m), "blasius: m = " + periodcalc::to_string(m) + " is not critical (range [" +
                                   periodcalc::to_string(range.lo) + ", " + periodcalc::to_string(range.hi) + "])");
    const int n = t.degree();
    Relation rel;
    rel.lhs = PeriodMonomial::of(PeriodSymbol::lval(detail::lval_char_label(session, chi, m)));
    PeriodMonomial rhs = PeriodMonomial::of(PeriodSymbol::disc(t.field));
    rhs.multiply_in(PeriodSymbol::two_pi_i(), m * Rational(n));
    rhs.multiply_in(PeriodSymbol::period(chars.check(chi), compatible_cm_type(t)), Rational(1));
    rel.rhs = rhs;
    rel.modulo = chars.rationality(chi);
    rel.provenance = "blasius";
    return rel;
}

// L(m, Pi (x) eta) ~ (2 pi i)^{mn} G(eps_K)^{[n/2]} P^{(s)}(Pi)
//                    p(eta-check, 1)^s p(eta-check, iota)^{n-s}
// in the shifted variable m, for m critical and m + (n-1)/2 >= (n-a-b)/2.
inline Relation axiom_main(Session& session, const RepSpec& pi, CharId eta, const Rational& m)
{
    auto& chars = session.chars();
    InfinityType eta_t = chars.infinity_type(eta);
    require(eta_t.degree() == 1, "main axiom: eta must be a character of K");
    const auto [a, b] = eta_t.exps[0];
    auto [s, r] = s_index(pi, {a, b});
    (void)r;
    const int n = pi.n;
    CriticalRange range = critical_range_pair(pi.inftype, eta_t);
    require(is_integer(m + Rational(n - 1, 2)),
            "main axiom: shifted m must satisfy m + (n-1)/2 integral");
    require(range.contains(m), "main axiom: m = " + periodcalc::to_string(m) + " is not critical (range [" +
                                   periodcalc::to_string(range.lo) + ", " + periodcalc::to_string(range.hi) + "])");
    require(m + Rational(n - 1, 2) >= (Rational(n) - a - b) / 2,
            "main axiom: m below the non-vanishing threshold (n-a-b)/2");
    Relation rel;
    std::string eta_name = chars.render(eta);
    rel.lhs = PeriodMonomial::of(PeriodSymbol::lval(detail::lval_pair_label(pi, eta_name, m)));
    PeriodMonomial rhs;
    rhs.multiply_in(PeriodSymbol::two_pi_i(), m * Rational(n));
    rhs.multiply_in(PeriodSymbol::gauss("eps_K"), Rational(n / 2));
    rhs.multiply_in(PeriodSymbol::autp(pi.name, s), Rational(1));
    CharId eta_check = chars.check(eta);
    rhs.multiply_in(PeriodSymbol::period(eta_check, detail::k_one()), Rational(s));
    rhs.multiply_in(PeriodSymbol::period(eta_check, detail::k_iota()), Rational(n - s));
    rel.rhs = rhs;
    rel.modulo = chars.rationality(pi.base_char).joined(chars.rationality(eta));
    if (pi.psi_used)
        rel.modulo = rel.modulo.joined(chars.rationality(pi.psi));
    rel.provenance = "main";
    return rel;
}

// The L-function identity of automorphic induction:
//   odd n:  L(m, Pi (x) eta) = L(m, chi * (eta o N))
//   even n: L(m + 1/2 twist folded in): L(m~, Pi (x) eta) = L(m~ - 1/2, chi * ((psi eta) o N)).
// Unconditional; stated modulo Q.
inline Relation axiom_induction_L(Session& session, const RepSpec& pi, CharId eta, const Rational& m)
{
    auto& chars = session.chars();
    require(chars.infinity_type(eta).degree() == 1, "induction axiom: eta must be a character of K");
    std::string eta_name = chars.render(eta);
    CharId combined;
    Rational char_m = m;
    if (pi.even_pipeline) {
        combined = chars.multiply(pi.base_char,
                                  chars.pullback(chars.multiply(pi.psi, eta), pi.field));
        char_m = m - Rational(1, 2);
    } else {
        combined = chars.multiply(pi.base_char, chars.pullback(eta, pi.field));
    }
    require(is_integer(char_m), "induction axiom: character-side argument must be an integer");
    Relation rel;
    rel.lhs = PeriodMonomial::of(PeriodSymbol::lval(detail::lval_pair_label(pi, eta_name, m)));
    rel.rhs = PeriodMonomial::of(PeriodSymbol::lval(detail::lval_char_label(session, combined, char_m)));
    rel.modulo = CoeffField::rationals();
    rel.provenance = "induction_L";
    return rel;
}

inline std::string arch_key(const RepSpec& pi, const RepSpec& pi2, int m)
{
    return "m=" + std::to_string(m) + ", " + pi.name + "_inf, " + pi2.name + "_inf";
}

// L(m + 1/2, Pi x Pi') ~ p(m, Pi_inf, Pi'_inf) Z(Pi_inf) Z(Pi'_inf)
//                        prod_{j=1}^{n-1} P^{(j)}(Pi) prod_{k=1}^{n-2} P^{(k)}(Pi'),
// for m >= 0 with m+n-1 critical for the tensor motive, under the
// interlacing and very-regular hypotheses.
inline Relation axiom_pairing(Session& session, const RepSpec& pi, const RepSpec& pi2, int m)
{
    auto& chars = session.chars();
    require(pi.n == pi2.n + 1, "pairing axiom: degrees must be n and n-1");
    require(pi.psi_used != pi2.psi_used, "pairing axiom: exactly one factor carries the psi twist");
    require(m >= 0, "pairing axiom: m must be >= 0");
    auto mu = highest_weights(pi);
    auto lambda = highest_weights(pi2);
    require(check_interlacing(mu, lambda), "pairing axiom: highest weights do not interlace");
    auto pred1 = predicates(chars.infinity_type(pi.base_char));
    auto pred2 = predicates(chars.infinity_type(pi2.base_char));
    require(pred1.very_regular && pred2.very_regular, "pairing axiom: characters must be very regular");
    HodgeType tensor = tensor_hodge(hodge_of_representation(pi.inftype), hodge_of_representation(pi2.inftype));
    CriticalRange range = critical_range_closed(tensor);
    require(range.contains(Rational(m + pi.n - 1)),
            "pairing axiom: m+n-1 = " + std::to_string(m + pi.n - 1) + " is not critical for the tensor motive (range [" +
                periodcalc::to_string(range.lo) + ", " + periodcalc::to_string(range.hi) + "])");
    Relation rel;
    rel.lhs = PeriodMonomial::of(
        PeriodSymbol::lval(detail::lval_pair_label(pi, pi2.name, Rational(m) + Rational(1, 2))));
    PeriodMonomial rhs = PeriodMonomial::of(PeriodSymbol::arch(arch_key(pi, pi2, m)));
    for (int j = 1; j <= pi.n - 1; ++j)
        rhs.multiply_in(PeriodSymbol::autp(pi.name, j), Rational(1));
    for (int k = 1; k <= pi2.n - 1; ++k)
        rhs.multiply_in(PeriodSymbol::autp(pi2.name, k), Rational(1));
    rel.rhs = rhs;
    rel.modulo = chars.rationality(pi.base_char).joined(chars.rationality(pi2.base_char));
    CharId psi = pi.psi_used ? pi.psi : pi2.psi;
    rel.modulo = rel.modulo.joined(chars.rationality(psi));
    rel.provenance = "pairing";
    if (m == 0)
        rel.annotations.push_back("assumed-nonvanishing: L(1/2, Pi x Pi') != 0 taken as a hypothesis");
    return rel;
}

// L(m + 1/2, Pi x Pi') = L(m, (chi o N)(chi' o N)(psi o N)) over the
// compositum; the half shift comes from the single ||.||^{-1/2} twist.
inline Relation axiom_pair_induction(Session& session, const RepSpec& pi, const RepSpec& pi2, int m,
                                     FieldId compositum)
{
    auto& chars = session.chars();
    require(pi.psi_used != pi2.psi_used, "pair induction: exactly one factor carries the psi twist");
    CharId psi = pi.psi_used ? pi.psi : pi2.psi;
    CharId combined = chars.multiply(
        chars.multiply(chars.pullback(pi.base_char, compositum), chars.pullback(pi2.base_char, compositum)),
        chars.pullback(psi, compositum));
    Relation rel;
    rel.lhs = PeriodMonomial::of(
        PeriodSymbol::lval(detail::lval_pair_label(pi, pi2.name, Rational(m) + Rational(1, 2))));
    rel.rhs = PeriodMonomial::of(PeriodSymbol::lval(detail::lval_char_label(session, combined, Rational(m))));
    rel.modulo = CoeffField::rationals();
    rel.provenance = "pair_induction";
    return rel;
}

// --- relation combinators -------------------------------------------------

// Eliminate `sym` between r1 and r2: the result is r1's quotient divided by
// the power of r2's quotient that kills the symbol.
inline Relation eliminate_symbol(const Relation& r1, const Relation& r2, const PeriodSymbol& sym)
{
    PeriodMonomial q1 = r1.quotient();
    PeriodMonomial q2 = r2.quotient();
    Rational e1 = q1.exponent(sym);
    Rational e2 = q2.exponent(sym);
    require(e1 != Rational(0) && e2 != Rational(0), "eliminate: symbol absent from one of the relations");
    Relation out;
    out.lhs = mono_mul(q1, mono_pow(q2, -e1 / e2));
    out.rhs = PeriodMonomial::one();
    out.modulo = r1.modulo.joined(r2.modulo);
    out.provenance = r1.provenance + " / " + r2.provenance;
    out.annotations = r1.annotations;
    out.annotations.insert(out.annotations.end(), r2.annotations.begin(), r2.annotations.end());
    return out;
}

// Fold a list of relations, eliminating at each step the first shared
// opaque symbol (L-values first, then automorphic periods).
inline Relation chain_relations(const std::vector<Relation>& rels)
{
    require(!rels.empty(), "chain: no relations given");
    Relation cur = rels[0];
    for (std::size_t i = 1; i < rels.size(); ++i) {
        PeriodMonomial q1 = cur.quotient();
        PeriodMonomial q2 = rels[i].quotient();
        std::optional<PeriodSymbol> shared;
        auto scan = [&](PeriodSymbol::Kind kind) {
            for (const auto& [sym, e] : q1.exps()) {
                (void)e;
                if (sym.kind == kind && q2.exponent(sym) != Rational(0)) {
                    shared = sym;
                    return;
                }
            }
        };
        scan(PeriodSymbol::Kind::LVal);
        if (!shared)
            scan(PeriodSymbol::Kind::AutP);
        if (!shared)
            scan(PeriodSymbol::Kind::Arch);
        require(shared.has_value(), "chain: relations share no opaque symbol to eliminate");
        cur = eliminate_symbol(cur, rels[i], *shared);
    }
    return cur;
}

// Rearrange a quotient relation (q ~ 1) into  sym ~ monomial.
inline Relation solve_for(const Relation& rel, const PeriodSymbol& sym)
{
    PeriodMonomial q = rel.quotient();
    Rational e = q.exponent(sym);
    require(e == Rational(1) || e == Rational(-1),
            "solve: symbol must occur with exponent +-1, found " + periodcalc::to_string(e));
    q.set_exponent(sym, Rational(0));
    Relation out;
    out.lhs = PeriodMonomial::of(sym);
    out.rhs = mono_pow(q, -Rational(1) / e);
    out.modulo = rel.modulo;
    out.provenance = rel.provenance;
    out.annotations = rel.annotations;
    return out;
}

// --- eta selection for the period-relation derivations ---------------------

// Exponent pairs (a, b) of auxiliary characters of K realizing the index s
// for the given representation, together with an admissible critical point.
struct EtaChoice {
    Rational a, b;
    Rational m; // shifted critical value used for the axioms
};

inline std::vector<EtaChoice> auxiliary_character_choices(const RepSpec& pi, int s, int count)
{
    auto c = pi.c();
    const int n = pi.n;
    require(s >= 0 && s <= n, "s out of range");
    // Need b - a strictly between 2c_{n-s} and 2c_{n-s+1} (the s smallest
    // exponents and no others satisfy c_i < (b-a)/2).
    std::vector<Rational> ds;
    bool lo_open = s > 0, hi_open = s < n;
    Rational lo = lo_open ? 2 * c[static_cast<std::size_t>(n - s)] : Rational(0);
    Rational hi = hi_open ? 2 * c[static_cast<std::size_t>(n - s - 1)] : Rational(0);
    if (!lo_open)
        lo = hi - 4;
    if (!hi_open)
        hi = lo + 4;
    for (Rational d = floor_rat(lo) + 1; d < hi && static_cast<int>(ds.size()) < count; d += 1)
        if (d > lo)
            ds.push_back(d);
    std::vector<EtaChoice> out;
    std::vector<std::pair<Rational, Rational>> candidates;
    for (const auto& d : ds)
        candidates.emplace_back(Rational(0), d);
    if (static_cast<int>(candidates.size()) < count && !ds.empty())
        candidates.emplace_back(Rational(-1), ds[0] - 1); // same difference, distinct pair
    for (const auto& [a, b] : candidates) {
        InfinityType eta;
        eta.field = FieldRegistry::base_k();
        eta.exps = {{a, b}};
        CriticalRange range = critical_range_pair(pi.inftype, eta);
        Rational threshold = (Rational(n) - a - b) / 2 - Rational(n - 1, 2);
        Rational start = std::max(range.lo, threshold);
        // step to the lattice m + (n-1)/2 in Z
        Rational frac = Rational(n - 1, 2) - floor_rat(Rational(n - 1, 2));
        Rational mm = floor_rat(start) - frac; // candidate on lattice, may be below start
        while (mm < start)
            mm += 1;
        require(mm <= range.hi, "no admissible critical point for eta = (" + periodcalc::to_string(a) + "," +
                                    periodcalc::to_string(b) + ")");
        out.push_back(EtaChoice{a, b, mm});
        if (static_cast<int>(out.size()) == count)
            break;
    }
    require(static_cast<int>(out.size()) == count, "could not find enough admissible auxiliary characters");
    return out;
}

// Expected right-hand side of the solved period relation.
inline PeriodMonomial period_relation_template(Session& session, CharId chi, const RepSpec& pi, int s)
{
    auto& chars = session.chars();
    InfinityType t = chars.infinity_type(chi);
    const int n = pi.n;
    PeriodMonomial expected = PeriodMonomial::of(PeriodSymbol::disc(t.field));
    expected.multiply_in(PeriodSymbol::gauss("eps_K"), Rational(-(n / 2)));
    expected.multiply_in(PeriodSymbol::period(chars.check(chi), phi_s(t, s)), Rational(1));
    if (pi.even_pipeline) {
        expected.multiply_in(PeriodSymbol::two_pi_i(), Rational(-n, 2));
        CharId psi_check = chars.check(pi.psi);
        expected.multiply_in(PeriodSymbol::period(psi_check, detail::k_one()), Rational(s));
        expected.multiply_in(PeriodSymbol::period(psi_check, detail::k_iota()), Rational(n - s));
    }
    return expected;
}

// Re-derives P^{(s)}(Pi(chi)) in terms of CM periods by eliminating the
// L-value between the main axiom, the induction identity and the Blasius
// relation; runs two distinct auxiliary characters and insists on identical
// normal forms.
inline DerivationReport derive_period_relation(Session& session, CharId chi, int s, bool with_trace = true)
{
    auto& chars = session.chars();
    const BaseCharacter& base = detail::base_of(session, chi);
    RepSpec pi = induce(session.fields(), session.chars(), chi, session.psi());

    DerivationReport report;
    report.name = (pi.even_pipeline ? "evenfinal" : "oddfinal") + std::string(" n=") + std::to_string(pi.n) +
                  " s=" + std::to_string(s);
    report.asserted_hypotheses.push_back("local distinctness (supercuspidality) asserted for " + base.name);

    CoeffField modulo = chars.rationality(chi);
    if (pi.even_pipeline)
        modulo = modulo.joined(chars.rationality(pi.psi));

    std::optional<PeriodMonomial> solved;
    for (const auto& choice : auxiliary_character_choices(pi, s, 2)) {
        BaseCharacter eta_base;
        eta_base.name = "eta[" + periodcalc::to_string(choice.a) + "," + periodcalc::to_string(choice.b) + "]";
        eta_base.field = FieldRegistry::base_k();
        eta_base.inftype = make_infinity_type(eta_base.field, {{choice.a, choice.b}});
        CharId eta = chars.by_name(eta_base.name) ? *chars.by_name(eta_base.name) : session.declare_character(eta_base);
        report.eta_choices.push_back(eta_base.name + " at m=" + periodcalc::to_string(choice.m));

        Relation main = axiom_main(session, pi, eta, choice.m);
        Relation ind = axiom_induction_L(session, pi, eta, choice.m);
        Rational char_m = pi.even_pipeline ? choice.m - Rational(1, 2) : choice.m;
        CharId combined = pi.even_pipeline
                              ? chars.multiply(chi, chars.pullback(chars.multiply(pi.psi, eta), pi.field))
                              : chars.multiply(chi, chars.pullback(eta, pi.field));
        Relation blasius = axiom_blasius(session, combined, char_m);
        {
            // Internal consistency: criticality on the character side must
            // coincide with criticality of the pair motive.
            CriticalRange pair_range = critical_range_pair(pi.inftype, chars.infinity_type(eta));
            CriticalRange char_range = critical_range_character(chars.infinity_type(combined));
            Rational shift = pi.even_pipeline ? Rational(1, 2) : Rational(0);
            require(pair_range.lo - shift == char_range.lo && pair_range.hi - shift == char_range.hi,
                    "internal: pair and character critical ranges disagree");
        }

        Relation chained = chain_relations({main, ind, blasius});
        Relation autp_rel = solve_for(chained, PeriodSymbol::autp(pi.name, s));
        auto norm = normalize(session, autp_rel.rhs, modulo, with_trace);
        if (with_trace && report.trace.empty())
            report.trace = norm.trace;
        if (solved && !(*solved == norm.value))
            throw Error("derivation is not independent of the auxiliary character: " + solved->render(session) +
                        " vs " + norm.value.render(session));
        solved = norm.value;
    }

    report.solved.lhs = PeriodMonomial::of(PeriodSymbol::autp(pi.name, s));
    report.solved.rhs = *solved;
    report.solved.modulo = modulo;
    report.solved.provenance = pi.even_pipeline ? "evenfinal" : "oddfinal";

    PeriodMonomial expected = period_relation_template(session, chi, pi, s);
    auto eq = equivalent(session, *solved, expected, modulo, with_trace);
    report.residual = eq.residual;
    report.verdict = eq.equivalent ? Verdict::Verified : Verdict::Failed;
    return report;
}

// Solves the archimedean factor of the Rankin-Selberg pairing:
// ARCH ~ (2 pi i)^{(m+1/2) n (n-1)} with every discriminant and Gauss-sum
// symbol eliminated, modulo K * E(chi_inf) * E(chi'_inf).
inline DerivationReport derive_archimedean(Session& session, CharId chi, CharId chi2, int m,
                                           bool with_trace = true)
{
    auto& chars = session.chars();
    const BaseCharacter& base1 = detail::base_of(session, chi);
    const BaseCharacter& base2 = detail::base_of(session, chi2);
    const int n = session.fields()[base1.field].degree();
    require(session.fields()[base2.field].degree() == n - 1,
            "archimedean derivation: fields must have degrees n and n-1");

    // locate the declared compositum
    std::optional<FieldId> compositum;
    for (std::uint32_t i = 0; i < session.fields().size(); ++i) {
        const auto& rec = session.fields()[FieldId{i}];
        if (rec.parent_left && *rec.parent_left == base1.field && rec.parent_right &&
            *rec.parent_right == base2.field)
            compositum = FieldId{i};
    }
    require(compositum.has_value(), "archimedean derivation: compositum of the two fields is not declared");

    RepSpec pi = induce(session.fields(), session.chars(), chi, session.psi());
    RepSpec pi2 = induce(session.fields(), session.chars(), chi2, session.psi());

    DerivationReport report;
    report.name = "arch n=" + std::to_string(n) + " m=" + std::to_string(m);
    report.asserted_hypotheses.push_back("local distinctness (supercuspidality) asserted for " + base1.name +
                                         " and " + base2.name);

    // Cross-check the two formulations of the interlacing hypothesis.
    std::vector<Rational> a1, a2;
    for (const auto& [x, y] : chars.infinity_type(chi).exps) {
        (void)y;
        a1.push_back(x);
    }
    for (const auto& [x, y] : chars.infinity_type(chi2).exps) {
        (void)y;
        a2.push_back(x);
    }
    std::sort(a1.begin(), a1.end(), std::greater<Rational>());
    std::sort(a2.begin(), a2.end(), std::greater<Rational>());
    bool hyp_exps = check_pair_hypothesis(a1, a2);
    bool hyp_weights = check_interlacing(highest_weights(pi), highest_weights(pi2));
    require(hyp_exps == hyp_weights, "internal: the two interlacing formulations disagree");
    require(hyp_exps, "archimedean derivation: interlacing hypothesis fails");

    Relation pairing = axiom_pairing(session, pi, pi2, m);
    for (const auto& ann : pairing.annotations)
        report.assumptions.push_back(ann);

    CoeffField modulo = CoeffField("K");
    for (const auto& atom : {std::string("E(") + base1.name + "_inf)", std::string("E(") + base2.name + "_inf)"}) {
        session.lattice().declare(atom);
        modulo = modulo.joined(CoeffField(atom));
    }
    // The infinity-type coefficient fields sit inside the full rationality fields.
    session.lattice().declare_contains("E(" + base1.name + "_inf)", base1.rationality_field);
    session.lattice().declare_contains("E(" + base2.name + "_inf)", base2.rationality_field);

    // Substitute the solved period relations for every automorphic period.
    std::vector<Relation> chain = {pairing};
    for (int j = 1; j <= n - 1; ++j) {
        auto sub = derive_period_relation(session, chi, j, false);
        require(sub.verdict != Verdict::Failed, "archimedean derivation: period relation failed for s=" +
                                                    std::to_string(j));
        chain.push_back(sub.solved);
    }
    for (int k = 1; k <= n - 2; ++k) {
        auto sub = derive_period_relation(session, chi2, k, false);
        require(sub.verdict != Verdict::Failed, "archimedean derivation: period relation failed for s'=" +
                                                    std::to_string(k));
        chain.push_back(sub.solved);
    }

    // Blasius over the compositum and the L-function identity.
    CharId psi = pi.psi_used ? pi.psi : pi2.psi;
    CharId combined = chars.multiply(
        chars.multiply(chars.pullback(chi, *compositum), chars.pullback(chi2, *compositum)),
        chars.pullback(psi, *compositum));
    Relation ident = axiom_pair_induction(session, pi, pi2, m, *compositum);
    Relation blasius = axiom_blasius(session, combined, Rational(m));

    chain.insert(chain.begin() + 1, ident);
    chain.insert(chain.begin() + 2, blasius);

    Relation chained = chain_relations(chain);
    PeriodSymbol arch = PeriodSymbol::arch(arch_key(pi, pi2, m));
    Relation arch_rel = solve_for(chained, arch);
    auto norm = normalize(session, arch_rel.rhs, modulo, with_trace);
    report.trace = norm.trace;

    report.solved.lhs = PeriodMonomial::of(arch);
    report.solved.rhs = norm.value;
    report.solved.modulo = modulo;
    report.solved.provenance = "archimedean";
    report.solved.annotations = pairing.annotations;

    PeriodMonomial expected;
    expected.multiply_in(PeriodSymbol::two_pi_i(), (Rational(m) + Rational(1, 2)) * Rational(n) * Rational(n - 1));
    auto eq = equivalent(session, norm.value, expected, modulo, false);
    report.residual = eq.residual;
    if (!eq.equivalent)
        report.verdict = Verdict::Failed;
    else
        report.verdict = report.assumptions.empty() ? Verdict::Verified : Verdict::VerifiedWithAssumptions;
    return report;
}

} // namespace periodcalc
