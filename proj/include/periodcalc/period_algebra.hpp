#pragma once

#include "session.hpp"

#include <map>
#include <string>
#include <vector>

namespace periodcalc {

// The free abelian group of formal period symbols with rational exponents,
// together with the rewrite rules implementing the CM-period identities.
// normalize() orients every identity toward singleton base symbols and is a
// terminating, deterministic fixpoint; "equality modulo E^x" is equality of
// normal forms after absorbing the symbols that are units of E.

struct PeriodSymbol {
    enum class Kind { TwoPiI, Disc, Gauss, P, AutP, Arch, LVal, Unit };

    Kind kind = Kind::TwoPiI;
    FieldId field{};    // Disc: the CM field whose F+ discriminant; P: field of the CM type
    CharId chr{};       // P
    CMType where;       // P
    std::string label;  // Gauss symbol name / AutP rep name / Arch key / LVal label / Unit atom
    int s = 0;          // AutP

    static PeriodSymbol two_pi_i() { return PeriodSymbol{}; }

    static PeriodSymbol disc(FieldId f)
    {
        PeriodSymbol x;
        x.kind = Kind::Disc;
        x.field = f;
        return x;
    }

    static PeriodSymbol gauss(std::string name)
    {
        PeriodSymbol x;
        x.kind = Kind::Gauss;
        x.label = std::move(name);
        return x;
    }

    static PeriodSymbol period(CharId chr, CMType where)
    {
        PeriodSymbol x;
        x.kind = Kind::P;
        x.chr = chr;
        x.field = where.field();
        x.where = std::move(where);
        return x;
    }

    static PeriodSymbol autp(std::string rep, int s)
    {
        PeriodSymbol x;
        x.kind = Kind::AutP;
        x.label = std::move(rep);
        x.s = s;
        return x;
    }

    static PeriodSymbol arch(std::string key)
    {
        PeriodSymbol x;
        x.kind = Kind::Arch;
        x.label = std::move(key);
        return x;
    }

    static PeriodSymbol lval(std::string label)
    {
        PeriodSymbol x;
        x.kind = Kind::LVal;
        x.label = std::move(label);
        return x;
    }

    static PeriodSymbol unit(std::string atom)
    {
        PeriodSymbol x;
        x.kind = Kind::Unit;
        x.label = std::move(atom);
        return x;
    }

    friend bool operator<(const PeriodSymbol& a, const PeriodSymbol& b)
    {
        if (a.kind != b.kind)
            return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        if (!(a.field == b.field))
            return a.field < b.field;
        if (a.chr != b.chr)
            return a.chr < b.chr;
        if (!(a.where == b.where))
            return a.where < b.where;
        if (a.label != b.label)
            return a.label < b.label;
        return a.s < b.s;
    }
    friend bool operator==(const PeriodSymbol& a, const PeriodSymbol& b)
    {
        return !(a < b) && !(b < a);
    }
};

inline std::string render_embedding(EmbeddingRef e)
{
    return (e.barred ? "~s" : "s") + std::to_string(e.index);
}

inline std::string render_cm_type(const CMType& psi)
{
    if (psi.size() == 1)
        return render_embedding(psi.members()[0]);
    std::string s = "{";
    bool first = true;
    for (auto e : psi.members()) {
        if (!first)
            s += ", ";
        s += render_embedding(e);
        first = false;
    }
    return s + "}";
}

inline std::string render_symbol(const PeriodSymbol& x, const Session& session)
{
    switch (x.kind) {
    case PeriodSymbol::Kind::TwoPiI: return "TWO_PI_I";
    case PeriodSymbol::Kind::Disc: return "DISC(" + session.fields()[x.field].name() + ")";
    case PeriodSymbol::Kind::Gauss: return "GAUSS(" + x.label + ")";
    case PeriodSymbol::Kind::P:
        return "P(" + session.chars().render(x.chr) + ", " + render_cm_type(x.where) + ")";
    case PeriodSymbol::Kind::AutP: return "AUTP(" + x.label + ", " + std::to_string(x.s) + ")";
    case PeriodSymbol::Kind::Arch: return "ARCH(" + x.label + ")";
    case PeriodSymbol::Kind::LVal: return "LVAL(\"" + x.label + "\")";
    case PeriodSymbol::Kind::Unit: return "UNIT(" + x.label + ")";
    }
    return "?";
}

class PeriodMonomial {
public:
    PeriodMonomial() = default;

    static PeriodMonomial one() { return PeriodMonomial{}; }

    static PeriodMonomial of(const PeriodSymbol& sym, const Rational& exp = Rational(1))
    {
        PeriodMonomial m;
        m.multiply_in(sym, exp);
        return m;
    }

    const std::map<PeriodSymbol, Rational>& exps() const { return exps_; }
    bool is_one() const { return exps_.empty(); }

    Rational exponent(const PeriodSymbol& sym) const
    {
        auto it = exps_.find(sym);
        return it == exps_.end() ? Rational(0) : it->second;
    }

    void multiply_in(const PeriodSymbol& sym, const Rational& exp)
    {
        if (exp == Rational(0))
            return;
        auto [it, inserted] = exps_.emplace(sym, exp);
        if (!inserted) {
            it->second += exp;
            if (it->second == Rational(0))
                exps_.erase(it);
        }
    }

    void set_exponent(const PeriodSymbol& sym, const Rational& exp)
    {
        exps_.erase(sym);
        if (exp != Rational(0))
            exps_[sym] = exp;
    }

    friend PeriodMonomial mono_mul(const PeriodMonomial& a, const PeriodMonomial& b)
    {
        PeriodMonomial out = a;
        for (const auto& [sym, e] : b.exps_)
            out.multiply_in(sym, e);
        return out;
    }

    friend PeriodMonomial mono_pow(const PeriodMonomial& a, const Rational& k)
    {
        PeriodMonomial out;
        if (k == Rational(0))
            return out;
        for (const auto& [sym, e] : a.exps_)
            out.exps_[sym] = e * k;
        return out;
    }

    friend PeriodMonomial mono_inv(const PeriodMonomial& a) { return mono_pow(a, Rational(-1)); }

    friend bool operator==(const PeriodMonomial& a, const PeriodMonomial& b) { return a.exps_ == b.exps_; }
    friend bool operator!=(const PeriodMonomial& a, const PeriodMonomial& b) { return !(a == b); }

    std::string render(const Session& session) const
    {
        if (exps_.empty())
            return "1";
        std::string s;
        for (const auto& [sym, e] : exps_) {
            if (!s.empty())
                s += " * ";
            s += render_symbol(sym, session);
            if (e != Rational(1))
                s += "^" + to_string(e);
        }
        return s;
    }

private:
    std::map<PeriodSymbol, Rational> exps_;
};

// An equality of monomials up to a unit of the stated coefficient field.
struct Relation {
    PeriodMonomial lhs;
    PeriodMonomial rhs;
    CoeffField modulo;
    std::string provenance;
    std::vector<std::string> annotations;

    PeriodMonomial quotient() const { return mono_mul(lhs, mono_inv(rhs)); }
};

struct RewriteStep {
    std::string rule;
    std::string detail;
};

struct NormalizeResult {
    PeriodMonomial value;
    std::vector<RewriteStep> trace;
};

// True when the symbol is a unit of E.  Default-deny: only symbols with an
// explicitly known unit field absorb (Gauss symbols via their declaration,
// UNIT markers via their atom, plus per-symbol lattice declarations).
inline bool is_absorbable(const PeriodSymbol& sym, const CoeffField& e, const Session& session)
{
    session.lattice().require_declared(e);
    switch (sym.kind) {
    case PeriodSymbol::Kind::TwoPiI:
        return false; // transcendental, never a unit of a number field
    case PeriodSymbol::Kind::Gauss: {
        const GaussSymbolInfo* info = session.gauss_info(sym.label);
        require(info != nullptr, "unknown Gauss symbol: " + sym.label);
        if (!info->absorb_atom.empty() && session.lattice().atom_leq(info->absorb_atom, e))
            return true;
        break;
    }
    case PeriodSymbol::Kind::Unit:
        if (session.lattice().atom_leq(sym.label, e))
            return true;
        break;
    default:
        break;
    }
    const std::string* declared = session.lattice().absorbing_atom(render_symbol(sym, session));
    return declared != nullptr && session.lattice().atom_leq(*declared, e);
}

namespace detail {

// Signed common part of a cancelling pair: the amount of (x*y) that can be
// removed when both exponents point the same way.
inline Rational transferable(const Rational& e1, const Rational& e2)
{
    if (e1 > Rational(0) && e2 > Rational(0))
        return std::min(e1, e2);
    if (e1 < Rational(0) && e2 < Rational(0))
        return std::max(e1, e2);
    return Rational(0);
}

} // namespace detail

class Normalizer {
public:
    Normalizer(Session& session, CoeffField modulo, bool with_trace = true)
        : session_(session), modulo_(std::move(modulo)), with_trace_(with_trace)
    {
        session_.lattice().require_declared(modulo_);
    }

    NormalizeResult run(PeriodMonomial m)
    {
        trace_.clear();
        // Structural rules to fixpoint, in fixed priority order.
        for (;;) {
            if (rule_split_cm_type(m))
                continue;
            if (rule_split_character(m))
                continue;
            if (rule_norm(m))
                continue;
            if (rule_conjugation(m))
                continue;
            if (rule_csd_cancel(m))
                continue;
            if (rule_psi(m))
                continue;
            if (rule_gauss(m))
                continue;
            if (rule_norm_character(m))
                continue;
            if (rule_disc(m))
                continue;
            break;
        }
        absorb(m);
        Rational tpi = m.exponent(PeriodSymbol::two_pi_i());
        if (!is_integer(tpi))
            throw Error("normal form has non-integral TWO_PI_I exponent " + to_string(tpi));
        return NormalizeResult{std::move(m), std::move(trace_)};
    }

    // --- individual rules, each applies at most once and reports progress ---

    // p(chi, Psi1 u Psi2) ~ p(chi, Psi1) p(chi, Psi2): split CM types into
    // singletons.
    bool rule_split_cm_type(PeriodMonomial& m)
    {
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::P)
                continue;
            if (sym.where.empty()) {
                // empty product
                PeriodSymbol lhs = sym;
                m.set_exponent(lhs, Rational(0));
                log("split_cm_type", lhs);
                return true;
            }
            if (sym.where.size() < 2)
                continue;
            PeriodSymbol lhs = sym;
            Rational exp = e;
            m.set_exponent(lhs, Rational(0));
            for (auto emb : lhs.where.members())
                m.multiply_in(PeriodSymbol::period(lhs.chr, CMType(lhs.where.field(), {emb})), exp);
            log("split_cm_type", lhs);
            return true;
        }
        return false;
    }

    // p(chi1*chi2, Psi) ~ p(chi1, Psi) p(chi2, Psi): split composite
    // characters into their atoms and a norm-power part.
    bool rule_split_character(PeriodMonomial& m)
    {
        auto& chars = session_.chars();
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::P)
                continue;
            const CharValue& v = chars.value(sym.chr);
            bool composite = v.atoms.size() > 1 || (v.atoms.size() == 1 && v.atoms.begin()->second != 1) ||
                             (!v.atoms.empty() && v.norm_power != Rational(0));
            if (!composite)
                continue;
            PeriodSymbol lhs = sym;
            Rational exp = e;
            CharValue value = v;
            m.set_exponent(lhs, Rational(0));
            for (const auto& [atom, mult] : value.atoms) {
                CharId part = chars.single_atom_value(atom, value.field);
                m.multiply_in(PeriodSymbol::period(part, lhs.where), exp * Rational(mult));
            }
            if (value.norm_power != Rational(0))
                m.multiply_in(PeriodSymbol::period(chars.norm_power(value.norm_power, value.field), lhs.where), exp);
            log("split_character", lhs);
            return true;
        }
        return false;
    }

    // p_F(eta o N, tau) ~ p_F0(eta, tau|_F0): descend pulled-back characters.
    bool rule_norm(PeriodMonomial& m)
    {
        auto& chars = session_.chars();
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::P || sym.where.size() != 1)
                continue;
            if (!chars.is_single_atom(sym.chr))
                continue;
            FieldId down = chars.atom_field(sym.chr);
            if (down == sym.where.field())
                continue;
            PeriodSymbol lhs = sym;
            Rational exp = e;
            EmbeddingRef restricted =
                session_.fields().restrict_embedding(lhs.where.field(), lhs.where.members()[0], down);
            m.set_exponent(lhs, Rational(0));
            CharId descended = chars.descend_to_atom_field(lhs.chr);
            m.multiply_in(PeriodSymbol::period(descended, CMType(down, {restricted})), exp);
            log("norm", lhs);
            return true;
        }
        return false;
    }

    // p(chi, conj tau) ~ p(chi^c, tau): orient conjugation toward unbarred
    // embeddings.
    bool rule_conjugation(PeriodMonomial& m)
    {
        auto& chars = session_.chars();
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::P || sym.where.size() != 1 || !sym.where.members()[0].barred)
                continue;
            PeriodSymbol lhs = sym;
            Rational exp = e;
            m.set_exponent(lhs, Rational(0));
            CharId conj = chars.conj(lhs.chr);
            m.multiply_in(
                PeriodSymbol::period(conj, CMType(lhs.where.field(), {conjugate(lhs.where.members()[0])})), exp);
            log("conjugation", lhs);
            return true;
        }
        return false;
    }

    // Cancelling pairs at a singleton embedding:
    //   - p(chi, tau) p(chi^{-1}, tau) ~ 1 for any chi (the product is the
    //     trivial character), and
    //   - p(chi, tau) p(chi^c, tau) ~ 1 when chi is conjugate self-dual
    //     (also in the pre-conjugation shape p(chi, tau) p(chi, conj tau)).
    bool rule_csd_cancel(PeriodMonomial& m)
    {
        auto& chars = session_.chars();
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::P || sym.where.size() != 1)
                continue;
            std::vector<PeriodSymbol> partners;
            partners.push_back(PeriodSymbol::period(chars.inverse(sym.chr), sym.where));
            if (chars.conj_self_dual(sym.chr)) {
                partners.push_back(PeriodSymbol::period(chars.conj(sym.chr), sym.where));
                partners.push_back(PeriodSymbol::period(
                    sym.chr, CMType(sym.where.field(), {conjugate(sym.where.members()[0])})));
            }
            for (const PeriodSymbol& other : partners) {
                if (other == sym)
                    continue;
                Rational e2 = m.exponent(other);
                Rational t = detail::transferable(e, e2);
                if (t == Rational(0))
                    continue;
                PeriodSymbol lhs = sym;
                m.multiply_in(lhs, -t);
                m.multiply_in(other, -t);
                log("csd_cancel", lhs);
                return true;
            }
        }
        return false;
    }

    // For the distinguished psi: p(psi-check, 1) p(psi-check^c, 1) ~ 2*pi*i
    // (and the unchecked pair gives the inverse power, via psi psi^c = ||.||).
    bool rule_psi(PeriodMonomial& m)
    {
        auto& chars = session_.chars();
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::P || sym.where.size() != 1)
                continue;
            if (!chars.is_psi_family(sym.chr))
                continue;
            PeriodSymbol partner = PeriodSymbol::period(chars.conj(sym.chr), sym.where);
            if (partner == sym)
                continue;
            Rational e2 = m.exponent(partner);
            Rational t = detail::transferable(e, e2);
            if (t == Rational(0))
                continue;
            // v * conj(v) is a power of the norm; p(||.||^kappa, 1) ~ (2 pi i)^{-kappa}.
            InfinityType vt = chars.infinity_type(sym.chr);
            EmbeddingRef emb = sym.where.members()[0];
            auto [a, b] = vt.exps[static_cast<std::size_t>(emb.index - 1)];
            Rational kappa = a + b;
            PeriodSymbol lhs = sym;
            m.multiply_in(lhs, -t);
            m.multiply_in(partner, -t);
            m.multiply_in(PeriodSymbol::two_pi_i(), -kappa * t);
            log("psi", lhs);
            return true;
        }
        return false;
    }

    // G(alpha_0) ~ p(alpha_0 o N, 1)^{-1} when the Dirichlet symbol is
    // declared with its attached character; trivial symbols vanish.
    bool rule_gauss(PeriodMonomial& m)
    {
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::Gauss)
                continue;
            const GaussSymbolInfo* info = session_.gauss_info(sym.label);
            require(info != nullptr, "unknown Gauss symbol: " + sym.label);
            if (info->trivial) {
                PeriodSymbol lhs = sym;
                m.set_exponent(lhs, Rational(0));
                log("gauss", lhs);
                return true;
            }
            if (info->attached_pullback) {
                PeriodSymbol lhs = sym;
                Rational exp = e;
                m.set_exponent(lhs, Rational(0));
                m.multiply_in(PeriodSymbol::period(*info->attached_pullback,
                                                   CMType(FieldRegistry::base_k(), {EmbeddingRef{1, false}})),
                              -exp);
                log("gauss", lhs);
                return true;
            }
        }
        return false;
    }

    // p(||.||^kappa, tau) ~ (2 pi i)^{-kappa}.
    bool rule_norm_character(PeriodMonomial& m)
    {
        auto& chars = session_.chars();
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::P || sym.where.size() != 1)
                continue;
            if (!chars.is_pure_norm_power(sym.chr))
                continue;
            Rational kappa = chars.value(sym.chr).norm_power;
            PeriodSymbol lhs = sym;
            Rational exp = e;
            m.set_exponent(lhs, Rational(0));
            m.multiply_in(PeriodSymbol::two_pi_i(), -kappa * exp);
            log("norm_character", lhs);
            return true;
        }
        return false;
    }

    // D_{L+}^{1/2} ~ (D_{F+}^{1/2})^{n'} (D_{F'+}^{1/2})^{n} for a declared
    // compositum; D_Q^{1/2} = 1; even powers are rational and vanish.
    bool rule_disc(PeriodMonomial& m)
    {
        for (const auto& [sym, e] : m.exps()) {
            if (sym.kind != PeriodSymbol::Kind::Disc)
                continue;
            const FieldRecord& rec = session_.fields()[sym.field];
            if (rec.degree() == 1) {
                PeriodSymbol lhs = sym;
                m.set_exponent(lhs, Rational(0));
                log("disc", lhs);
                return true;
            }
            if (rec.parent_left && rec.parent_right) {
                PeriodSymbol lhs = sym;
                Rational exp = e;
                int n = session_.fields()[*rec.parent_left].degree();
                int n2 = session_.fields()[*rec.parent_right].degree();
                m.set_exponent(lhs, Rational(0));
                m.multiply_in(PeriodSymbol::disc(*rec.parent_left), exp * Rational(n2));
                m.multiply_in(PeriodSymbol::disc(*rec.parent_right), exp * Rational(n));
                log("disc", lhs);
                return true;
            }
            if (is_integer(e) && (e < Rational(0) || e >= Rational(2))) {
                // (D^{1/2})^{2k} = D^k is rational; keep only the parity.
                PeriodSymbol lhs = sym;
                long long r = to_integer(e) % 2;
                if (r < 0)
                    r += 2;
                m.set_exponent(lhs, Rational(r));
                log("disc", lhs);
                return true;
            }
        }
        return false;
    }

    void absorb(PeriodMonomial& m)
    {
        std::vector<PeriodSymbol> drop;
        for (const auto& [sym, e] : m.exps()) {
            (void)e;
            if (is_absorbable(sym, modulo_, session_))
                drop.push_back(sym);
        }
        for (const auto& sym : drop) {
            m.set_exponent(sym, Rational(0));
            log("absorb", sym);
        }
    }

private:
    void log(const char* rule, const PeriodSymbol& at)
    {
        if (with_trace_)
            trace_.push_back(RewriteStep{rule, render_symbol(at, session_)});
    }

    Session& session_;
    CoeffField modulo_;
    bool with_trace_;
    std::vector<RewriteStep> trace_;
    std::map<PeriodSymbol, std::string> session_absorbables_;
};

inline NormalizeResult normalize(Session& session, const PeriodMonomial& m, const CoeffField& modulo,
                                 bool with_trace = true)
{
    Normalizer n(session, modulo, with_trace);
    return n.run(m);
}

struct EquivalenceResult {
    bool equivalent = false;
    PeriodMonomial residual; // normal form of lhs/rhs; 1 iff equivalent
    std::vector<RewriteStep> trace;
};

inline EquivalenceResult equivalent(Session& session, const PeriodMonomial& lhs, const PeriodMonomial& rhs,
                                    const CoeffField& modulo, bool with_trace = true)
{
    auto r = normalize(session, mono_mul(lhs, mono_inv(rhs)), modulo, with_trace);
    EquivalenceResult out;
    out.equivalent = r.value.is_one();
    out.residual = std::move(r.value);
    out.trace = std::move(r.trace);
    return out;
}

} // namespace periodcalc
