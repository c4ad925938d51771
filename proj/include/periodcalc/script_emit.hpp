#pragma once

#include "dsl.hpp"

#include <string>
#include <vector>

namespace periodcalc::dsl {

// Emitters that render a canned derivation as a replayable script.  The
// emitted text goes through parse/print, so the golden files are in
// canonical form by construction.

namespace emit_detail {

inline AstCharExpr name_expr(const std::string& name)
{
    AstCharExpr e;
    e.k = AstCharExpr::K::Name;
    e.name = name;
    return e;
}

inline AstCharExpr check_expr(AstCharExpr inner)
{
    AstCharExpr e;
    e.k = AstCharExpr::K::Check;
    e.children.push_back(std::move(inner));
    return e;
}

inline AstCharExpr pull_expr(AstCharExpr inner, const std::string& field)
{
    AstCharExpr e;
    e.k = AstCharExpr::K::NormPull;
    e.name = field;
    e.children.push_back(std::move(inner));
    return e;
}

inline AstCharExpr prod_expr(std::vector<AstCharExpr> factors)
{
    if (factors.size() == 1)
        return factors[0];
    AstCharExpr e;
    e.k = AstCharExpr::K::Prod;
    e.children = std::move(factors);
    return e;
}

inline AstSymbol sym_disc(const std::string& field)
{
    AstSymbol s;
    s.k = AstSymbol::K::Disc;
    s.name = field;
    return s;
}

inline AstSymbol sym_gauss(const std::string& name)
{
    AstSymbol s;
    s.k = AstSymbol::K::Gauss;
    s.name = name;
    return s;
}

inline AstSymbol sym_two_pi_i()
{
    AstSymbol s;
    s.k = AstSymbol::K::TwoPiI;
    return s;
}

inline AstSymbol sym_autp(const std::string& rep, int s)
{
    AstSymbol x;
    x.k = AstSymbol::K::AutP;
    x.name = rep;
    x.s = s;
    return x;
}

inline AstSymbol sym_arch(int m, const std::string& rep, const std::string& rep2)
{
    AstSymbol x;
    x.k = AstSymbol::K::Arch;
    x.s = m;
    x.name = rep;
    x.name2 = rep2;
    return x;
}

inline AstSymbol sym_period(AstCharExpr chr, const CMType& psi)
{
    AstSymbol s;
    s.k = AstSymbol::K::P;
    s.chr = std::move(chr);
    s.braces = psi.size() != 1;
    for (auto e : psi.members())
        s.cmtype.push_back(AstEmbedding{e.barred, e.index});
    return s;
}

inline AstCharacter character_stmt(const std::string& name, const std::string& field,
                                   const std::vector<std::pair<Rational, Rational>>& exps, bool csd,
                                   bool supercuspidal)
{
    AstCharacter c;
    c.name = name;
    c.field = field;
    c.exps = exps;
    c.csd = csd;
    c.supercuspidal = supercuspidal;
    return c;
}

inline AstLet let_axiom(const std::string& handle, AstAxiom axiom)
{
    AstLet l;
    l.name = handle;
    l.value = std::move(axiom);
    return l;
}

inline AstLet let_chain(const std::string& handle, std::vector<std::string> handles)
{
    AstLet l;
    l.name = handle;
    AstChain c;
    c.handles = std::move(handles);
    l.value = std::move(c);
    return l;
}

inline AstLet let_solve(const std::string& handle, const std::string& from, AstSymbol sym)
{
    AstLet l;
    l.name = handle;
    AstSolve s;
    s.handle = from;
    s.symbol = std::move(sym);
    l.value = std::move(s);
    return l;
}

// One sub-derivation (three axioms, chain, solve) for AUTP(rep, s); returns
// statements and the handle of the solved relation.
inline std::string emit_period_block(std::vector<AstStatement>& items, const std::string& tag,
                                     const RepSpec& pi, const std::string& rep_name,
                                     const std::string& chi_name, const std::string& field_name,
                                     const std::string& psi_name, int s, const EtaChoice& choice)
{
    std::string eta = "eta_" + tag;
    AstCharacter eta_decl;
    eta_decl.name = eta;
    eta_decl.field = "K";
    eta_decl.exps = {{choice.a, choice.b}};
    items.push_back({eta_decl});

    AstAxiom main;
    main.k = AstAxiom::K::Main;
    main.rep = rep_name;
    main.eta = eta;
    main.at = choice.m;
    items.push_back({let_axiom("m_" + tag, main)});

    AstAxiom ind;
    ind.k = AstAxiom::K::Induction;
    ind.rep = rep_name;
    ind.eta = eta;
    ind.at = choice.m;
    items.push_back({let_axiom("i_" + tag, ind)});

    AstAxiom blasius;
    blasius.k = AstAxiom::K::Blasius;
    if (pi.even_pipeline)
        blasius.chr = prod_expr({name_expr(chi_name),
                                 pull_expr(prod_expr({name_expr(psi_name), name_expr(eta)}), field_name)});
    else
        blasius.chr = prod_expr({name_expr(chi_name), pull_expr(name_expr(eta), field_name)});
    blasius.at = pi.even_pipeline ? choice.m - Rational(1, 2) : choice.m;
    items.push_back({let_axiom("b_" + tag, blasius)});

    items.push_back({let_chain("q_" + tag, {"m_" + tag, "i_" + tag, "b_" + tag})});
    items.push_back({let_solve("r_" + tag, "q_" + tag, sym_autp(rep_name, s))});
    return "r_" + tag;
}

inline AstMonomial period_template_monomial(const RepSpec& pi, const std::string& chi_name,
                                            const std::string& field_name, const std::string& psi_name,
                                            const InfinityType& chi_type, int s)
{
    AstMonomial m;
    const int n = pi.n;
    m.factors.emplace_back(sym_disc(field_name), Rational(1));
    m.factors.emplace_back(sym_gauss("eps_K"), Rational(-(n / 2)));
    if (pi.even_pipeline)
        m.factors.emplace_back(sym_two_pi_i(), Rational(-n, 2));
    m.factors.emplace_back(sym_period(check_expr(name_expr(chi_name)), phi_s(chi_type, s)), Rational(1));
    if (pi.even_pipeline) {
        CMType one(FieldRegistry::base_k(), {EmbeddingRef{1, false}});
        CMType iota(FieldRegistry::base_k(), {EmbeddingRef{1, true}});
        if (s > 0)
            m.factors.emplace_back(sym_period(check_expr(name_expr(psi_name)), one), Rational(s));
        if (s < n)
            m.factors.emplace_back(sym_period(check_expr(name_expr(psi_name)), iota), Rational(n - s));
    }
    return m;
}

} // namespace emit_detail

// Script re-deriving the period relation of P^{(s)}(Pi(chi)) for every
// s = 0..n with two auxiliary characters each.
inline AstSession emit_period_relation_session(int n, const std::vector<Rational>& a,
                                               const std::string& script_name)
{
    using namespace emit_detail;
    // Mirror of the canned derivation setup, used to compute eta choices,
    // the CM types of the targets and the pipeline parity.
    Session scratch;
    CMFieldSpec fs;
    fs.name = "F";
    fs.degree_over_k = n;
    FieldId f = scratch.fields().declare_field(fs);
    scratch.declare_psi("psi");
    BaseCharacter c;
    c.name = "chi";
    c.field = f;
    c.inftype.field = f;
    for (const auto& v : a)
        c.inftype.exps.emplace_back(v, -v);
    c.conj_self_dual = true;
    c.supercuspidal_asserted = true;
    CharId chi = scratch.declare_character(c);
    RepSpec pi = induce(scratch.fields(), scratch.chars(), chi, scratch.psi(), "Pi");
    InfinityType chi_type = scratch.chars().infinity_type(chi);

    AstSession out;
    AstField field;
    field.name = "F";
    field.degree = n;
    field.cyclic = true;
    field.action = GaloisAction::Shift;
    out.statements.push_back({field});
    out.statements.push_back({AstPsi{"psi"}});
    out.statements.push_back({character_stmt("chi", "F", c.inftype.exps, true, true)});
    out.statements.push_back({AstRep{"Pi", "chi"}});

    AstScript script;
    script.name = script_name;
    for (int s = 0; s <= n; ++s) {
        auto choices = auxiliary_character_choices(pi, s, 2);
        for (std::size_t u = 0; u < choices.size(); ++u) {
            std::string tag = "s" + std::to_string(s) + (u == 0 ? "a" : "b");
            std::string handle =
                emit_period_block(script.items, tag, pi, "Pi", "chi", "F", "psi", s, choices[u]);
            AstTarget target;
            target.handle = handle;
            target.lhs.factors.emplace_back(sym_autp("Pi", s), Rational(1));
            target.rhs = period_template_monomial(pi, "chi", "F", "psi", chi_type, s);
            target.modulo = pi.even_pipeline ? std::vector<std::string>{"E(chi)", "E(psi)"}
                                             : std::vector<std::string>{"E(chi)"};
            script.items.push_back({target});
        }
    }
    out.statements.push_back({script});
    return out;
}

// Script solving the archimedean factor of the Rankin-Selberg pairing for
// degrees (n, n-1) at the given m.
inline AstSession emit_archimedean_session(int n, const std::vector<Rational>& a,
                                           const std::vector<Rational>& a2, int m,
                                           const std::string& script_name)
{
    using namespace emit_detail;
    Session scratch;
    CMFieldSpec fs;
    fs.name = "F";
    fs.degree_over_k = n;
    FieldId f = scratch.fields().declare_field(fs);
    CMFieldSpec gs;
    gs.name = "F2";
    gs.degree_over_k = n - 1;
    FieldId f2 = scratch.fields().declare_field(gs);
    scratch.fields().declare_compositum("L", f, f2);
    scratch.declare_psi("psi");
    BaseCharacter c;
    c.name = "chi";
    c.field = f;
    c.inftype.field = f;
    for (const auto& v : a)
        c.inftype.exps.emplace_back(v, -v);
    c.conj_self_dual = true;
    c.supercuspidal_asserted = true;
    CharId chi = scratch.declare_character(c);
    BaseCharacter c2;
    c2.name = "chip";
    c2.field = f2;
    c2.inftype.field = f2;
    for (const auto& v : a2)
        c2.inftype.exps.emplace_back(v, -v);
    c2.conj_self_dual = true;
    c2.supercuspidal_asserted = true;
    CharId chi2 = scratch.declare_character(c2);
    RepSpec pi = induce(scratch.fields(), scratch.chars(), chi, scratch.psi(), "Pi");
    RepSpec pi2 = induce(scratch.fields(), scratch.chars(), chi2, scratch.psi(), "Pip");

    AstSession out;
    AstField field;
    field.name = "F";
    field.degree = n;
    field.cyclic = true;
    field.action = GaloisAction::Shift;
    out.statements.push_back({field});
    AstField field2;
    field2.name = "F2";
    field2.degree = n - 1;
    field2.cyclic = true;
    field2.action = GaloisAction::Shift;
    out.statements.push_back({field2});
    out.statements.push_back({AstCompositum{"L", "F", "F2"}});
    out.statements.push_back({AstPsi{"psi"}});
    out.statements.push_back({character_stmt("chi", "F", c.inftype.exps, true, true)});
    out.statements.push_back({character_stmt("chip", "F2", c2.inftype.exps, true, true)});
    out.statements.push_back({AstRep{"Pi", "chi"}});
    out.statements.push_back({AstRep{"Pip", "chip"}});
    out.statements.push_back({AstCoeff{"E(chi_inf)", ""}});
    out.statements.push_back({AstCoeff{"E(chip_inf)", ""}});

    AstScript script;
    script.name = script_name;

    std::vector<std::string> chain = {"pairing", "ident", "bl"};
    std::vector<AstStatement> blocks;
    for (int j = 1; j <= n - 1; ++j) {
        auto choice = auxiliary_character_choices(pi, j, 1)[0];
        chain.push_back(
            emit_period_block(blocks, "p" + std::to_string(j), pi, "Pi", "chi", "F", "psi", j, choice));
    }
    for (int k = 1; k <= n - 2; ++k) {
        auto choice = auxiliary_character_choices(pi2, k, 1)[0];
        chain.push_back(
            emit_period_block(blocks, "q" + std::to_string(k), pi2, "Pip", "chip", "F2", "psi", k, choice));
    }

    AstAxiom pairing;
    pairing.k = AstAxiom::K::Pairing;
    pairing.rep = "Pi";
    pairing.rep2 = "Pip";
    pairing.at = Rational(m);
    script.items.push_back({let_axiom("pairing", pairing)});

    AstAxiom ident;
    ident.k = AstAxiom::K::PairIdent;
    ident.rep = "Pi";
    ident.rep2 = "Pip";
    ident.at = Rational(m);
    ident.over = "L";
    script.items.push_back({let_axiom("ident", ident)});

    AstAxiom blasius;
    blasius.k = AstAxiom::K::Blasius;
    blasius.chr = prod_expr({pull_expr(name_expr("chi"), "L"), pull_expr(name_expr("chip"), "L"),
                             pull_expr(name_expr("psi"), "L")});
    blasius.at = Rational(m);
    script.items.push_back({let_axiom("bl", blasius)});

    for (auto& st : blocks)
        script.items.push_back(std::move(st));

    script.items.push_back({let_chain("big", chain)});
    script.items.push_back({let_solve("arch", "big", sym_arch(m, "Pi", "Pip"))});

    AstTarget target;
    target.handle = "arch";
    target.lhs.factors.emplace_back(sym_arch(m, "Pi", "Pip"), Rational(1));
    target.rhs.factors.emplace_back(sym_two_pi_i(),
                                    (Rational(m) + Rational(1, 2)) * Rational(n) * Rational(n - 1));
    target.modulo = {"K", "E(chi_inf)", "E(chip_inf)"};
    script.items.push_back({target});

    out.statements.push_back({script});
    return out;
}

} // namespace periodcalc::dsl
