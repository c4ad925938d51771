// Command-line front end for the period calculus engine: session checks,
// critical ranges, normalization, script verification, canned derivations
// and Gauss-sum tables.
//
// Exit codes: 0 = everything verified / informational success,
//             1 = a verification failed,
//             2 = input error (bad flags, parse errors, bad declarations).

#include <periodcalc/periodcalc.hpp>
#include <periodcalc/report.hpp>
#include <periodcalc/script_emit.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace periodcalc;

bool use_color()
{
    const char* env = std::getenv("PERIODCALC_COLOR");
    if (env != nullptr) {
        std::string v = env;
        if (v == "0" || v == "off" || v == "never" || v == "plain")
            return false;
        if (v == "1" || v == "always")
            return true;
    }
    return false; // plain by default; deterministic output for golden files
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Rational> parse_vector(const std::string& text)
{
    std::vector<Rational> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        auto r = parse_rational(item);
        if (!r)
            throw Error("bad rational in list: '" + item + "'");
        out.push_back(*r);
    }
    return out;
}

// Default very-regular conjugate-self-dual exponent vector: multiples of 6.
std::vector<Rational> default_a_vector(int n)
{
    std::vector<Rational> a;
    int top = n - (n - 1) / 2;
    for (int i = 1; i <= n; ++i)
        a.push_back(Rational(6 * (top - i)));
    return a;
}

std::vector<Rational> default_a2_vector(const std::vector<Rational>& a)
{
    std::vector<Rational> a2;
    const int n = static_cast<int>(a.size());
    for (int k = 1; k <= n - 1; ++k)
        a2.push_back(-a[static_cast<std::size_t>(n - k - 1)] + 3);
    return a2;
}

struct SessionContext {
    dsl::AstSession ast;
    dsl::Runner runner;
    std::vector<dsl::ScriptResult> script_results;
};

SessionContext load_session(const std::string& path)
{
    SessionContext ctx;
    ctx.ast = dsl::parse(read_file(path));
    ctx.script_results = ctx.runner.run(ctx.ast);
    return ctx;
}

CharId require_char(const SessionContext& ctx, const std::string& name)
{
    auto id = ctx.runner.session().chars().by_name(name);
    require(id.has_value(), "no character named '" + name + "' in the session");
    return *id;
}

int cmd_check_character(const std::string& session_path, const std::string& char_name, bool json)
{
    SessionContext ctx = load_session(session_path);
    const Session& s = ctx.runner.session();
    CharId id = require_char(ctx, char_name);
    InfinityType t = s.chars().infinity_type(id);
    CharacterPredicates p = predicates(t);

    nlohmann::json j = report_envelope("check-character");
    j["character"] = char_name;
    j["degree"] = t.degree();
    j["algebraic"] = p.algebraic;
    j["motivic"] = p.motivic;
    if (p.motivic)
        j["weight"] = to_string(p.weight);
    j["critical"] = p.critical;
    j["regular"] = p.regular;
    j["conjugate_self_dual"] = p.conjugate_self_dual;
    j["very_regular"] = p.very_regular;
    if (p.critical)
        j["compatible_cm_type"] = render_cm_type(compatible_cm_type(t));
    const auto& rec = s.fields()[t.field];
    if (rec.spec.cyclic_over_k)
        j["primitive_at_infinity_necessary_condition"] = is_primitive_at_infinity(t, s.fields());

    if (json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "character " << char_name << " (degree " << t.degree() << ")\n";
        for (auto key : {"algebraic", "motivic", "critical", "regular", "conjugate_self_dual", "very_regular"})
            std::cout << "  " << key << ": " << (j[key].get<bool>() ? "yes" : "no") << "\n";
        if (p.motivic)
            std::cout << "  weight: " << to_string(p.weight) << "\n";
        if (p.critical)
            std::cout << "  compatible CM type: " << j["compatible_cm_type"].get<std::string>() << "\n";
        if (j.contains("primitive_at_infinity_necessary_condition"))
            std::cout << "  distinct under all Galois twists (necessary condition only): "
                      << (j["primitive_at_infinity_necessary_condition"].get<bool>() ? "yes" : "no") << "\n";
    }
    return 0;
}

int cmd_critical_range(const std::string& session_path, const std::string& char_name,
                       const std::string& rep_name, const std::string& eta_text, bool json)
{
    SessionContext ctx = load_session(session_path);
    const Session& s = ctx.runner.session();
    nlohmann::json j = report_envelope("critical-range");
    CriticalRange range;
    std::string what;
    if (!char_name.empty()) {
        CharId id = require_char(ctx, char_name);
        InfinityType t = s.chars().infinity_type(id);
        range = critical_range_character(t);
        // cross-check against the pointwise criterion
        CriticalRange scanned = oracle_range_scan(hodge_of_character(t));
        require(range == scanned, "internal: closed form disagrees with the oracle scan");
        what = "critical m for L(m, " + char_name + ")";
    } else {
        const RepSpec* rep = s.rep(rep_name);
        require(rep != nullptr, "no representation named '" + rep_name + "' in the session");
        auto ab = parse_vector(eta_text);
        require(ab.size() == 2, "--eta expects 'a,b'");
        InfinityType eta;
        eta.field = FieldRegistry::base_k();
        eta.exps = {{ab[0], ab[1]}};
        range = critical_range_pair(rep->inftype, eta);
        CriticalRange scanned = oracle_range_scan(hodge_of_pair(rep->inftype, eta));
        Rational shift = Rational(rep->n - 1, 2);
        require(range.lo + shift == scanned.lo && range.hi + shift == scanned.hi,
                "internal: pair range disagrees with the oracle scan");
        what = "critical m (shifted by (n-1)/2) for L(m, " + rep_name + " x eta)";
    }
    j["what"] = what;
    j["lo"] = to_string(range.lo);
    j["hi"] = to_string(range.hi);
    j["empty"] = range.empty();
    if (json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << what << ": [" << to_string(range.lo) << ", " << to_string(range.hi) << "]\n";
    return 0;
}

int cmd_induce(const std::string& session_path, const std::string& char_name, bool json)
{
    SessionContext ctx = load_session(session_path);
    Session& s = ctx.runner.session();
    CharId id = require_char(ctx, char_name);
    RepSpec rep = induce(s.fields(), s.chars(), id, s.psi());
    auto mu = highest_weights(rep);

    nlohmann::json j = report_envelope("induce");
    j["character"] = char_name;
    j["n"] = rep.n;
    j["pipeline"] = rep.even_pipeline ? "even" : "odd";
    j["psi_used"] = rep.psi_used;
    nlohmann::json cs = nlohmann::json::array(), mus = nlohmann::json::array();
    for (const auto& c : rep.c())
        cs.push_back(to_string(c));
    for (const auto& x : mu)
        mus.push_back(to_string(x));
    j["infinity_exponents"] = cs;
    j["highest_weights"] = mus;
    if (json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << rep.name << ": degree " << rep.n << ", " << (rep.even_pipeline ? "even" : "odd")
                  << " pipeline" << (rep.psi_used ? " (psi twist)" : "") << "\n  c =";
        for (const auto& c : rep.c())
            std::cout << " " << to_string(c);
        std::cout << "\n  highest weights =";
        for (const auto& x : mu)
            std::cout << " " << to_string(x);
        std::cout << "\n";
    }
    return 0;
}

std::vector<std::string> parse_vector_atoms(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, '*')) {
        while (!item.empty() && item.front() == ' ')
            item.erase(item.begin());
        while (!item.empty() && item.back() == ' ')
            item.pop_back();
        if (!item.empty())
            out.push_back(item);
    }
    if (out.empty())
        out.push_back("Q");
    return out;
}

int cmd_normalize(const std::string& session_path, const std::string& expr, const std::string& modulo,
                  bool json)
{
    std::string source = session_path.empty() ? std::string() : read_file(session_path);
    // Parse the expression in the context of the session by appending a
    // one-assert script, then pull the monomial back out of the AST.
    source += "\nscript normalize_cli_probe {\n  assert " + expr + " ~ 1 modulo Q\n}\n";
    dsl::AstSession ast = dsl::parse(source);
    const auto& script = std::get<dsl::AstScript>(ast.statements.back().node);
    const auto& probe = std::get<dsl::AstAssert>(script.items.back().node);

    dsl::Runner runner;
    dsl::AstSession decls = ast;
    decls.statements.pop_back(); // drop the probe script
    runner.run(decls);

    PeriodMonomial m = runner.elaborate_monomial(probe.lhs);
    CoeffField e;
    for (const auto& atom : parse_vector_atoms(modulo))
        e = e.joined(CoeffField(atom));
    runner.session().lattice().require_declared(e);
    auto result = normalize(runner.session(), m, e);

    nlohmann::json j = report_envelope("normalize");
    j["input"] = expr;
    j["modulo"] = e.to_string();
    j["normal_form"] = result.value.render(runner.session());
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& step : result.trace)
        steps.push_back({{"rule", step.rule}, {"at", step.detail}});
    j["trace"] = steps;
    if (json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "normal form modulo " << e.to_string() << ":\n  " << result.value.render(runner.session())
                  << "\ntrace (" << result.trace.size() << " steps):\n";
        for (const auto& step : result.trace)
            std::cout << "  " << step.rule << "  " << step.detail << "\n";
    }
    return 0;
}

int cmd_verify(std::vector<std::string> paths, bool json)
{
    std::sort(paths.begin(), paths.end());
    bool any_failed = false;
    nlohmann::json j = report_envelope("verify");
    nlohmann::json scripts = nlohmann::json::array();
    for (const auto& path : paths) {
        SessionContext ctx = load_session(path);
        for (const auto& r : ctx.script_results) {
            if (!json)
                print_script_result(std::cout, r, use_color());
            scripts.push_back(to_json(r));
            any_failed = any_failed || r.verdict == Verdict::Failed;
        }
    }
    j["scripts"] = scripts;
    j["verified"] = !any_failed;
    if (json)
        std::cout << j.dump(2) << "\n";
    return any_failed ? 1 : 0;
}

int cmd_derive_period(int n, const std::string& a_text, int only_s, const std::string& emit_path, bool json)
{
    require(n >= 1, "--n must be positive");
    std::vector<Rational> a = a_text.empty() ? default_a_vector(n) : parse_vector(a_text);
    require(static_cast<int>(a.size()) == n, "--a must list n exponents");

    Session session;
    CMFieldSpec fs;
    fs.name = "F";
    fs.degree_over_k = n;
    FieldId f = session.fields().declare_field(fs);
    session.declare_psi("psi");
    BaseCharacter c;
    c.name = "chi";
    c.field = f;
    c.inftype.field = f;
    for (const auto& v : a)
        c.inftype.exps.emplace_back(v, -v);
    c.conj_self_dual = true;
    c.supercuspidal_asserted = true;
    CharId chi = session.declare_character(c);

    bool any_failed = false;
    nlohmann::json j = report_envelope("derive");
    nlohmann::json reports = nlohmann::json::array();
    for (int s = 0; s <= n; ++s) {
        if (only_s >= 0 && s != only_s)
            continue;
        DerivationReport report = derive_period_relation(session, chi, s);
        any_failed = any_failed || report.verdict == Verdict::Failed;
        if (!json)
            print_report(std::cout, session, report, use_color(), false);
        reports.push_back(to_json(session, report, false));
    }
    j["reports"] = reports;
    j["verified"] = !any_failed;
    if (json)
        std::cout << j.dump(2) << "\n";

    if (!emit_path.empty()) {
        auto ast = dsl::emit_period_relation_session(
            n, a, std::string(n % 2 ? "oddfinal" : "evenfinal") + "_n" + std::to_string(n));
        std::ofstream out(emit_path);
        require(static_cast<bool>(out), "cannot write " + emit_path);
        out << dsl::print(ast);
    }
    return any_failed ? 1 : 0;
}

int cmd_derive_arch(int n, int m, const std::string& a_text, const std::string& a2_text,
                    const std::string& emit_path, bool json)
{
    require(n >= 2, "--n must be at least 2");
    std::vector<Rational> a = a_text.empty() ? default_a_vector(n) : parse_vector(a_text);
    require(static_cast<int>(a.size()) == n, "--a must list n exponents");
    std::vector<Rational> a2 = a2_text.empty() ? default_a2_vector(a) : parse_vector(a2_text);
    require(static_cast<int>(a2.size()) == n - 1, "--a2 must list n-1 exponents");

    Session session;
    CMFieldSpec fs;
    fs.name = "F";
    fs.degree_over_k = n;
    FieldId f = session.fields().declare_field(fs);
    CMFieldSpec gs;
    gs.name = "F2";
    gs.degree_over_k = n - 1;
    FieldId f2 = session.fields().declare_field(gs);
    session.fields().declare_compositum("L", f, f2);
    session.declare_psi("psi");
    BaseCharacter c;
    c.name = "chi";
    c.field = f;
    c.inftype.field = f;
    for (const auto& v : a)
        c.inftype.exps.emplace_back(v, -v);
    c.conj_self_dual = true;
    c.supercuspidal_asserted = true;
    CharId chi = session.declare_character(c);
    BaseCharacter c2;
    c2.name = "chip";
    c2.field = f2;
    c2.inftype.field = f2;
    for (const auto& v : a2)
        c2.inftype.exps.emplace_back(v, -v);
    c2.conj_self_dual = true;
    c2.supercuspidal_asserted = true;
    CharId chi2 = session.declare_character(c2);

    DerivationReport report = derive_archimedean(session, chi, chi2, m);
    if (!json)
        print_report(std::cout, session, report, use_color(), false);
    nlohmann::json j = report_envelope("derive");
    j["reports"] = nlohmann::json::array({to_json(session, report, false)});
    j["verified"] = report.verdict != Verdict::Failed;
    j["two_pi_i_exponent"] = to_string(report.solved.rhs.exponent(PeriodSymbol::two_pi_i()));
    if (json)
        std::cout << j.dump(2) << "\n";

    if (!emit_path.empty()) {
        auto ast = dsl::emit_archimedean_session(n, a, a2, m, "arch_n" + std::to_string(n));
        std::ofstream out(emit_path);
        require(static_cast<bool>(out), "cannot write " + emit_path);
        out << dsl::print(ast);
    }
    return report.verdict == Verdict::Failed ? 1 : 0;
}

int cmd_gauss(long long f, bool json)
{
    require(f >= 1, "modulus must be positive");
    DirichletGroup group(f);
    auto chars = all_characters(group);
    nlohmann::json j = report_envelope("gauss");
    j["modulus"] = f;
    nlohmann::json rows = nlohmann::json::array();
    bool all_ok = true;
    for (std::size_t i = 0; i < chars.size(); ++i) {
        const auto& chi = chars[i];
        auto g = gauss_sum(chi);
        auto mc = check_magnitude(chi);
        nlohmann::json row;
        row["index"] = i;
        row["trivial"] = chi.is_trivial();
        row["conductor"] = chi.conductor();
        row["primitive"] = chi.is_primitive();
        row["gauss_re"] = g.real();
        row["gauss_im"] = g.imag();
        if (mc.applicable) {
            row["magnitude_ok"] = mc.passed;
            all_ok = all_ok && mc.passed;
        }
        rows.push_back(row);
        if (!json) {
            std::ostringstream line;
            line << "chi_" << i << ": conductor " << chi.conductor()
                 << (chi.is_primitive() ? " (primitive)" : "") << "  G = " << g.real()
                 << (g.imag() >= 0 ? " + " : " - ") << std::abs(g.imag()) << "i";
            if (mc.applicable)
                line << "  [ |G|^2 - f | = " << mc.deviation << (mc.passed ? " ok" : " FAIL") << " ]";
            std::cout << line.str() << "\n";
        }
    }
    j["characters"] = rows;
    j["verified"] = all_ok;
    if (json)
        std::cout << j.dump(2) << "\n";
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"periodcalc: symbolic calculus for CM and automorphic period relations"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow a subcommand
    bool json = false;
    app.add_flag("--json", json, "emit a machine-readable report");

    std::string session_path, char_name, rep_name, eta_text, expr, modulo = "Q", emit_path;
    std::string a_text, a2_text;
    int n = 3, m = 1, only_s = -1;
    long long gauss_f = 1;
    std::vector<std::string> verify_paths;

    auto* check = app.add_subcommand("check-character", "predicates of a declared character");
    check->add_option("--session", session_path, "session file")->required();
    check->add_option("--char", char_name, "character name")->required();

    auto* crit = app.add_subcommand("critical-range", "critical values of a character or a pair");
    crit->add_option("--session", session_path, "session file")->required();
    crit->add_option("--char", char_name, "character name");
    crit->add_option("--rep", rep_name, "representation name");
    crit->add_option("--eta", eta_text, "auxiliary character exponents a,b");

    auto* ind = app.add_subcommand("induce", "automorphic induction bookkeeping for a character");
    ind->add_option("--session", session_path, "session file")->required();
    ind->add_option("--char", char_name, "character name")->required();

    auto* norm = app.add_subcommand("normalize", "normal form of a period monomial");
    norm->add_option("--session", session_path, "session file with declarations");
    norm->add_option("--expr", expr, "monomial expression")->required();
    norm->add_option("--modulo", modulo, "coefficient field join, e.g. 'K * E(chi)'");

    auto* verify = app.add_subcommand("verify", "replay and check derivation scripts");
    verify->add_option("scripts", verify_paths, "script files")->required()->expected(-1);

    auto* derive = app.add_subcommand("derive", "run a canned derivation");
    derive->require_subcommand(1);
    auto* dodd = derive->add_subcommand("odd", "period relations for odd degree");
    dodd->add_option("--n", n, "degree (odd)")->required();
    dodd->add_option("--a", a_text, "exponent vector a_1,..,a_n (default: gap-6 ladder)");
    dodd->add_option("--s", only_s, "restrict to one s");
    dodd->add_option("--emit-script", emit_path, "write the derivation as a script file");
    auto* deven = derive->add_subcommand("even", "period relations for even degree");
    deven->add_option("--n", n, "degree (even)")->required();
    deven->add_option("--a", a_text, "exponent vector");
    deven->add_option("--s", only_s, "restrict to one s");
    deven->add_option("--emit-script", emit_path, "write the derivation as a script file");
    auto* darch = derive->add_subcommand("arch", "archimedean factor for a degree (n, n-1) pair");
    darch->add_option("--n", n, "degree n")->required();
    darch->add_option("--m", m, "critical offset m >= 0")->required();
    darch->add_option("--a", a_text, "exponent vector for chi");
    darch->add_option("--a2", a2_text, "exponent vector for chi'");
    darch->add_option("--emit-script", emit_path, "write the derivation as a script file");

    auto* gauss = app.add_subcommand("gauss", "Gauss sums of the Dirichlet characters mod f");
    gauss->add_option("modulus", gauss_f, "modulus f")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (check->parsed())
            return cmd_check_character(session_path, char_name, json);
        if (crit->parsed()) {
            if (char_name.empty() == (rep_name.empty() || eta_text.empty()))
                throw Error("critical-range needs either --char or both --rep and --eta");
            return cmd_critical_range(session_path, char_name, rep_name, eta_text, json);
        }
        if (ind->parsed())
            return cmd_induce(session_path, char_name, json);
        if (norm->parsed())
            return cmd_normalize(session_path, expr, modulo, json);
        if (verify->parsed())
            return cmd_verify(verify_paths, json);
        if (derive->parsed()) {
            if (dodd->parsed() || deven->parsed()) {
                bool want_even = deven->parsed();
                require(want_even == (n % 2 == 0), want_even ? "derive even needs an even --n"
                                                             : "derive odd needs an odd --n");
                return cmd_derive_period(n, a_text, only_s, emit_path, json);
            }
            return cmd_derive_arch(n, m, a_text, a2_text, emit_path, json);
        }
        if (gauss->parsed())
            return cmd_gauss(gauss_f, json);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
