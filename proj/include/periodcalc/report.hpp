#pragma once

#include "derivations.hpp"
#include "dsl.hpp"

#include <json.hpp>

#include <ostream>

namespace periodcalc {

// Text/JSON rendering of derivation reports and script results.  The JSON
// mirror carries every field of the text report; the schema is versioned.

inline constexpr int report_schema_version = 1;

inline nlohmann::json to_json(const Session& session, const Relation& rel)
{
    nlohmann::json j;
    j["lhs"] = rel.lhs.render(session);
    j["rhs"] = rel.rhs.render(session);
    j["modulo"] = rel.modulo.to_string();
    if (!rel.provenance.empty())
        j["provenance"] = rel.provenance;
    if (!rel.annotations.empty())
        j["annotations"] = rel.annotations;
    return j;
}

inline nlohmann::json to_json(const Session& session, const DerivationReport& report, bool with_trace = true)
{
    nlohmann::json j;
    j["name"] = report.name;
    j["verdict"] = to_string(report.verdict);
    j["solved"] = to_json(session, report.solved);
    if (!report.residual.is_one())
        j["residual"] = report.residual.render(session);
    j["assumptions"] = report.assumptions;
    j["asserted_hypotheses"] = report.asserted_hypotheses;
    j["eta_choices"] = report.eta_choices;
    if (with_trace) {
        nlohmann::json steps = nlohmann::json::array();
        for (const auto& step : report.trace)
            steps.push_back({{"rule", step.rule}, {"at", step.detail}});
        j["trace"] = steps;
    }
    return j;
}

inline nlohmann::json to_json(const dsl::ScriptResult& result)
{
    nlohmann::json j;
    j["script"] = result.name;
    j["verdict"] = to_string(result.verdict);
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : result.checks) {
        nlohmann::json line;
        line["what"] = c.what;
        line["passed"] = c.passed;
        if (!c.detail.empty())
            line["detail"] = c.detail;
        checks.push_back(line);
    }
    j["checks"] = checks;
    j["assumptions"] = result.assumptions;
    return j;
}

inline nlohmann::json report_envelope(const std::string& command)
{
    nlohmann::json j;
    j["schema"] = report_schema_version;
    j["command"] = command;
    return j;
}

inline void print_report(std::ostream& os, const Session& session, const DerivationReport& report,
                         bool color, bool with_trace)
{
    auto paint = [&](const char* code, const std::string& text) {
        return color ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
    };
    std::string verdict = to_string(report.verdict);
    os << report.name << ": "
       << (report.verdict == Verdict::Failed ? paint("31", verdict) : paint("32", verdict)) << "\n";
    os << "  " << report.solved.lhs.render(session) << " ~ " << report.solved.rhs.render(session) << "  modulo "
       << report.solved.modulo.to_string() << "\n";
    if (!report.residual.is_one())
        os << "  residual: " << report.residual.render(session) << "\n";
    for (const auto& a : report.assumptions)
        os << "  assumption: " << a << "\n";
    for (const auto& h : report.asserted_hypotheses)
        os << "  asserted: " << h << "\n";
    for (const auto& e : report.eta_choices)
        os << "  auxiliary: " << e << "\n";
    if (with_trace) {
        os << "  trace (" << report.trace.size() << " steps):\n";
        for (const auto& step : report.trace)
            os << "    " << step.rule << "  " << step.detail << "\n";
    }
}

inline void print_script_result(std::ostream& os, const dsl::ScriptResult& result, bool color)
{
    auto paint = [&](const char* code, const std::string& text) {
        return color ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
    };
    std::string verdict = to_string(result.verdict);
    os << result.name << ": "
       << (result.verdict == Verdict::Failed ? paint("31", verdict) : paint("32", verdict)) << "\n";
    for (const auto& c : result.checks)
        os << "  " << (c.passed ? paint("32", "ok  ") : paint("31", "FAIL")) << " " << c.what
           << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
    for (const auto& a : result.assumptions)
        os << "  assumption: " << a << "\n";
}

} // namespace periodcalc
