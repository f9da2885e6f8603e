#include "tbpn/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tbpn {

using nlohmann::ordered_json;

namespace {

ordered_json vec(const Eigen::VectorXd& v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

// JSON has no infinity; an unevaluable residual is written as a huge number
// so the field stays numeric.
double finite(double x) { return std::isfinite(x) ? x : 1e308; }

std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

}  // namespace

std::string toJson(const CheckReport& report) {
    ordered_json doc;
    doc["scenario"] = report.scenario;
    doc["seed"] = report.seed;
    ordered_json checks = ordered_json::array();
    for (const CheckResult& c : report.checks) {
        ordered_json j;
        j["id"] = c.id;
        j["anchor"] = c.anchor;
        j["residual"] = finite(c.residual);
        j["tol"] = c.tol;
        j["verdict"] = verdictName(c.verdict);
        ordered_json w;
        w["q"] = c.worst ? vec(c.worst->q) : ordered_json::array();
        w["u"] = c.worst ? vec(c.worst->u) : ordered_json::array();
        j["worst_point"] = w;
        if (!c.reason.empty()) j["reason"] = c.reason;
        if (c.expectNegative) j["expect_negative"] = true;
        checks.push_back(j);
    }
    doc["checks"] = checks;
    doc["passed"] = report.passed();
    return doc.dump(2) + "\n";
}

std::string toText(const CheckReport& report, bool quiet) {
    std::ostringstream os;
    int pass = 0, fail = 0, na = 0;
    for (const CheckResult& c : report.checks) {
        switch (c.verdict) {
            case Verdict::Pass: ++pass; break;
            case Verdict::Fail: ++fail; break;
            case Verdict::NotApplicable: ++na; break;
        }
        if (quiet && c.verdict != Verdict::Fail) continue;
        char line[256];
        std::snprintf(line, sizeof line, "%-15s %-28s %-18s", verdictName(c.verdict).c_str(), c.id.c_str(), c.anchor.c_str());
        os << line;
        if (c.verdict == Verdict::NotApplicable)
            os << "  (" << c.reason << ")";
        else
            os << "  residual " << format(c.residual) << (c.expectNegative ? " > " : " <= ") << format(c.tol)
               << (c.expectNegative ? "  [expected violation]" : "");
        os << "\n";
    }
    char summary[256];
    std::snprintf(summary, sizeof summary, "%s [%s, seed %llu]: %d pass, %d fail, %d not applicable in %.3f s\n",
                  report.scenario.c_str(), report.suite.c_str(), static_cast<unsigned long long>(report.seed), pass, fail,
                  na, report.runtimeSeconds);
    os << summary;
    return os.str();
}

}  // namespace tbpn
