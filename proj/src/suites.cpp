#include "tbpn/suites.hpp"

#include <chrono>
#include <stdexcept>

namespace tbpn {

const std::vector<std::string>& suiteNames() {
    static const std::vector<std::string> names = {"connection", "lifts", "torsion", "sck", "eigen"};
    return names;
}

CheckReport runSuites(Workspace& ws, const std::string& suite) {
    using Suite = std::vector<CheckResult> (*)(Workspace&);
    static const std::vector<std::pair<std::string, Suite>> table = {
        {"connection", connectionSuite}, {"lifts", liftsSuite}, {"torsion", torsionSuite},
        {"sck", sckSuite},               {"eigen", eigenSuite},
    };
    const auto start = std::chrono::steady_clock::now();
    CheckReport report;
    report.scenario = ws.scenario().name;
    report.suite = suite;
    report.seed = ws.samples().seed;
    bool found = false;
    for (const auto& [name, fn] : table) {
        if (suite != "all" && suite != name) continue;
        found = true;
        for (auto& r : fn(ws)) report.checks.push_back(std::move(r));
    }
    if (!found) throw std::invalid_argument("unknown suite '" + suite + "'");
    report.runtimeSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace tbpn
