#include "tbpn/cli.hpp"

#include "tbpn/report.hpp"
#include "tbpn/smalllin.hpp"
#include "tbpn/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>

namespace tbpn {

namespace {

struct Options {
    std::string scenario;
    std::string suite = "all";
    std::optional<int> points;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::string json;
    bool quiet = false;
};

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Recursion-operator identity checker", "tbpn"};
    app.require_subcommand(1);
    Options o;
    CLI::App* check = app.add_subcommand("check", "Run check suites on a scenario");
    check->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    std::vector<std::string> suites = suiteNames();
    suites.push_back("all");
    check->add_option("--suite", o.suite, "Suite to run")->check(CLI::IsMember(suites));
    check->add_option("--points", o.points, "Number of sample points")->check(CLI::Range(1, 100000));
    check->add_option("--seed", o.seed, "Sampling seed");
    check->add_option("--tol", o.tol, "Pass tolerance")->check(CLI::PositiveNumber);
    check->add_option("--json", o.json, "Write the JSON report to this path");
    check->add_flag("--quiet", o.quiet, "Print only failures and the summary");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    std::optional<Workspace> ws;
    try {
        Scenario s = loadScenarioFile(o.scenario);
        if (o.points) s.sampling.count = *o.points;
        if (o.seed) s.sampling.seed = *o.seed;
        if (o.tol) s.sampling.tolerance = *o.tol;
        SampleSet samples = sample(s);
        ws.emplace(std::move(s), std::move(samples));
    } catch (const ScenarioError& e) {
        err << "scenario error: " << e.what() << "\n";
        return kExitLoad;
    } catch (const SamplingExhausted& e) {
        err << "scenario error: " << e.what() << "\n";
        return kExitLoad;
    } catch (const SingularHessianError& e) {
        err << "scenario error: " << e.what() << "\n";
        return kExitLoad;
    } catch (const DomainError& e) {
        err << "scenario error: " << e.what() << "\n";
        return kExitLoad;
    }

    CheckReport report;
    try {
        report = runSuites(*ws, o.suite);
    } catch (const NumericError& e) {
        err << "numeric error in " << e.check() << ": " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DomainError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const lin::SingularMatrixError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }

    out << toText(report, o.quiet);
    if (!o.json.empty()) {
        std::ofstream f(o.json, std::ios::binary);
        if (!f) {
            err << "cannot write " << o.json << "\n";
            return kExitUsage;
        }
        f << toJson(report);
    }
    return report.passed() ? kExitOk : kExitCheckFailed;
}

}  // namespace tbpn
