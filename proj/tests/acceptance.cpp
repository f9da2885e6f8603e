// One line per acceptance criterion; exits nonzero if any of them fails.

#include "support.hpp"

#include "tbpn/suites.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace tbpn;

namespace {

/// Collects the first few reasons a criterion failed.
struct Outcome {
    bool ok = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what) {
        if (cond) return;
        ok = false;
        if (notes.size() < 4) notes.push_back(what);
    }
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

const CheckResult* findIn(const std::vector<CheckResult>& rs, const std::string& id) {
    for (const auto& r : rs)
        if (r.id == id) return &r;
    return nullptr;
}

/// Requires check `id` to have been evaluated with residual <= bound.
void bounded(Outcome& o, const std::string& scenario, const std::vector<CheckResult>& rs, const std::string& id,
             double bound) {
    const CheckResult* r = findIn(rs, id);
    if (!r) return o.require(false, scenario + " " + id + " missing");
    if (r->verdict == Verdict::NotApplicable) return o.require(false, scenario + " " + id + " not applicable");
    o.require(r->residual <= bound, scenario + " " + id + " = " + num(r->residual));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome derivatives() {
    Outcome o;
    const testing::DerivativeStats st = testing::derivativeOracle(100, 2024);
    const double frac = static_cast<double>(st.agreeing) / st.comparisons;
    o.require(frac >= 0.99, "agreement " + num(frac));
    o.require(st.worstMixed <= 1e-10, "mixed partials " + num(st.worstMixed));
    o.notes.insert(o.notes.begin(), std::to_string(st.agreeing) + "/" + std::to_string(st.comparisons) + " agree");
    return o;
}

Outcome connection() {
    Outcome o;
    for (const char* name : {"E1", "E2", "E3", "E4", "E5", "E6"}) {
        Workspace ws = testing::workspace(name);
        const auto rs = connectionSuite(ws);
        for (const char* id : {"connection/energy", "connection/bianchi", "connection/dvPhi", "connection/DVT"})
            bounded(o, name, rs, id, 1e-8);
        if (ws.riemannian()) {
            for (const char* id : {"connection/Phi(T)", "connection/nablaT", "connection/DHT"}) bounded(o, name, rs, id, 1e-8);
            continue;
        }
        // The suite reports these as not applicable for a general Lagrangian;
        // E6 has a spray quadratic in u, so they are checked here directly.
        const Connection& c = ws.conn();
        const TensorField T = TensorField::vector(Space::Along, c.T());
        std::vector<Expr> phiT;
        for (int i = 0; i < c.n; ++i) {
            Expr t(0.0);
            for (int j = 0; j < c.n; ++j) t = t + c.phi(i, j) * Expr::u(j);
            phiT.push_back(t);
        }
        std::vector<CheckResult> direct;
        direct.push_back(ws.run("connection/Phi(T)", "PhiR", zeroResidual(phiT)));
        direct.push_back(ws.run("connection/nablaT", "covT", zeroResidual(flatten(c.nabla(T)))));
        direct.push_back(ws.run("connection/DHT", "covT", zeroResidual(flatten(c.dh(T)))));
        for (const char* id : {"connection/Phi(T)", "connection/nablaT", "connection/DHT"}) bounded(o, name, direct, id, 1e-8);
    }
    return o;
}

Outcome lifts() {
    Outcome o;
    for (const char* name : {"E1", "E2", "E3", "E4", "E5", "E6"}) {
        Workspace ws = testing::workspace(name);
        const auto rs = liftsSuite(ws);
        for (const char* id : {"lifts/JcS-square", "lifts/N_JcS", "lifts/[Jc,S]", "lifts/omegaL(XV,YH)",
                               "lifts/omega1(XV,YH)", "lifts/Rsymmetry", "lifts/R-frame", "lifts/Ubar=-U"})
            bounded(o, name, rs, id, 1e-8);
    }
    return o;
}

Outcome pullback() {
    Outcome o;
    for (const char* name : {"E1", "E3", "E4", "E6"}) {
        Workspace ws = testing::workspace(name);
        o.require(ws.samples().points.size() == 50, std::string(name) + " sample count");
        bounded(o, name, liftsSuite(ws), "lifts/leg-pullback", 1e-8);
    }
    return o;
}

Outcome nijenhuisR() {
    Outcome o;
    for (const char* name : {"E2", "E3", "E4"}) {
        Workspace ws = testing::workspace(name);
        bounded(o, name, torsionSuite(ws), "torsion/N_R", 1e-8);
    }
    Workspace e5 = testing::workspace("E5");
    const auto rs = torsionSuite(e5);
    const CheckResult* r = findIn(rs, "torsion/N_R");
    o.require(r && r->expectNegative, "E5 torsion/N_R not judged at the probe");
    o.require(r && r->residual >= 0.01, "E5 N_R at the probe = " + (r ? num(r->residual) : std::string("?")));
    return o;
}

Outcome sckFirst() {
    Outcome o;
    Workspace ws = testing::workspace("E3");
    const auto rs = sckSuite(ws);
    for (const char* id : {"sck/scK", "sck/scKU", "sck/PhiJ", "sck/scKR", "sck/gauging2", "sck/gauging"})
        bounded(o, "E3", rs, id, 1e-8);
    bounded(o, "E3", rs, "sck/scKcoord2", 1e-9);
    return o;
}

Outcome sckSecond() {
    Outcome o;
    Workspace ws = testing::workspace("E3");
    const auto rs = sckSuite(ws);
    for (const char* id : {"sck/N_J", "sck/trace", "sck/killing2", "sck/dJdetJ"}) bounded(o, "E3", rs, id, 1e-8);
    return o;
}

Outcome parallel() {
    Outcome o;
    Workspace ws = testing::workspace("E4");
    const auto rs = sckSuite(ws);
    for (const char* id : {"sck/parallel-PhiJ", "sck/parallel-ricci", "sck/parallel-commute"}) bounded(o, "E4", rs, id, 1e-8);
    const double phi = CompiledMatrix(ws.conn().phi)(probePoint(3)).norm();
    o.require(phi > 0.01, "|Phi| at the probe = " + num(phi));
    return o;
}

Outcome eigen() {
    Outcome o;
    for (const char* name : {"E2", "E3"}) {
        Workspace ws = testing::workspace(name);
        const auto rs = eigenSuite(ws);
        bounded(o, name, rs, "eigen/R-vertical", 1e-8);
        bounded(o, name, rs, "eigen/R-horizontal", 1e-8);
        bounded(o, name, rs, "eigen/spectra", 1e-9);
        bounded(o, name, rs, "eigen/separability", 1e-4);
        bounded(o, name, rs, "eigen/haantjes", 1e-8);
    }
    return o;
}

Outcome determinism() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path() / "tbpn_acceptance";
    std::filesystem::create_directories(dir);
    std::vector<std::string> bytes;
    for (int k = 0; k < 2; ++k) {
        const auto out = dir / ("run" + std::to_string(k) + ".json");
        std::filesystem::remove(out);
        const std::string cmd = std::string("\"") + TBPN_CLI + "\" check --scenario \"" + testing::fixturePath("E3") +
                                "\" --seed 11 --quiet --json \"" + out.string() + "\" > /dev/null";
        const int rc = std::system(cmd.c_str());
        o.require(rc == 0, "run " + std::to_string(k) + " exited " + std::to_string(rc));
        bytes.push_back(slurp(out));
    }
    o.require(!bytes[0].empty(), "empty report");
    o.require(bytes[0] == bytes[1], "reports differ");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"derivative oracle", derivatives},
        {"connection identities on E1-E6", connection},
        {"lifts identities on all fixtures", lifts},
        {"Omega-solve R against the Legendre pullback", pullback},
        {"N_R vanishes on E2-E4, not on E5", nijenhuisR},
        {"special conformal Killing consequences on E3", sckFirst},
        {"trace law, N_J and cofactor Killing on E3", sckSecond},
        {"parallel J curvature identities on E4", parallel},
        {"eigenstructure and separability on E2, E3", eigen},
        {"byte-identical JSON across CLI runs", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.ok = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        std::ostringstream line;
        line << (o.ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first;
        for (const auto& n : o.notes) line << " | " << n;
        std::cout << line.str() << "\n";
        if (!o.ok) ++failed;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
    return failed == 0 ? 0 : 1;
}
