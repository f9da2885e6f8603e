#include "tbpn/scenario.hpp"

#include "tbpn/smalllin.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace tbpn {

using nlohmann::json;

namespace {

Expr kineticLagrangian(const ExprMatrix& g) {
    const int n = static_cast<int>(g.rows());
    Expr l(0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) l = l + Expr(0.5) * g(i, j) * Expr::u(i) * Expr::u(j);
    return l;
}

void requireBaseOnly(const Expr& e, const std::string& path) {
    if (dependsOnFiber(e)) throw ScenarioError(path + ": must depend on q only");
}

Expr parseField(const json& doc, const std::string& path, int n) {
    if (!doc.is_string()) throw ScenarioError(path + ": expected an expression string");
    try {
        return parse(doc.get<std::string>(), n);
    } catch (const ParseError& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

ExprMatrix parseMatrix(const json& doc, const std::string& path, int n) {
    if (!doc.is_array() || static_cast<int>(doc.size()) != n)
        throw ScenarioError(path + ": dimension mismatch, expected " + std::to_string(n) + " rows");
    ExprMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = doc[i];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ScenarioError(rp + ": dimension mismatch, expected " + std::to_string(n) + " columns");
        for (int j = 0; j < n; ++j) m(i, j) = parseField(row[j], rp + "[" + std::to_string(j) + "]", n);
    }
    return m;
}

std::vector<Interval> parseBox(const json& doc, const std::string& path, int n) {
    if (!doc.is_array() || static_cast<int>(doc.size()) != n)
        throw ScenarioError(path + ": dimension mismatch, expected " + std::to_string(n) + " intervals");
    std::vector<Interval> box;
    for (int i = 0; i < n; ++i) {
        const json& iv = doc[i];
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
            throw ScenarioError(path + "[" + std::to_string(i) + "]: expected [lo, hi]");
        Interval v{iv[0].get<double>(), iv[1].get<double>()};
        if (!(v.lo <= v.hi)) throw ScenarioError(path + "[" + std::to_string(i) + "]: lo > hi");
        box.push_back(v);
    }
    return box;
}

SamplingConfig defaultSampling(int n) {
    SamplingConfig c;
    c.qBox.assign(static_cast<std::size_t>(n), Interval{0.3, 1.2});
    c.uBox.assign(static_cast<std::size_t>(n), Interval{-1.0, 1.0});
    return c;
}

}  // namespace

Scenario makeRiemannian(std::string name, const ExprMatrix& metric, const ExprMatrix& J, std::optional<Expr> f) {
    Scenario s;
    s.name = std::move(name);
    s.n = static_cast<int>(metric.rows());
    s.mode = Mode::Riemannian;
    s.metric = metric;
    s.lagrangian = kineticLagrangian(metric);
    s.J = J;
    s.f = std::move(f);
    s.sampling = defaultSampling(s.n);
    return s;
}

Scenario makeLagrangian(std::string name, int n, const Expr& lagrangian, const ExprMatrix& J, std::optional<Expr> f) {
    Scenario s;
    s.name = std::move(name);
    s.n = n;
    s.mode = Mode::Lagrangian;
    s.lagrangian = lagrangian;
    s.J = J;
    s.f = std::move(f);
    s.sampling = defaultSampling(n);
    return s;
}

Scenario loadScenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("$: expected an object");

    auto need = [&](const char* key) -> const json& {
        if (!doc.contains(key)) throw ScenarioError(std::string("$.") + key + ": missing");
        return doc[key];
    };

    const json& name = need("name");
    if (!name.is_string()) throw ScenarioError("$.name: expected a string");
    const json& dim = need("dim");
    if (!dim.is_number_integer()) throw ScenarioError("$.dim: expected an integer");
    const int n = dim.get<int>();
    if (n < 1 || n > 4) throw ScenarioError("$.dim: must be between 1 and 4");

    const json& mode = need("mode");
    if (!mode.is_string() || (mode != "riemannian" && mode != "lagrangian"))
        throw ScenarioError("$.mode: expected \"riemannian\" or \"lagrangian\"");

    const ExprMatrix J = parseMatrix(need("J"), "$.J", n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) requireBaseOnly(J(i, j), "$.J[" + std::to_string(i) + "][" + std::to_string(j) + "]");

    std::optional<Expr> f;
    if (doc.contains("f") && !doc["f"].is_null()) {
        f = parseField(doc["f"], "$.f", n);
        requireBaseOnly(*f, "$.f");
    }

    Scenario s;
    if (mode == "riemannian") {
        if (doc.contains("lagrangian")) throw ScenarioError("$.lagrangian: not allowed in riemannian mode");
        const ExprMatrix g = parseMatrix(need("metric"), "$.metric", n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) requireBaseOnly(g(i, j), "$.metric[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        s = makeRiemannian(name.get<std::string>(), g, J, f);
    } else {
        if (doc.contains("metric")) throw ScenarioError("$.metric: not allowed in lagrangian mode");
        s = makeLagrangian(name.get<std::string>(), n, parseField(need("lagrangian"), "$.lagrangian", n), J, f);
    }

    if (doc.contains("sampling")) {
        const json& sm = doc["sampling"];
        if (!sm.is_object()) throw ScenarioError("$.sampling: expected an object");
        if (sm.contains("count")) {
            if (!sm["count"].is_number_integer() || sm["count"].get<int>() < 1)
                throw ScenarioError("$.sampling.count: expected a positive integer");
            s.sampling.count = sm["count"].get<int>();
        }
        if (sm.contains("seed")) {
            if (!sm["seed"].is_number_unsigned()) throw ScenarioError("$.sampling.seed: expected a non-negative integer");
            s.sampling.seed = sm["seed"].get<std::uint64_t>();
        }
        if (sm.contains("q_box")) s.sampling.qBox = parseBox(sm["q_box"], "$.sampling.q_box", n);
        if (sm.contains("u_box")) s.sampling.uBox = parseBox(sm["u_box"], "$.sampling.u_box", n);
        if (sm.contains("tolerance")) {
            if (!sm["tolerance"].is_number() || !(sm["tolerance"].get<double>() > 0.0))
                throw ScenarioError("$.sampling.tolerance: expected a positive number");
            s.sampling.tolerance = sm["tolerance"].get<double>();
        }
    }

    if (doc.contains("expect")) {
        const json& ex = doc["expect"];
        if (!ex.is_object()) throw ScenarioError("$.expect: expected an object");
        if (ex.contains("negative")) {
            if (!ex["negative"].is_array()) throw ScenarioError("$.expect.negative: expected an array of check ids");
            for (const json& id : ex["negative"]) {
                if (!id.is_string()) throw ScenarioError("$.expect.negative: expected strings");
                s.expectNegative.push_back(id.get<std::string>());
            }
        }
    }
    return s;
}

Scenario loadScenarioFile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return loadScenario(buf.str());
}

TensorField hessianMetric(const Scenario& s) {
    TensorField g = TensorField::zero(Space::Along, s.n, 0, 2);
    for (int i = 0; i < s.n; ++i) {
        const Expr li = diff(s.lagrangian, Var::u(i));
        for (int j = i; j < s.n; ++j) {
            const Expr gij = diff(li, Var::u(j));
            g({i, j}) = gij;
            g({j, i}) = gij;
        }
    }
    return g;
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

SampleSet sample(const Scenario& s) { return sample(s, s.sampling.count, s.sampling.seed); }

SampleSet sample(const Scenario& s, int count, std::uint64_t seed) {
    const CompiledMatrix g(s.mode == Mode::Riemannian ? s.metric : hessianMetric(s).matrix());
    SplitMix64 rng(seed);
    SampleSet out;
    out.seed = seed;
    const long cap = 100L * count;
    for (long attempt = 0; static_cast<int>(out.points.size()) < count; ++attempt) {
        if (attempt >= cap)
            throw SamplingExhausted("sampling exhausted for scenario '" + s.name + "': " + std::to_string(out.points.size()) +
                                    " of " + std::to_string(count) + " points accepted after " + std::to_string(cap) + " attempts");
        Point p{Eigen::VectorXd(s.n), Eigen::VectorXd(s.n)};
        for (int i = 0; i < s.n; ++i) p.q[i] = s.sampling.qBox[i].lo + (s.sampling.qBox[i].hi - s.sampling.qBox[i].lo) * rng.uniform();
        for (int i = 0; i < s.n; ++i) p.u[i] = s.sampling.uBox[i].lo + (s.sampling.uBox[i].hi - s.sampling.uBox[i].lo) * rng.uniform();
        try {
            const double det = lin::determinant(g(p));
            if (!(std::abs(det) > 1e-6)) continue;
        } catch (const DomainError&) {
            continue;
        }
        out.points.push_back(std::move(p));
    }
    return out;
}

Point probePoint(int n) {
    static constexpr double q[] = {0.7, 0.9, 0.8, 0.6};
    static constexpr double u[] = {0.4, -0.6, 0.5, -0.3};
    Point p{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        p.q[i] = q[i % 4];
        p.u[i] = u[i % 4];
    }
    return p;
}

}  // namespace tbpn
