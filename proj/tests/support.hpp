#pragma once

// Shared fixtures and independent numeric oracles for the tests.

#include "tbpn/checks.hpp"
#include "tbpn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace tbpn::testing {

inline std::string fixturePath(const std::string& name) { return std::string(TBPN_FIXTURES) + "/" + name + ".json"; }

inline Scenario fixture(const std::string& name) { return loadScenarioFile(fixturePath(name)); }

inline Workspace workspace(const std::string& name) {
    Scenario s = fixture(name);
    SampleSet pts = sample(s);
    return Workspace(std::move(s), std::move(pts));
}

inline Workspace workspace(Scenario s) {
    SampleSet pts = sample(s);
    return Workspace(std::move(s), std::move(pts));
}

inline Point point(std::vector<double> q, std::vector<double> u) {
    Point p{Eigen::VectorXd(q.size()), Eigen::VectorXd(u.size())};
    for (std::size_t i = 0; i < q.size(); ++i) p.q[i] = q[i];
    for (std::size_t i = 0; i < u.size(); ++i) p.u[i] = u[i];
    return p;
}

inline ExprMatrix parseMatrix(const std::vector<std::vector<std::string>>& rows, int n) {
    ExprMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = parse(rows[i][j], n);
    return m;
}

/// Central difference of `e` in variable v with step h = 1e-5 (1 + |x|).
inline double centralDifference(const Expr& e, const Point& p, Var v) {
    Point a = p, b = p;
    Eigen::VectorXd& ra = v.kind == VarKind::Base ? a.q : a.u;
    Eigen::VectorXd& rb = v.kind == VarKind::Base ? b.q : b.u;
    const double x = p[v];
    const double h = 1e-5 * (1.0 + std::abs(x));
    ra[v.index] = x + h;
    rb[v.index] = x - h;
    return (eval(e, a) - eval(e, b)) / (2.0 * h);
}

/// Every expression string found in a fixture, paired with its dimension.
struct CorpusEntry {
    std::string text;
    int n;
};

inline std::vector<CorpusEntry> fixtureCorpus() {
    std::vector<CorpusEntry> out;
    auto add = [&out](const std::string& t, int n) { out.push_back({t, n}); };
    add("1", 2);
    add("0", 2);
    add("q1^2 + 1", 2);
    add("q1*q2", 2);
    add("q2^2 + 1", 2);
    add("q1^2 + q2^2", 2);
    add("5", 2);
    add("q2", 2);
    add("(u1^2 + u2^2)/2 + u1^4/4", 2);
    add("sin(q1)^2", 3);
    add("2", 3);
    add("4", 3);
    // Lagrangians synthesized from the fixture metrics, and a few
    // expressions that exercise every grammar production.
    add("(u1^2 + u2^2)/2", 2);
    add("(u1^2 + sin(q1)^2*u2^2 + u3^2)/2", 3);
    add("q1^(1/2) * exp(-q2) + log(q1 + q2)", 2);
    add("tan(q1/2) - cos(q2*u1) / sqrt(1 + u2^2)", 2);
    add("(q1*u2 - q2*u1)^3 / (1 + q1^2)", 2);
    add("-q1^-2 + q2^0.5", 2);
    return out;
}

struct DerivativeStats {
    int comparisons = 0;
    int agreeing = 0;         // within 1e-5 relative of the central difference
    double worstMixed = 0.0;  // largest scaled gap between d_a d_b e and d_b d_a e
};

/// Symbolic first derivatives against central differences, and mixed second
/// partials against each other, for the whole corpus at `perExpr` points drawn
/// from q in [0.3, 1.2], u in [-1, 1].
inline DerivativeStats derivativeOracle(int perExpr, std::uint64_t seed) {
    DerivativeStats st;
    SplitMix64 rng(seed);
    for (const CorpusEntry& c : fixtureCorpus()) {
        const Expr e = parse(c.text, c.n);
        std::vector<Var> vars;
        for (int i = 0; i < c.n; ++i) vars.push_back(Var::q(i));
        for (int i = 0; i < c.n; ++i) vars.push_back(Var::u(i));
        for (int k = 0; k < perExpr; ++k) {
            Point p{Eigen::VectorXd(c.n), Eigen::VectorXd(c.n)};
            for (int i = 0; i < c.n; ++i) p.q[i] = 0.3 + 0.9 * rng.uniform();
            for (int i = 0; i < c.n; ++i) p.u[i] = -1.0 + 2.0 * rng.uniform();
            for (Var a : vars) {
                const Expr da = diff(e, a);
                const double sym = eval(da, p);
                const double fd = centralDifference(e, p, a);
                ++st.comparisons;
                if (std::abs(sym - fd) <= 1e-5 * (1.0 + std::max(std::abs(sym), std::abs(fd)))) ++st.agreeing;
                for (Var b : vars) {
                    const double ab = eval(diff(da, b), p);
                    const double ba = eval(diff(diff(e, b), a), p);
                    st.worstMixed = std::max(st.worstMixed, scaledDiff(ab, ba));
                }
            }
        }
    }
    return st;
}

}  // namespace tbpn::testing
