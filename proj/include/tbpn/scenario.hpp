#pragma once

// Scenario data model: base dimension, Lagrangian (or metric), the (1,1)
// tensor J on the base, an optional base function f, and the sampling setup.

#include "tbpn/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tbpn {

enum class Mode { Riemannian, Lagrangian };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct SamplingConfig {
    int count = 50;
    std::uint64_t seed = 42;
    std::vector<Interval> qBox;  // default [0.3, 1.2]^n
    std::vector<Interval> uBox;  // default [-1, 1]^n
    double tolerance = 1e-8;
};

struct Scenario {
    std::string name;
    int n = 0;
    Mode mode = Mode::Riemannian;
    ExprMatrix metric;  // riemannian mode only
    Expr lagrangian;    // synthesized as g_ij u^i u^j / 2 in riemannian mode
    ExprMatrix J;       // functions of q only
    std::optional<Expr> f;
    SamplingConfig sampling;
    /// Check ids whose expected outcome is a violation.
    std::vector<std::string> expectNegative;
};

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses a scenario JSON document; errors carry the offending field path.
Scenario loadScenario(const std::string& json);
Scenario loadScenarioFile(const std::filesystem::path& path);

/// Builds a scenario in code. The Lagrangian is synthesized from the metric.
Scenario makeRiemannian(std::string name, const ExprMatrix& metric, const ExprMatrix& J, std::optional<Expr> f = {});
Scenario makeLagrangian(std::string name, int n, const Expr& lagrangian, const ExprMatrix& J, std::optional<Expr> f = {});

/// g_ij = d^2 L / du^i du^j, as a (0,2) field along tau.
TensorField hessianMetric(const Scenario& s);

/// splitmix64; uniform doubles are (x >> 11) * 2^-53.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();

private:
    std::uint64_t state_;
};

struct SampleSet {
    std::vector<Point> points;
    std::uint64_t seed = 0;
};

class SamplingExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Draws `count` points: for each attempt, q components then u components,
/// uniform in their boxes. Points with |det g| <= 1e-6 (or where g cannot be
/// evaluated) are rejected; at most 100*count attempts.
SampleSet sample(const Scenario& s);
SampleSet sample(const Scenario& s, int count, std::uint64_t seed);

/// Fixed probe point for negative checks: q = (0.7, 0.9, 0.8, 0.6),
/// u = (0.4, -0.6, 0.5, -0.3), truncated to n.
Point probePoint(int n);

}  // namespace tbpn
