#pragma once

// Residual checks over a sample set, the shared workspace of symbolic objects
// the suites draw on, and the report they produce.

#include "tbpn/lifts.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tbpn {

enum class Verdict { Pass, Fail, NotApplicable };
std::string verdictName(Verdict v);

struct CheckResult {
    std::string id;
    std::string anchor;
    double residual = 0.0;
    double tol = 0.0;
    Verdict verdict = Verdict::NotApplicable;
    std::optional<Point> worst;
    std::string reason;
    /// Judged at the probe point: passes when the residual exceeds tol.
    bool expectNegative = false;
};

struct CheckReport {
    std::string scenario;
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    double runtimeSeconds = 0.0;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] const CheckResult* find(const std::string& id) const;
};

/// Residual of one check at one point (scale-aware, non-negative).
using Residual = std::function<double(const Point&)>;

/// Componentwise identity lhs = rhs between symbolic arrays.
struct Identity {
    std::vector<Expr> lhs;
    std::vector<Expr> rhs;

    void add(const Expr& l, const Expr& r) {
        lhs.push_back(l);
        rhs.push_back(r);
    }
    [[nodiscard]] std::function<double(const Point&)> residual() const;
};

/// max_k |lhs_k - rhs_k| / (1 + max(|lhs_k|, |rhs_k|)), all compiled into one tape.
Residual pairResidual(const std::vector<Expr>& lhs, const std::vector<Expr>& rhs);
Residual zeroResidual(const std::vector<Expr>& exprs);
/// Scale-aware difference of two numerically computed matrices.
Residual matrixResidual(std::function<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(const Point&)> sides);
/// max_k |e_k|, unscaled.
Residual absResidual(const std::vector<Expr>& exprs);

/// Residual of the equivalence "a vanishes iff b vanishes" at a point: zero
/// when both sides land on the same side of tol, otherwise the larger side.
Residual equivalence(std::function<std::pair<double, double>(const Point&)> sides, double tol);

std::vector<Expr> flatten(const ExprMatrix& m);
std::vector<Expr> flatten(const TensorField& t);
std::vector<Expr> flatten(const Form& f);

/// Raised when a residual cannot be evaluated (domain error, singular solve).
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& check, const std::string& what)
        : std::runtime_error("check " + check + ": " + what), check_(check) {}
    [[nodiscard]] const std::string& check() const { return check_; }

private:
    std::string check_;
};

/// Everything the suites share for one scenario; symbolic objects are built
/// on first use. Not thread-safe.
class Workspace {
public:
    Workspace(Scenario s, SampleSet samples);

    const Scenario& scenario() const { return s_; }
    const Connection& conn() const { return conn_; }
    const SampleSet& samples() const { return samples_; }
    int n() const { return s_.n; }
    bool riemannian() const { return s_.mode == Mode::Riemannian; }
    double tolerance() const { return tol_; }
    void setTolerance(double t) { tol_ = t; }

    /// Declared f, or tr J when none is given.
    const Expr& f();
    bool fDeclared() const { return s_.f.has_value(); }

    const ExprMatrix& J() const { return s_.J; }
    const ExprMatrix& Jbar();
    const ExprMatrix& U();
    const ExprMatrix& Jc();
    const ExprMatrix& S();
    /// Symbolic R: closed form in riemannian mode, Legendre pullback otherwise.
    const ExprMatrix& R();
    const ExprMatrix& lieGammaR();
    const PoincareCartan& forms();
    const RSolver& rsolver();
    /// D^H J with components (m, j, k) = J^m_{j|k}.
    const TensorField& dhJ();
    const TensorField& nablaJ();
    const TensorField& nijenhuisJ();

    /// Runs a residual over the sample set, or at the probe point for
    /// expected-negative ids.
    CheckResult run(const std::string& id, const std::string& anchor, const Residual& r, double tolFactor = 1.0,
                    double negativeThreshold = 1e-3);
    /// As run(), over a subset of the sample points.
    CheckResult runOn(const std::vector<Point>& points, const std::string& id, const std::string& anchor,
                      const Residual& r, double tolFactor = 1.0, double negativeThreshold = 1e-3);
    static CheckResult notApplicable(const std::string& id, const std::string& anchor, std::string reason);
    bool expectedNegative(const std::string& id) const;

private:
    Scenario s_;
    SampleSet samples_;
    Connection conn_;
    double tol_;
    std::optional<Expr> f_;
    std::optional<ExprMatrix> jbar_, u_, jc_, s_mat_, r_, lgr_;
    std::optional<PoincareCartan> forms_;
    std::optional<RSolver> rsolver_;
    std::optional<TensorField> dhJ_, nablaJ_, nj_;
};

/// Max of a residual over points, with the worst point.
struct MaxResidual {
    double value = 0.0;
    Point worst;
};
MaxResidual maxOver(const std::vector<Point>& points, const Residual& r);

}  // namespace tbpn
