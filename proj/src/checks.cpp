#include "tbpn/checks.hpp"

#include "tbpn/smalllin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace tbpn {

std::string verdictName(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NotApplicable: return "not-applicable";
    }
    return "?";
}

bool CheckReport::passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.verdict == Verdict::Fail; });
}

const CheckResult* CheckReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

Residual pairResidual(const std::vector<Expr>& lhs, const std::vector<Expr>& rhs) {
    if (lhs.size() != rhs.size()) throw std::invalid_argument("pairResidual: size mismatch");
    std::vector<Expr> all = lhs;
    all.insert(all.end(), rhs.begin(), rhs.end());
    auto tape = std::make_shared<const Tape>(all);
    const std::size_t m = lhs.size();
    return [tape, m](const Point& p) {
        const std::vector<double> v = tape->evaluate(p);
        double worst = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double d = scaledDiff(v[k], v[m + k]);
            if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, d);
        }
        return worst;
    };
}

std::function<double(const Point&)> Identity::residual() const { return pairResidual(lhs, rhs); }

Residual zeroResidual(const std::vector<Expr>& exprs) {
    return pairResidual(exprs, std::vector<Expr>(exprs.size(), Expr(0.0)));
}

Residual absResidual(const std::vector<Expr>& exprs) {
    auto tape = std::make_shared<const Tape>(exprs);
    return [tape](const Point& p) {
        double worst = 0.0;
        for (double v : tape->evaluate(p)) {
            if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::abs(v));
        }
        return worst;
    };
}

Residual matrixResidual(std::function<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(const Point&)> sides) {
    return [sides = std::move(sides)](const Point& p) {
        const auto [a, b] = sides(p);
        return lin::maxScaledDiff(a, b);
    };
}

Residual equivalence(std::function<std::pair<double, double>(const Point&)> sides, double tol) {
    return [sides = std::move(sides), tol](const Point& p) {
        const auto [a, b] = sides(p);
        return (a <= tol) == (b <= tol) ? 0.0 : std::max(a, b);
    };
}

std::vector<Expr> flatten(const ExprMatrix& m) { return {m.data(), m.data() + m.size()}; }
std::vector<Expr> flatten(const TensorField& t) { return t.comps; }
std::vector<Expr> flatten(const Form& f) { return f.components(); }

MaxResidual maxOver(const std::vector<Point>& points, const Residual& r) {
    MaxResidual out;
    bool first = true;
    for (const Point& p : points) {
        const double v = r(p);
        if (first || v > out.value || (std::isnan(v) && !std::isnan(out.value))) {
            out.value = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
            out.worst = p;
            first = false;
        }
    }
    return out;
}

Workspace::Workspace(Scenario s, SampleSet samples)
    : s_(std::move(s)), samples_(std::move(samples)), conn_(s_), tol_(s_.sampling.tolerance) {}

const Expr& Workspace::f() {
    if (!f_) f_ = s_.f ? *s_.f : trace(s_.J);
    return *f_;
}

const ExprMatrix& Workspace::Jbar() {
    if (!jbar_) jbar_ = transposeJ(conn_, s_.J);
    return *jbar_;
}

const ExprMatrix& Workspace::U() {
    if (!u_) u_ = riemannian() ? computeURiemannian(conn_, s_.J) : computeU(conn_, s_.J);
    return *u_;
}

const ExprMatrix& Workspace::Jc() {
    if (!jc_) jc_ = completeLiftJ(s_.J);
    return *jc_;
}

const ExprMatrix& Workspace::S() {
    if (!s_mat_) s_mat_ = verticalEndomorphism(s_.n);
    return *s_mat_;
}

const ExprMatrix& Workspace::R() {
    if (!r_) r_ = riemannian() ? closedFormR(conn_, s_.J, U()) : legendrePullbackR(conn_, s_.J);
    return *r_;
}

const ExprMatrix& Workspace::lieGammaR() {
    if (!lgr_) lgr_ = lieDerivative(conn_.totalChart(), conn_.spray(), R(), conn_.cache());
    return *lgr_;
}

const PoincareCartan& Workspace::forms() {
    if (!forms_) forms_ = poincareCartan(conn_, s_.J);
    return *forms_;
}

const RSolver& Workspace::rsolver() {
    if (!rsolver_) rsolver_.emplace(forms().omegaL, forms().omega1);
    return *rsolver_;
}

const TensorField& Workspace::dhJ() {
    if (!dhJ_) dhJ_ = conn_.dh(TensorField::fromMatrix(Space::Along, s_.J, 1, 1));
    return *dhJ_;
}

const TensorField& Workspace::nablaJ() {
    if (!nablaJ_) nablaJ_ = conn_.nabla(TensorField::fromMatrix(Space::Along, s_.J, 1, 1));
    return *nablaJ_;
}

const TensorField& Workspace::nijenhuisJ() {
    if (!nj_) nj_ = nijenhuis(Chart{s_.n, Space::Base}, s_.J, conn_.cache());
    return *nj_;
}

bool Workspace::expectedNegative(const std::string& id) const {
    return std::find(s_.expectNegative.begin(), s_.expectNegative.end(), id) != s_.expectNegative.end();
}

CheckResult Workspace::run(const std::string& id, const std::string& anchor, const Residual& r, double tolFactor,
                           double negativeThreshold) {
    return runOn(samples_.points, id, anchor, r, tolFactor, negativeThreshold);
}

CheckResult Workspace::runOn(const std::vector<Point>& points, const std::string& id, const std::string& anchor,
                             const Residual& r, double tolFactor, double negativeThreshold) {
    CheckResult out;
    out.id = id;
    out.anchor = anchor;
    try {
        if (expectedNegative(id)) {
            const Point probe = probePoint(s_.n);
            out.expectNegative = true;
            out.residual = r(probe);
            out.tol = negativeThreshold;
            out.worst = probe;
            out.verdict = out.residual > negativeThreshold ? Verdict::Pass : Verdict::Fail;
            return out;
        }
        const MaxResidual m = maxOver(points, r);
        out.residual = m.value;
        out.tol = tol_ * tolFactor;
        out.worst = m.worst;
        out.verdict = m.value <= out.tol ? Verdict::Pass : Verdict::Fail;
    } catch (const DomainError& e) {
        throw NumericError(id, e.what());
    } catch (const lin::SingularMatrixError& e) {
        throw NumericError(id, e.what());
    }
    return out;
}

CheckResult Workspace::notApplicable(const std::string& id, const std::string& anchor, std::string reason) {
    CheckResult out;
    out.id = id;
    out.anchor = anchor;
    out.verdict = Verdict::NotApplicable;
    out.reason = std::move(reason);
    return out;
}

}  // namespace tbpn
