#include "tbpn/eigen_dn.hpp"

#include "tbpn/smalllin.hpp"
#include "tbpn/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tbpn {

namespace {

std::vector<double> values(const lin::RealEigenDecomposition& d) {
    std::vector<double> v;
    for (const auto& p : d.pairs) v.push_back(p.value);
    return v;
}

// Index of the entry of `spectrum` nearest to `target`; throws when the
// runner-up is within `resolution` of the winner.
int nearest(const std::vector<double>& spectrum, double target, double resolution) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(spectrum.size()); ++k)
        if (std::abs(spectrum[k] - target) < std::abs(spectrum[best] - target)) best = k;
    for (int k = 0; k < static_cast<int>(spectrum.size()); ++k)
        if (k != best && std::abs(spectrum[k] - spectrum[best]) < resolution)
            throw EigenMatchError("eigenvalues " + std::to_string(spectrum[k]) + " and " + std::to_string(spectrum[best]) +
                                  " are too close to match");
    return best;
}

Point shifted(const Point& p, const Eigen::VectorXd& dq) { return Point{p.q + dq, p.u}; }

double scaledNorm(const Eigen::VectorXd& r, const Eigen::VectorXd& ref) {
    return r.cwiseAbs().maxCoeff() / (1.0 + ref.cwiseAbs().maxCoeff());
}

}  // namespace

EigenData::EigenData(Workspace& ws)
    : n_(ws.n()),
      j_(std::make_shared<CompiledMatrix>(ws.J())),
      jbar_(std::make_shared<CompiledMatrix>(ws.Jbar())),
      u_(std::make_shared<CompiledMatrix>(ws.U())),
      g_(std::make_shared<CompiledMatrix>(ws.conn().g)),
      gamma_(std::make_shared<CompiledMatrix>(ws.conn().conn)),
      r_(&ws.rsolver()) {}

std::vector<double> EigenData::spectrumJ(const Point& p) const { return values(lin::eigReal((*j_)(p))); }
std::vector<double> EigenData::spectrumJbar(const Point& p) const { return values(lin::eigReal((*jbar_)(p))); }

EigenEntry EigenData::at(const Point& p) const {
    EigenEntry e;
    lin::RealEigenDecomposition dj, djb;
    try {
        dj = lin::eigReal((*j_)(p));
        djb = lin::eigReal((*jbar_)(p));
    } catch (const std::exception& ex) {
        e.skipped = true;
        e.reason = ex.what();
        return e;
    }
    if (!dj.distinct) {
        e.skipped = true;
        e.reason = "repeated eigenvalues";
        return e;
    }
    const int n = n_;
    const Eigen::MatrixXd Jb = (*jbar_)(p), U = (*u_)(p), g = (*g_)(p), G = (*gamma_)(p), R = (*r_)(p);
    const std::vector<double> mu = values(djb);
    e.lambda = values(dj);
    e.X.resize(n, n);
    e.Z.resize(n, n);
    e.Y.resize(n, n);
    Eigen::MatrixXd stack(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        const double lam = e.lambda[i];
        if (std::abs(lam) <= 1e-9) e.zeroEigenvalue = true;
        const Eigen::VectorXd X = dj.pairs[i].vector;
        int best = 0;
        for (int k = 1; k < n; ++k)
            if (std::abs(mu[k] - lam) < std::abs(mu[best] - lam)) best = k;
        const Eigen::VectorXd Z = djb.pairs[best].vector;

        // (J-bar - lambda) Y = -U X has a one-dimensional solution family
        // along Z; the extra row picks the member g-orthogonal to Z.
        Eigen::MatrixXd A(n + 1, n);
        A.topRows(n) = Jb - lam * Eigen::MatrixXd::Identity(n, n);
        A.row(n) = (g * Z).transpose();
        Eigen::VectorXd b(n + 1);
        b.head(n) = -U * X;
        b(n) = 0.0;
        const Eigen::VectorXd Y = A.completeOrthogonalDecomposition().solve(b);

        Eigen::VectorXd v(2 * n), h(2 * n);
        v << Eigen::VectorXd::Zero(n), Z;
        h << X, -G * X + Y;
        e.zResidual.push_back(scaledNorm(R * v - lam * v, lam * v));
        e.hResidual.push_back(scaledNorm(R * h - lam * h, lam * h));
        stack.col(i) = v;
        stack.col(n + i) = h / h.norm();
        e.X.col(i) = X;
        e.Z.col(i) = Z;
        e.Y.col(i) = Y;
    }
    e.stackDeterminant = stack.determinant();
    return e;
}

double EigenData::eigenformResidual(const Point& p) const {
    const EigenEntry e = at(p);
    if (e.skipped) return 0.0;
    const Eigen::MatrixXd g = (*g_)(p), Jb = (*jbar_)(p);
    double worst = 0.0;
    for (int i = 0; i < n_; ++i) {
        const Eigen::RowVectorXd w = (g * e.X.col(i)).transpose();
        worst = std::max(worst, scaledNorm((w * Jb - e.lambda[i] * w).transpose(), (e.lambda[i] * w).transpose()));
    }
    return worst;
}

double EigenData::separabilityFD(const Point& p, double h) const {
    const EigenEntry e = at(p);
    if (e.skipped) return 0.0;
    const double resolution = 10.0 * h * (1.0 + std::abs(e.lambda.back()) + std::abs(e.lambda.front()));
    double worst = 0.0;
    for (int j = 0; j < n_; ++j) {
        const Eigen::VectorXd dq = h * e.X.col(j);
        const std::vector<double> plus = spectrumJ(shifted(p, dq)), minus = spectrumJ(shifted(p, -dq));
        for (int i = 0; i < n_; ++i) {
            if (i == j) continue;
            nearest(e.lambda, e.lambda[i], resolution);
            const double a = plus[nearest(plus, e.lambda[i], resolution)];
            const double b = minus[nearest(minus, e.lambda[i], resolution)];
            worst = std::max(worst, std::abs(a - b) / (2.0 * h));
        }
    }
    return worst;
}

double EigenData::separabilitySegment(const Point& p, double dt, int steps) const {
    const EigenEntry e = at(p);
    if (e.skipped) return 0.0;
    double worst = 0.0;
    for (int j = 0; j < n_; ++j) {
        const double lamJ = e.lambda[j];
        Eigen::VectorXd dir = e.X.col(j);
        // Unit eigenvector field of the branch through lamJ, oriented along
        // the previous direction.
        auto field = [&](const Eigen::VectorXd& q, double& lamTrack) {
            const lin::RealEigenDecomposition d = lin::eigReal((*j_)(Point{q, p.u}));
            int best = 0;
            for (int k = 1; k < n_; ++k)
                if (std::abs(d.pairs[k].value - lamTrack) < std::abs(d.pairs[best].value - lamTrack)) best = k;
            Eigen::VectorXd v = d.pairs[best].vector;
            if (v.dot(dir) < 0) v = -v;
            return v;
        };
        Eigen::VectorXd q = p.q;
        double track = lamJ;
        for (int s = 0; s < steps; ++s) {
            const Eigen::VectorXd k1 = field(q, track);
            const Eigen::VectorXd k2 = field(q + 0.5 * dt * k1, track);
            const Eigen::VectorXd k3 = field(q + 0.5 * dt * k2, track);
            const Eigen::VectorXd k4 = field(q + dt * k3, track);
            dir = k1;
            q += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const std::vector<double> spec = spectrumJ(Point{q, p.u});
            track = spec[nearest(spec, track, 0.0)];
            for (int i = 0; i < n_; ++i) {
                if (i == j) continue;
                const double li = spec[nearest(spec, e.lambda[i], 0.0)];
                worst = std::max(worst, std::abs(li - e.lambda[i]));
            }
        }
    }
    return worst;
}

double EigenData::orthogonality(const Point& p) const {
    const EigenEntry e = at(p);
    if (e.skipped) return 0.0;
    const Eigen::MatrixXd G = e.X.transpose() * (*g_)(p) * e.X;
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (i != j) worst = std::max(worst, std::abs(G(i, j)));
    return worst;
}

std::vector<CheckResult> eigenSuite(Workspace& ws) {
    std::vector<CheckResult> out;
    auto data = std::make_shared<EigenData>(ws);

    std::vector<Point> usable;
    std::string why = "no sample point has distinct real eigenvalues";
    for (const Point& p : ws.samples().points) {
        const EigenEntry e = data->at(p);
        if (e.skipped)
            why = "no sample point has distinct real eigenvalues (" + e.reason + ")";
        else
            usable.push_back(p);
    }

    struct Spec {
        std::string id, anchor;
        Residual r;
        double tolFactor;
    };
    std::vector<Spec> specs;
    specs.push_back({"eigen/spectra", "JJbarspectra", [data](const Point& p) {
                         const std::vector<double> a = data->spectrumJ(p), b = data->spectrumJbar(p);
                         const auto n = static_cast<Eigen::Index>(a.size());
                         return lin::maxScaledDiff(Eigen::VectorXd::Map(a.data(), n), Eigen::VectorXd::Map(b.data(), n));
                     },
                     0.1});
    specs.push_back({"eigen/eigenform", "eigenform", [data](const Point& p) { return data->eigenformResidual(p); }, 1.0});
    specs.push_back({"eigen/R-vertical", "Reigen", [data](const Point& p) {
                         const EigenEntry e = data->at(p);
                         return e.skipped ? 0.0 : *std::max_element(e.zResidual.begin(), e.zResidual.end());
                     },
                     1.0});
    specs.push_back({"eigen/R-horizontal", "Reigen", [data](const Point& p) {
                         const EigenEntry e = data->at(p);
                         return e.skipped ? 0.0 : *std::max_element(e.hResidual.begin(), e.hResidual.end());
                     },
                     1.0});
    // Pass/fail indicators: 1 when the eigenvector stack degenerates or an
    // eigenvalue vanishes.
    specs.push_back({"eigen/completeness", "Reigenbasis", [data](const Point& p) {
                         const EigenEntry e = data->at(p);
                         return !e.skipped && std::abs(e.stackDeterminant) <= 1e-6 ? 1.0 : 0.0;
                     },
                     1.0});
    specs.push_back({"eigen/nonzero", "nondegenerate", [data](const Point& p) {
                         const EigenEntry e = data->at(p);
                         return !e.skipped && e.zeroEigenvalue ? 1.0 : 0.0;
                     },
                     1.0});

    const bool riemannian = ws.riemannian();

    auto runSpec = [&](const Spec& s) {
        if (!ws.expectedNegative(s.id) && usable.empty()) return Workspace::notApplicable(s.id, s.anchor, why);
        try {
            return ws.runOn(usable, s.id, s.anchor, s.r, s.tolFactor);
        } catch (const EigenMatchError& e) {
            throw NumericError(s.id, e.what());
        } catch (const lin::ComplexEigenvalueError& e) {
            throw NumericError(s.id, e.what());
        } catch (const lin::DefectiveMatrixError& e) {
            throw NumericError(s.id, e.what());
        }
    };
    for (const Spec& s : specs) out.push_back(runSpec(s));
    if (riemannian)
        out.push_back(runSpec({"eigen/separability", "Xmu=0", [data](const Point& p) { return data->separabilityFD(p); }, 1e4}));
    out.push_back(ws.run("eigen/haantjes", "Haantjes",
                         absResidual(flatten(haantjesFromTorsion(ws.J(), ws.nijenhuisJ())))));


    if (!riemannian) {
        const std::string r = "riemannian mode only";
        out.push_back(Workspace::notApplicable("eigen/separability", "Xmu=0", r));
        out.push_back(Workspace::notApplicable("eigen/segment", "Xmu=0", r));
        out.push_back(Workspace::notApplicable("eigen/g-orthogonal", "gkj=0", r));
        return out;
    }
    const bool symmetric =
        maxOver(ws.samples().points, pairResidual(flatten(ws.J()), flatten(ws.Jbar()))).value <= ws.tolerance();
    if (!symmetric) {
        out.push_back(Workspace::notApplicable("eigen/segment", "Xmu=0", "J is not g-symmetric"));
        out.push_back(Workspace::notApplicable("eigen/g-orthogonal", "gkj=0", "J is not g-symmetric"));
        return out;
    }
    out.push_back(runSpec({"eigen/segment", "Xmu=0", [data](const Point& p) { return data->separabilitySegment(p); }, 1e4}));
    out.push_back(runSpec({"eigen/g-orthogonal", "gkj=0", [data](const Point& p) { return data->orthogonality(p); }, 0.1}));
    return out;
}

}  // namespace tbpn
