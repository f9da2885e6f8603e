#pragma once

// Pointwise eigenstructure of J, J-bar and R, and the diagnostics that
// point towards separable (Darboux-Nijenhuis) coordinates.

#include "tbpn/checks.hpp"

#include <memory>
#include <string>
#include <vector>

namespace tbpn {

/// Eigendata at one point. When skipped, only `reason` is meaningful.
struct EigenEntry {
    bool skipped = false;
    std::string reason;
    std::vector<double> lambda;      // ascending
    Eigen::MatrixXd X;               // columns: eigenvectors of J
    Eigen::MatrixXd Z;               // columns: eigenvectors of J-bar, matched to lambda
    Eigen::MatrixXd Y;               // columns: vertical parts of the horizontal R-eigenvectors
    std::vector<double> zResidual;   // |R Z^V - lambda Z^V|, scaled
    std::vector<double> hResidual;   // |R (X^H + Y^V) - lambda (X^H + Y^V)|, scaled
    double stackDeterminant = 0.0;   // det of the 2n unit eigenvector columns
    bool zeroEigenvalue = false;
};

/// Compiled J, J-bar, U, g, Gamma and R for repeated pointwise eigen work.
class EigenData {
public:
    explicit EigenData(Workspace& ws);

    [[nodiscard]] EigenEntry at(const Point& p) const;
    /// Ascending eigenvalues of J at p; throws on complex spectra.
    [[nodiscard]] std::vector<double> spectrumJ(const Point& p) const;
    [[nodiscard]] std::vector<double> spectrumJbar(const Point& p) const;
    /// max_i |(g X_i)^T (J-bar - lambda_i)|.
    [[nodiscard]] double eigenformResidual(const Point& p) const;
    /// max over i != j of |X_j(lambda_i)| by central differences of step h
    /// with nearest-eigenvalue matching.
    [[nodiscard]] double separabilityFD(const Point& p, double h = 1e-6) const;
    /// max over i != j of the variation of lambda_i along the integral curve
    /// of X_j through p (RK4, `steps` steps of size `dt`).
    [[nodiscard]] double separabilitySegment(const Point& p, double dt = 1e-3, int steps = 50) const;
    /// max over i != j of |g(X_i, X_j)| for unit X_i.
    [[nodiscard]] double orthogonality(const Point& p) const;

private:
    int n_;
    std::shared_ptr<CompiledMatrix> j_, jbar_, u_, g_, gamma_;
    const RSolver* r_;
};

/// Raised when a finite-difference step moves an eigenvalue closer to a
/// neighbour than the matching can resolve.
class EigenMatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tbpn
