#pragma once

// Numeric linear algebra for the small dense matrices of the toolkit
// (at most 8x8; eigenproblems at most 4x4).

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace tbpn::lin {

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& msg, double rcond) : std::runtime_error(msg), rcond_(rcond) {}
    /// Reciprocal condition estimate of the offending matrix.
    [[nodiscard]] double rcond() const { return rcond_; }

private:
    double rcond_;
};

class ComplexEigenvalueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DefectiveMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solves A X = B by partial-pivot LU. Throws SingularMatrixError when
/// |det A| <= 1e-12 * max|A_ij|^n.
Eigen::MatrixXd solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::MatrixXd inverse(const Eigen::MatrixXd& a);
double determinant(const Eigen::MatrixXd& a);

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
};

struct RealEigenDecomposition {
    /// Ascending by eigenvalue; vectors have unit length and their first
    /// non-negligible component positive.
    std::vector<EigenPair> pairs;
    /// False when two eigenvalues are within 1e-9 (scaled) of each other.
    bool distinct = true;
};

/// Real eigendecomposition of a square matrix (n <= 4). Throws
/// ComplexEigenvalueError or DefectiveMatrixError.
RealEigenDecomposition eigReal(const Eigen::MatrixXd& a);

/// Largest absolute entry.
inline double maxAbs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

/// Largest scale-aware entry difference |a-b| / (1 + max(|a|, |b|)).
double maxScaledDiff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace tbpn::lin
