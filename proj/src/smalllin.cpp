#include "tbpn/smalllin.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace tbpn::lin {

namespace {

void requireSquare(const Eigen::MatrixXd& a, const char* what) {
    if (a.rows() != a.cols()) throw std::invalid_argument(std::string(what) + ": matrix is not square");
    if (a.rows() > 8) throw std::invalid_argument(std::string(what) + ": dimension exceeds 8");
}

Eigen::PartialPivLU<Eigen::MatrixXd> factor(const Eigen::MatrixXd& a) {
    requireSquare(a, "solve");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double scale = maxAbs(a);
    const double det = lu.determinant();
    if (scale == 0.0 || std::abs(det) <= 1e-12 * std::pow(scale, static_cast<double>(a.rows()))) {
        const double rc = scale == 0.0 ? 0.0 : lu.rcond();
        std::ostringstream os;
        os << "singular matrix (|det| = " << std::abs(det) << ", rcond ~ " << rc << ")";
        throw SingularMatrixError(os.str(), rc);
    }
    return lu;
}

}  // namespace

Eigen::MatrixXd solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (b.rows() != a.rows()) throw std::invalid_argument("solve: dimension mismatch");
    return factor(a).solve(b);
}

Eigen::MatrixXd inverse(const Eigen::MatrixXd& a) { return factor(a).inverse(); }

double determinant(const Eigen::MatrixXd& a) {
    requireSquare(a, "determinant");
    if (a.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant();
}

RealEigenDecomposition eigReal(const Eigen::MatrixXd& a) {
    requireSquare(a, "eigReal");
    if (a.rows() > 4) throw std::invalid_argument("eigReal: dimension exceeds 4");
    const int n = static_cast<int>(a.rows());
    const double scale = 1.0 + maxAbs(a);

    Eigen::EigenSolver<Eigen::MatrixXd> es(a, true);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigReal: eigensolver did not converge");
    const Eigen::VectorXcd values = es.eigenvalues();
    const Eigen::MatrixXcd vectors = es.eigenvectors();
    for (int i = 0; i < n; ++i)
        if (std::abs(values[i].imag()) > 1e-9 * scale) {
            std::ostringstream os;
            os << "complex eigenvalue " << values[i].real() << (values[i].imag() < 0 ? " - " : " + ")
               << std::abs(values[i].imag()) << "i";
            throw ComplexEigenvalueError(os.str());
        }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return values[x].real() < values[y].real(); });

    RealEigenDecomposition out;
    Eigen::MatrixXd basis(n, n);
    for (int k = 0; k < n; ++k) {
        const int i = order[k];
        Eigen::VectorXd v = vectors.col(i).real();
        const double nv = v.norm();
        if (nv == 0.0) throw DefectiveMatrixError("eigReal: vanishing eigenvector");
        v /= nv;
        for (int c = 0; c < n; ++c)
            if (std::abs(v[c]) > 1e-12) {
                if (v[c] < 0) v = -v;
                break;
            }
        basis.col(k) = v;
        out.pairs.push_back({values[i].real(), v});
    }
    if (std::abs(basis.determinant()) < 1e-8)
        throw DefectiveMatrixError("eigReal: matrix is defective (no full eigenbasis)");
    for (int k = 1; k < n; ++k)
        if (std::abs(out.pairs[k].value - out.pairs[k - 1].value) <= 1e-9 * scale) out.distinct = false;
    return out;
}

double maxScaledDiff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("maxScaledDiff: shape mismatch");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double x = a(i);
        const double y = b(i);
        if (!std::isfinite(x) || !std::isfinite(y)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(x - y) / (1.0 + std::max(std::abs(x), std::abs(y))));
    }
    return worst;
}

}  // namespace tbpn::lin
