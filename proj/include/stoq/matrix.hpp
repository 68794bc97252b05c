#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace stoq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kHermitianTol = 1e-9;

namespace pauli_matrices {
inline ComplexMatrix identity2() { return ComplexMatrix::Identity(2, 2); }
inline ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}
inline ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli_matrices

/// Tensor product with `a` as the more-significant factor.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    ComplexMatrix out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

inline bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol) {
    if (m.rows() != m.cols()) return false;
    ComplexMatrix d = m.adjoint() * m;
    d.diagonal().array() -= 1.0;
    return d.cwiseAbs().maxCoeff() <= tol;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// e^{+i h t} for Hermitian h, via eigendecomposition. Note the +i sign
/// convention: this matches the time-evolution targets used throughout,
/// not the e^{-iHt} convention common elsewhere.
inline ComplexMatrix hermitian_expi(const ComplexMatrix& h, double t) {
    if (!is_hermitian(h))
        throw std::invalid_argument("hermitian_expi: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_expi: eigendecomposition failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    Eigen::VectorXcd phases(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k)
        phases(k) = std::exp(Complex(0, lam(k) * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// |Tr(v^dag u)|. Maximal (= dim) when u and v agree up to a global phase.
inline double hs_overlap(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        throw std::invalid_argument("hs_overlap: dimension mismatch");
    return std::abs(v.conjugate().cwiseProduct(u).sum());
}

/// 1 - |Tr(v^dag u)| / dim, in [0,1]; zero iff u and v agree up to a
/// global phase.
inline double cost(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows())
        throw std::invalid_argument("cost: dimension mismatch");
    return 1.0 - hs_overlap(u, v) / static_cast<double>(u.rows());
}

/// (1/2) sum of singular values of (u - v). Diagnostic only; not
/// global-phase invariant.
inline double trace_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::JacobiSVD<ComplexMatrix> svd(u - v);
    return 0.5 * svd.singularValues().sum();
}

}  // namespace stoq
