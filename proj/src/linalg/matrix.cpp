#include <cmath>
#include <string>

#include "spectral_lt/linalg.hpp"

namespace spectral_lt {

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd entries) : m_(std::move(entries)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw Error(ErrorKind::BadShape, "matrix must be square with n >= 1, got " +
                                         std::to_string(m_.rows()) + "x" +
                                         std::to_string(m_.cols()));
  }
  for (Index c = 0; c < m_.cols(); ++c) {
    for (Index r = 0; r < m_.rows(); ++r) {
      const cplx z = m_(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::InvalidArgument, "non-finite matrix entry at (" +
                                                    std::to_string(r) + "," +
                                                    std::to_string(c) + ")");
      }
    }
  }
}

ComplexMatrix ComplexMatrix::identity(Index n) {
  return ComplexMatrix(Eigen::MatrixXcd::Identity(n, n));
}

ComplexMatrix ComplexMatrix::zero(Index n) { return ComplexMatrix(Eigen::MatrixXcd::Zero(n, n)); }

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
  if (other.n() != n()) throw Error(ErrorKind::ShapeMismatch, "matrix sum dimension mismatch");
  return ComplexMatrix(m_ + other.m_);
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
  if (other.n() != n()) throw Error(ErrorKind::ShapeMismatch, "matrix difference dimension mismatch");
  return ComplexMatrix(m_ - other.m_);
}

ComplexMatrix ComplexMatrix::operator*(cplx scalar) const { return ComplexMatrix(m_ * scalar); }

void ToleranceConfig::validate() const {
  const bool positive = tol_eig > 0 && tol_orth > 0 && tol_schur > 0 && tol_zero > 0 &&
                        cluster_radius > 0;
  if (!positive) {
    throw Error(ErrorKind::InvalidArgument, "all tolerances must be strictly positive");
  }
  if (cluster_radius < tol_eig) {
    throw Error(ErrorKind::InvalidArgument, "cluster_radius must be >= tol_eig");
  }
}

ComplexMatrix adjoint(const ComplexMatrix& M) { return ComplexMatrix(M.dense().adjoint()); }

ComplexMatrix symmetric_part(const ComplexMatrix& M) {
  const auto& a = M.dense();
  const Index n = M.n();
  Eigen::MatrixXcd h(n, n);
  for (Index j = 0; j < n; ++j) {
    h(j, j) = cplx(a(j, j).real(), 0.0);
    for (Index k = j + 1; k < n; ++k) {
      const cplx v = 0.5 * (a(j, k) + std::conj(a(k, j)));
      h(j, k) = v;
      h(k, j) = std::conj(v);
    }
  }
  return ComplexMatrix(std::move(h));
}

bool is_hermitian(const ComplexMatrix& M, double rel_tol) {
  const double scale = M.norm();
  const double skew = (M.dense() - M.dense().adjoint()).norm();
  return skew <= rel_tol * scale;
}

double SchurForm::reconstruction_residual(const ComplexMatrix& A) const {
  const double scale = A.norm();
  const double r = (Q * T * Q.adjoint() - A.dense()).norm();
  return scale > 0 ? r / scale : r;
}

double SchurForm::orthogonality_residual() const {
  return (Q.adjoint() * Q - Eigen::MatrixXcd::Identity(Q.cols(), Q.cols())).norm();
}

int Spectrum::total_multiplicity() const {
  int total = 0;
  for (int m : multiplicities) total += m;
  return total;
}

}  // namespace spectral_lt
