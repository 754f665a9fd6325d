#pragma once

// Dense complex linear algebra: the matrix carrier, the Hermitian
// eigensolver and the complex Schur machinery used by every other module.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spectral_lt/errors.hpp"

namespace spectral_lt {

using cplx = std::complex<double>;
using Index = Eigen::Index;

/// Square complex matrix with finite entries and dimension >= 1.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(Eigen::MatrixXcd entries);

  static ComplexMatrix identity(Index n);
  static ComplexMatrix zero(Index n);

  Index n() const { return m_.rows(); }
  const Eigen::MatrixXcd& dense() const { return m_; }
  cplx operator()(Index r, Index c) const { return m_(r, c); }

  /// Frobenius norm; the scale all relative tolerances refer to.
  double norm() const { return m_.norm(); }

  ComplexMatrix operator+(const ComplexMatrix& other) const;
  ComplexMatrix operator-(const ComplexMatrix& other) const;
  ComplexMatrix operator*(cplx scalar) const;

 private:
  Eigen::MatrixXcd m_;
};

/// Numerical thresholds. All fields except tol_orth are relative to the
/// Frobenius norm of the matrix being processed; tol_orth is absolute
/// (orthonormality is scale free).
struct ToleranceConfig {
  double tol_eig = 1e-10;
  double tol_orth = 1e-10;
  double tol_schur = 1e-12;
  double tol_zero = 1e-10;
  double cluster_radius = 1e-8;
  bool balance = true;

  void validate() const;
  double zero_threshold(double scale) const { return tol_zero * scale; }
};

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  // column k belongs to values[k]
};

/// A = Q T Q^dagger with Q unitary and T upper triangular.
struct SchurForm {
  Eigen::MatrixXcd Q;
  Eigen::MatrixXcd T;

  Index n() const { return T.rows(); }
  Eigen::VectorXcd diagonal() const { return T.diagonal(); }
  /// ||Q T Q^dagger - A||_F / ||A||_F
  double reconstruction_residual(const ComplexMatrix& A) const;
  /// ||Q^dagger Q - I||_F
  double orthogonality_residual() const;
};

/// Eigenvalues with algebraic multiplicities recovered by clustering.
struct Spectrum {
  std::vector<cplx> values;
  std::vector<int> multiplicities;
  // Spread of each cluster around its reported mean; zero for isolated values.
  std::vector<double> residuals;
  // Relative Schur reconstruction residual when a full Schur form was built.
  std::optional<double> backward_error;

  std::size_t size() const { return values.size(); }
  int total_multiplicity() const;
};

ComplexMatrix adjoint(const ComplexMatrix& M);

/// (M + M^dagger) / 2, Hermitian to the last bit.
ComplexMatrix symmetric_part(const ComplexMatrix& M);

/// ||M - M^dagger||_F <= tol_orth * ||M||_F
bool is_hermitian(const ComplexMatrix& M, double rel_tol);

/// Householder tridiagonalization followed by implicit-shift QL.
HermitianSpectrum hermitian_eigen(const ComplexMatrix& H, const ToleranceConfig& tol = {});

/// Same algorithm without eigenvector accumulation (O(n^2) once tridiagonal).
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& H, const ToleranceConfig& tol = {});

/// Complex Schur decomposition: permutation balancing, Householder
/// Hessenberg reduction, single-shift complex QR with Wilkinson shifts.
SchurForm schur(const ComplexMatrix& A, const ToleranceConfig& tol = {});

/// Eigenvalues only (no Schur vectors): the same QR iteration restricted to
/// the active window, roughly a third of the cost of `schur`.
Eigen::VectorXcd complex_eigenvalues(const ComplexMatrix& A, const ToleranceConfig& tol = {});

bool is_tridiagonal(const ComplexMatrix& A);

/// Eigenvalues of a tridiagonal matrix in O(n^2): the off-diagonal products
/// define an equivalent complex symmetric tridiagonal matrix that is reduced
/// by implicit QL. Throws NoConvergence on breakdown.
Eigen::VectorXcd tridiagonal_eigenvalues(const ComplexMatrix& A, const ToleranceConfig& tol = {});

using EigenvalueSelector = std::function<bool(cplx)>;

/// Moves every selected eigenvalue to the leading part of T by adjacent
/// unitary swaps. Relative order inside each group is kept.
SchurForm schur_reorder(const SchurForm& S, const EigenvalueSelector& select,
                        const ToleranceConfig& tol = {});

/// Groups diagonal entries of T closer than cluster_radius * ||T||_F
/// (single linkage) into one eigenvalue.
Spectrum cluster_spectrum(const SchurForm& S, const ToleranceConfig& tol = {});

/// Clustering on a bare list of eigenvalues; radius is absolute.
Spectrum cluster_values(std::span<const cplx> values, double radius);

/// Eigenvalues of A with multiplicities. Exactly Hermitian input goes to the
/// Hermitian solver; otherwise a full Schur form is built up to
/// `schur_limit`, and above it the tridiagonal solver (banded operators) or
/// the eigenvalue-only QR is used.
Spectrum spectrum_of(const ComplexMatrix& A, const ToleranceConfig& tol = {},
                     Index schur_limit = 400);

/// n x N matrix with orthonormal columns, Haar distributed (Gram-Schmidt of a
/// complex Gaussian matrix).
Eigen::MatrixXcd random_orthonormal_frame(Index n, Index N, std::uint64_t seed);

/// In-place modified Gram-Schmidt with reorthogonalization.
void orthonormalize_columns(Eigen::MatrixXcd& u);

}  // namespace spectral_lt
