#include <cmath>
#include <limits>
#include <numeric>

#include <gtest/gtest.h>

#include "spectral_lt/linalg.hpp"
#include "spectral_lt/operators.hpp"
#include "spectral_lt/verify.hpp"
#include "support.hpp"

using namespace spectral_lt;
using namespace testing_support;

namespace {

ComplexMatrix mat(std::initializer_list<std::initializer_list<cplx>> rows) {
  const Index n = static_cast<Index>(rows.size());
  Eigen::MatrixXcd m(n, n);
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (const cplx& v : row) m(r, c++) = v;
    ++r;
  }
  return ComplexMatrix(m);
}

const cplx I(0.0, 1.0);

void expect_schur_invariants(const ComplexMatrix& A, const SchurForm& S, const ToleranceConfig& tol) {
  EXPECT_LE(S.reconstruction_residual(A), tol.tol_schur);
  EXPECT_LE(S.orthogonality_residual(), tol.tol_orth);
  for (Index c = 0; c < S.n(); ++c)
    for (Index r = c + 1; r < S.n(); ++r) ASSERT_EQ(S.T(r, c), cplx(0.0)) << r << "," << c;
}

}  // namespace

TEST(ComplexMatrix, RejectsNonFiniteAndEmpty) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ComplexMatrix{m}, Error);
  m(0, 1) = cplx(0.0, std::numeric_limits<double>::infinity());
  EXPECT_THROW(ComplexMatrix{m}, Error);
  EXPECT_THROW(ComplexMatrix{Eigen::MatrixXcd(0, 0)}, Error);
  EXPECT_THROW(ComplexMatrix{Eigen::MatrixXcd(2, 3)}, Error);
}

TEST(Adjoint, SmallCases) {
  EXPECT_EQ(adjoint(mat({{I}})).dense()(0, 0), -I);
  const ComplexMatrix a = adjoint(mat({{0.0, 2.0 * I}, {0.0, 0.0}}));
  EXPECT_EQ(a(1, 0), -2.0 * I);
  EXPECT_EQ(a(0, 1), cplx(0.0));
}

TEST(Adjoint, Involution) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix M = random_complex(7, s);
    EXPECT_EQ((adjoint(adjoint(M)).dense() - M.dense()).norm(), 0.0);
  }
}

TEST(SymmetricPart, Examples) {
  const ComplexMatrix s = symmetric_part(mat({{0.0, 2.0 * I}, {0.0, 0.0}}));
  EXPECT_EQ(s(0, 1), I);
  EXPECT_EQ(s(1, 0), -I);
  const ComplexMatrix t = symmetric_part(mat({{-1.0, 10.0}, {0.0, -2.0}}));
  EXPECT_EQ(t(0, 1), cplx(5.0));
  EXPECT_EQ(t(1, 0), cplx(5.0));
  EXPECT_EQ(t(0, 0), cplx(-1.0));
}

TEST(SymmetricPart, ExactlyHermitianAndIdempotent) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix H = symmetric_part(random_complex(9, s));
    EXPECT_EQ((H.dense() - H.dense().adjoint()).norm(), 0.0);
    EXPECT_EQ((symmetric_part(H).dense() - H.dense()).norm(), 0.0);
    EXPECT_TRUE(is_hermitian(H, 0.0));
  }
}

TEST(HermitianEigen, ClosedForms) {
  Eigen::VectorXd e = hermitian_eigen(mat({{2.0, 0.0}, {0.0, -1.0}})).values;
  EXPECT_NEAR(e[0], -1.0, 1e-15);
  EXPECT_NEAR(e[1], 2.0, 1e-15);

  e = hermitian_eigen(mat({{0.0, I}, {-I, 0.0}})).values;
  EXPECT_NEAR(e[0], -1.0, 1e-14);
  EXPECT_NEAR(e[1], 1.0, 1e-14);

  e = hermitian_eigen(mat({{-1.0, 5.0}, {5.0, -2.0}})).values;
  EXPECT_NEAR(e[0], (-3.0 - std::sqrt(101.0)) / 2.0, 1e-13);
  EXPECT_NEAR(e[1], (-3.0 + std::sqrt(101.0)) / 2.0, 1e-13);
}

TEST(HermitianEigen, RejectsNonHermitian) {
  try {
    hermitian_eigen(mat({{0.0, 1.0}, {0.0, 0.0}}));
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(HermitianEigen, InvariantsAgainstEigenOracle) {
  const ToleranceConfig tol;
  for (Index n : {1, 2, 3, 5, 10, 25, 40}) {
    for (std::uint64_t s = 0; s < 4; ++s) {
      const ComplexMatrix H = random_hermitian_oracle(n, 100 * n + s);
      const HermitianSpectrum hs = hermitian_eigen(H, tol);
      for (Index k = 1; k < n; ++k) EXPECT_LE(hs.values[k - 1], hs.values[k]);
      for (Index k = 0; k < n; ++k) {
        const double res = (H.dense() * hs.vectors.col(k) - hs.values[k] * hs.vectors.col(k)).norm();
        EXPECT_LE(res, tol.tol_eig * H.norm());
      }
      const Eigen::MatrixXcd gram = hs.vectors.adjoint() * hs.vectors;
      EXPECT_LE((gram - Eigen::MatrixXcd::Identity(n, n)).norm(), tol.tol_orth);

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> oracle(H.dense());
      EXPECT_LE((oracle.eigenvalues() - hs.values).cwiseAbs().maxCoeff(), 1e-12 * H.norm());
      EXPECT_LE((hermitian_eigenvalues(H, tol) - hs.values).cwiseAbs().maxCoeff(), 1e-12 * H.norm());
    }
  }
}

TEST(HermitianEigen, DiscreteLaplacianClosedForm) {
  const Grid1D grid(0.0, 1.0, 60);
  const Eigen::VectorXd e = hermitian_eigenvalues(second_difference(grid));
  const double dx = grid.spacing();
  for (Index k = 1; k <= grid.n(); ++k) {
    const double exact = 4.0 * std::pow(std::sin(k * std::numbers::pi / (2.0 * (grid.n() + 1))), 2) / (dx * dx);
    EXPECT_NEAR(e[k - 1], exact, 1e-10 * exact);
  }
}

TEST(Schur, UpperTriangularInputIsFixed) {
  const ComplexMatrix A = mat({{1.0, 2.0, I}, {0.0, -3.0, 4.0}, {0.0, 0.0, 2.0 * I}});
  ToleranceConfig tol;
  tol.balance = false;
  const SchurForm S = schur(A, tol);
  expect_schur_invariants(A, S, tol);
  for (Index k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(S.T(k, k) - A(k, k)), 0.0, 1e-14);
  // Q is a diagonal unitary.
  for (Index c = 0; c < 3; ++c) {
    for (Index r = 0; r < 3; ++r) {
      if (r == c) EXPECT_NEAR(std::abs(S.Q(r, c)), 1.0, 1e-14);
      else EXPECT_NEAR(std::abs(S.Q(r, c)), 0.0, 1e-14);
    }
  }
}

TEST(Schur, NilpotentJordanBlock) {
  const ComplexMatrix A = mat({{0.0, 1.0}, {0.0, 0.0}});
  const SchurForm S = schur(A);
  EXPECT_EQ(S.T(0, 0), cplx(0.0));
  EXPECT_EQ(S.T(1, 1), cplx(0.0));
}

TEST(Schur, GinibreReconstruction) {
  const ToleranceConfig tol;
  const ComplexMatrix A = random_complex(20, 2024);
  const SchurForm S = schur(A, tol);
  expect_schur_invariants(A, S, tol);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> oracle(A.dense(), false);
  EXPECT_LE(multiset_distance(to_vector(S.diagonal()), to_vector(oracle.eigenvalues())), 1e-10 * A.norm());
}

TEST(Schur, InvariantsOnRandomEnsembles) {
  const ToleranceConfig tol;
  int checked = 0;
  for (auto kind : {EnsembleKind::Ginibre, EnsembleKind::JordanPerturbed, EnsembleKind::Bony,
                    EnsembleKind::DiscretizedOperator}) {
    EnsembleSpec spec;
    spec.kind = kind;
    spec.n = 40;
    for (std::uint64_t t = 0; t < 125; ++t) {
      const ComplexMatrix A = sample_ensemble(spec, trial_seed(17, t));
      const SchurForm S = schur(A, tol);
      expect_schur_invariants(A, S, tol);
      EXPECT_LE(std::abs(A.dense().trace() - S.T.trace()), 1e-10 * A.norm());
      ++checked;
    }
  }
  EXPECT_EQ(checked, 500);
}

TEST(Schur, UpperTriangularPlusNoise) {
  const ToleranceConfig tol;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Eigen::MatrixXcd m = gaussian_matrix(2 + static_cast<Index>(s), s).triangularView<Eigen::Upper>();
    m += 1e-8 * gaussian_matrix(m.rows(), s + 99);
    const ComplexMatrix A(m);
    expect_schur_invariants(A, schur(A, tol), tol);
  }
}

TEST(Schur, CharacteristicPolynomialOracle) {
  for (Index n = 1; n <= 4; ++n) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const ComplexMatrix A = random_complex(n, 1000 * n + s);
      const SchurForm S = schur(A);
      const std::vector<cplx> want = charpoly(A.dense());
      const std::vector<cplx> got = poly_from_roots(S.diagonal());
      for (std::size_t k = 0; k < want.size(); ++k) {
        const double scale = std::pow(std::max(1.0, A.norm()), static_cast<double>(n - k));
        EXPECT_LE(std::abs(want[k] - got[k]), 1e-8 * scale) << "n=" << n << " k=" << k;
      }
      // Pointwise: every computed eigenvalue is a root of det(x I - A).
      for (Index k = 0; k < n; ++k) {
        const cplx x = S.T(k, k);
        cplx p = 0.0;
        for (std::size_t j = want.size(); j-- > 0;) p = p * x + want[j];
        EXPECT_LE(std::abs(p), 1e-8 * std::pow(std::max(1.0, A.norm()), static_cast<double>(n)));
      }
    }
  }
}

TEST(Schur, TwoByTwoClosedFormEigenvalues) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Eigen::MatrixXcd m = gaussian_matrix(2, 5000 + s);
    const cplx tr = m.trace();
    const cplx det = m.determinant();
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const std::vector<cplx> exact{(tr + disc) / 2.0, (tr - disc) / 2.0};
    EXPECT_LE(multiset_distance(to_vector(schur(ComplexMatrix(m)).diagonal()), exact), 1e-8);
  }
}

TEST(Schur, EigenvaluesOnlyPathMatches) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix A = random_complex(30, 700 + s);
    EXPECT_LE(multiset_distance(to_vector(complex_eigenvalues(A)), to_vector(schur(A).diagonal())),
              1e-10 * A.norm());
  }
}

TEST(Tridiagonal, AgreesWithQr) {
  const Grid1D grid(-8.0, 8.0, 120);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix A = build_schrodinger(grid, random_drift_operator(grid, s));
    ASSERT_TRUE(is_tridiagonal(A));
    const auto tri = to_vector(tridiagonal_eigenvalues(A));
    const auto qr = to_vector(schur(A).diagonal());
    EXPECT_LE(multiset_distance(tri, qr), 1e-8 * A.norm());
  }
}

TEST(Tridiagonal, ComplexScaledAgreesWithQr) {
  const Grid1D grid(-12.0, 12.0, 200);
  const AnalyticProfile v{ProfileShape::Gaussian, cplx(-3.0, 0.0)};
  const ComplexMatrix A = complex_scaled(grid, v.scaled_samples(grid, 0.8), 0.8, 1.0);
  EXPECT_LE(multiset_distance(to_vector(tridiagonal_eigenvalues(A)), to_vector(schur(A).diagonal())),
            1e-8 * A.norm());
}

TEST(Tridiagonal, DetectsStructure) {
  EXPECT_TRUE(is_tridiagonal(bony_counterexample(2)));
  EXPECT_FALSE(is_tridiagonal(bony_counterexample(3)));
}

TEST(SchurReorder, DiagonalSwap) {
  const ComplexMatrix A = mat({{2.0, 0.0}, {0.0, -1.0}});
  ToleranceConfig tol;
  tol.balance = false;
  const SchurForm S = schur_reorder(schur(A, tol), [](cplx z) { return z.real() < 0; });
  EXPECT_NEAR(std::abs(S.T(0, 0) - cplx(-1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(S.T(1, 1) - cplx(2.0)), 0.0, 1e-14);
  expect_schur_invariants(A, S, tol);
}

TEST(SchurReorder, AlreadyOrderedIsUnchanged) {
  const ComplexMatrix A = mat({{-1.0, 3.0}, {0.0, 2.0}});
  const SchurForm S0 = schur(A);
  const SchurForm S1 = schur_reorder(S0, [](cplx z) { return z.real() < 0; });
  EXPECT_EQ(S0.diagonal(), S1.diagonal());
}

TEST(SchurReorder, RandomPreservesMultisetAndResidual) {
  const ToleranceConfig tol;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix A = random_complex(15, 300 + s);
    const SchurForm S0 = schur(A, tol);
    const SchurForm S1 = schur_reorder(S0, [](cplx z) { return z.real() < 0; }, tol);
    EXPECT_LE(multiset_distance(to_vector(S0.diagonal()), to_vector(S1.diagonal())), 1e-10);
    EXPECT_LE(S1.reconstruction_residual(A), std::max(10.0 * S0.reconstruction_residual(A), tol.tol_schur));
    Index k = 0;
    while (k < 15 && S1.T(k, k).real() < 0) ++k;
    for (Index j = k; j < 15; ++j) EXPECT_GE(S1.T(j, j).real(), 0.0);
    Index negatives = 0;
    for (Index j = 0; j < 15; ++j) negatives += S0.T(j, j).real() < 0 ? 1 : 0;
    EXPECT_EQ(k, negatives);
    expect_schur_invariants(A, S1, tol);
  }
}

TEST(ClusterSpectrum, ForcedMerge) {
  const ComplexMatrix A = mat({{-1.0, 0.0, 0.0}, {0.0, -1.0 + 1e-14, 0.0}, {0.0, 0.0, 3.0}});
  ToleranceConfig tol;
  tol.cluster_radius = 1e-10;
  tol.balance = false;
  const Spectrum s = cluster_spectrum(schur(A, tol), tol);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.values[0].real(), -1.0, 1e-13);
  EXPECT_EQ(s.multiplicities[0], 2);
  EXPECT_NEAR(s.values[1].real(), 3.0, 1e-15);
  EXPECT_EQ(s.multiplicities[1], 1);
}

TEST(ClusterSpectrum, BonyHasOneEigenvalue) {
  for (Index n : {1, 2, 5, 8, 16, 32}) {
    const Spectrum s = cluster_spectrum(schur(bony_counterexample(n)));
    ASSERT_EQ(s.size(), 1u) << n;
    EXPECT_NEAR(std::abs(s.values[0] + 1.0), 0.0, 1e-12);
    EXPECT_EQ(s.multiplicities[0], n);
  }
}

TEST(ClusterSpectrum, SimpleValuesAndPartition) {
  const Spectrum s = cluster_spectrum(schur(mat({{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 3.0}})));
  EXPECT_EQ(s.size(), 3u);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ComplexMatrix A = random_complex(12, seed);
    const Spectrum r = spectrum_of(A);
    EXPECT_EQ(r.total_multiplicity(), 12);
  }
}

TEST(SpectrumOf, BackwardErrorReportedForSchurPath) {
  const Spectrum s = spectrum_of(random_complex(10, 4));
  ASSERT_TRUE(s.backward_error.has_value());
  EXPECT_LE(*s.backward_error, 1e-12);
}

TEST(RandomFrame, SquareIsUnitary) {
  const Eigen::MatrixXcd U = random_orthonormal_frame(6, 6, 3);
  EXPECT_NEAR(std::abs(U.determinant()), 1.0, 1e-10);
}

TEST(RandomFrame, Deterministic) {
  EXPECT_EQ(random_orthonormal_frame(5, 2, 42), random_orthonormal_frame(5, 2, 42));
  EXPECT_NE(random_orthonormal_frame(5, 2, 42), random_orthonormal_frame(5, 2, 43));
}

TEST(RandomFrame, UnitColumnsAndGram) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Eigen::MatrixXcd U = random_orthonormal_frame(9, 4, s);
    for (Index c = 0; c < 4; ++c) EXPECT_NEAR(U.col(c).norm(), 1.0, 1e-12);
    EXPECT_LE((U.adjoint() * U - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-12);
  }
}

TEST(RandomFrame, BadShape) {
  try {
    random_orthonormal_frame(3, 4, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadShape);
  }
}

TEST(Tolerances, ValidateRejectsBadValues) {
  ToleranceConfig tol;
  tol.tol_eig = 0.0;
  EXPECT_THROW(tol.validate(), Error);
  tol = {};
  tol.cluster_radius = tol.tol_eig / 2;
  EXPECT_THROW(tol.validate(), Error);
  EXPECT_NO_THROW(ToleranceConfig{}.validate());
}
