#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "spectral_lt/linalg.hpp"

namespace spectral_lt {

bool is_tridiagonal(const ComplexMatrix& A) {
  const auto& a = A.dense();
  const Index n = A.n();
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      if ((r > c + 1 || c > r + 1) && a(r, c) != cplx(0.0, 0.0)) return false;
    }
  }
  return true;
}

// The eigenvalues of a tridiagonal matrix depend on the off-diagonal pairs
// only through their products, so the problem is rewritten as a complex
// symmetric tridiagonal one with e_k = sqrt(lower_k * upper_k) and solved by
// implicit QL with complex orthogonal rotations.
Eigen::VectorXcd tridiagonal_eigenvalues(const ComplexMatrix& A, const ToleranceConfig& tol) {
  tol.validate();
  if (!is_tridiagonal(A)) throw Error(ErrorKind::BadShape, "matrix is not tridiagonal");
  const auto& a = A.dense();
  const Index n = A.n();
  std::vector<cplx> d(static_cast<std::size_t>(n));
  std::vector<cplx> e(static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (Index k = 0; k < n; ++k) {
    d[k] = a(k, k);
    if (k + 1 < n) e[k] = std::sqrt(a(k + 1, k) * a(k, k + 1));
  }

  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = A.norm();
  const long budget = 30L * static_cast<long>(n);
  long total = 0;

  for (Index l = 0; l < n; ++l) {
    for (;;) {
      Index m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * (dd > 0 ? dd : scale)) break;
      }
      if (m == l) break;
      if (++total > budget) {
        throw Error(ErrorKind::NoConvergence, "complex symmetric QL did not converge within " +
                                                  std::to_string(budget) + " iterations");
      }
      cplx g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      cplx r = std::sqrt(g * g + 1.0);
      const cplx denom = std::abs(g + r) >= std::abs(g - r) ? g + r : g - r;
      g = d[m] - d[l] + e[l] / denom;
      cplx s(1.0, 0.0), c(1.0, 0.0), p(0.0, 0.0);
      for (Index i = m - 1; i >= l; --i) {
        const cplx f = s * e[i];
        const cplx b = c * e[i];
        r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        // complex orthogonal rotations break down when f^2 + g^2 cancels
        if (std::abs(r) <= eps * (std::abs(f) + std::abs(g))) {
          throw Error(ErrorKind::NoConvergence, "complex symmetric QL breakdown");
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  return Eigen::Map<const Eigen::VectorXcd>(d.data(), n);
}

}  // namespace spectral_lt
