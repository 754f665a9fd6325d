#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spectral_lt/linalg.hpp"

namespace spectral_lt {
namespace {

constexpr int kSweepsPerEigenvalue = 40;

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // off[k] couples k and k+1
};

// Householder tridiagonalization of a Hermitian matrix followed by a
// diagonal phase change that makes the off-diagonal real and nonnegative.
// When z is given it receives the accumulated unitary (Q * D).
Tridiagonal tridiagonalize(Eigen::MatrixXcd a, Eigen::MatrixXcd* z) {
  const Index n = a.rows();
  if (z) z->setIdentity(n, n);
  for (Index k = 0; k + 2 < n; ++k) {
    const Index m = n - k - 1;
    if (a.col(k).tail(m - 1).squaredNorm() == 0.0) continue;

    Eigen::VectorXcd v = a.col(k).tail(m);
    const double xnorm = v.norm();
    const cplx x0 = v(0);
    const cplx phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
    const cplx alpha = -phase * xnorm;
    v(0) -= alpha;
    v /= v.norm();

    // P A22 P with P = I - 2 v v^dagger as a Hermitian rank-2 update
    auto a22 = a.bottomRightCorner(m, m);
    const Eigen::VectorXcd p = a22.selfadjointView<Eigen::Lower>() * v;
    const cplx kappa = v.dot(p);
    const Eigen::VectorXcd w = p - kappa * v;
    a22.selfadjointView<Eigen::Lower>().rankUpdate(v, w, -2.0);

    a(k + 1, k) = alpha;
    a.col(k).tail(m - 1).setZero();
    if (z) {
      auto zr = z->rightCols(m);
      const Eigen::VectorXcd zv = zr * v;
      zr.noalias() -= 2.0 * zv * v.adjoint();
    }
  }

  Tridiagonal t;
  t.diag.resize(static_cast<std::size_t>(n));
  t.off.assign(static_cast<std::size_t>(n), 0.0);
  cplx phase(1.0, 0.0);
  for (Index k = 0; k < n; ++k) {
    t.diag[static_cast<std::size_t>(k)] = a(k, k).real();
    if (z && k > 0) z->col(k) *= phase;
    if (k + 1 < n) {
      const cplx e = a(k + 1, k);
      const double mag = std::abs(e);
      t.off[static_cast<std::size_t>(k)] = mag;
      if (mag > 0) phase *= e / mag;
    }
  }
  return t;
}

// Implicit-shift QL on a real symmetric tridiagonal matrix (tql2 layout:
// off[k] couples k and k+1). Rotations are accumulated into z if present.
void implicit_ql(Tridiagonal& t, Eigen::MatrixXcd* z) {
  const Index n = static_cast<Index>(t.diag.size());
  std::vector<double>& d = t.diag;
  std::vector<double>& e = t.off;
  const double eps = std::numeric_limits<double>::epsilon();
  const long budget = static_cast<long>(kSweepsPerEigenvalue) * static_cast<long>(n);
  long total = 0;

  for (Index l = 0; l < n; ++l) {
    for (;;) {
      Index m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++total > budget) {
        throw Error(ErrorKind::NoConvergence,
                    "tridiagonal QL did not converge within " + std::to_string(budget) + " sweeps");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      Index i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z) {
          cplx* zi = z->col(i).data();
          cplx* zi1 = z->col(i + 1).data();
          for (Index k = 0; k < n; ++k) {
            const cplx a1 = zi1[k];
            const cplx a0 = zi[k];
            zi1[k] = s * a0 + c * a1;
            zi[k] = c * a0 - s * a1;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

Eigen::MatrixXcd checked_hermitian(const ComplexMatrix& H, const ToleranceConfig& tol) {
  tol.validate();
  if (!is_hermitian(H, tol.tol_orth)) {
    throw Error(ErrorKind::NotHermitian, "||H - H^dagger|| exceeds tol_orth * ||H||");
  }
  return 0.5 * (H.dense() + H.dense().adjoint());
}

}  // namespace

HermitianSpectrum hermitian_eigen(const ComplexMatrix& H, const ToleranceConfig& tol) {
  Eigen::MatrixXcd z;
  Tridiagonal t = tridiagonalize(checked_hermitian(H, tol), &z);
  implicit_ql(t, &z);

  const Index n = H.n();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return t.diag[a] < t.diag[b]; });
  HermitianSpectrum out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = t.diag[order[k]];
    out.vectors.col(k) = z.col(order[k]);
  }
  return out;
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& H, const ToleranceConfig& tol) {
  Tridiagonal t = tridiagonalize(checked_hermitian(H, tol), nullptr);
  implicit_ql(t, nullptr);
  std::sort(t.diag.begin(), t.diag.end());
  return Eigen::Map<const Eigen::VectorXd>(t.diag.data(), static_cast<Index>(t.diag.size()));
}

}  // namespace spectral_lt
