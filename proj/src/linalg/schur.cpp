#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "givens.hpp"
#include "spectral_lt/linalg.hpp"

namespace spectral_lt {
namespace {

using detail::make_rotation;
using detail::Rotation;
using detail::rotate_cols;
using detail::rotate_rows;

constexpr int kIterationsPerEigenvalue = 30;

void swap_index(Eigen::MatrixXcd& h, std::vector<Index>& perm, Index a, Index b) {
  if (a == b) return;
  h.row(a).swap(h.row(b));
  h.col(a).swap(h.col(b));
  std::swap(perm[a], perm[b]);
}

// Permutation-only balancing: pushes rows that isolate an eigenvalue to the
// bottom and such columns to the top. A permutation is unitary, so the
// resulting Schur vectors stay orthonormal. Returns perm with
// h_balanced = P^T h P, P(:, k) = e_{perm[k]}.
std::vector<Index> permute_isolated(Eigen::MatrixXcd& h) {
  const Index n = h.rows();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Index lo = 0;
  Index hi = n - 1;

  bool found = true;
  while (found && hi > lo) {
    found = false;
    for (Index j = hi; j >= lo; --j) {
      bool isolated = true;
      for (Index k = lo; k <= hi && isolated; ++k) {
        if (k != j && h(j, k) != cplx(0.0, 0.0)) isolated = false;
      }
      if (isolated) {
        swap_index(h, perm, j, hi);
        --hi;
        found = true;
        break;
      }
    }
  }
  found = true;
  while (found && hi > lo) {
    found = false;
    for (Index j = lo; j <= hi; ++j) {
      bool isolated = true;
      for (Index k = lo; k <= hi && isolated; ++k) {
        if (k != j && h(k, j) != cplx(0.0, 0.0)) isolated = false;
      }
      if (isolated) {
        swap_index(h, perm, j, lo);
        ++lo;
        found = true;
        break;
      }
    }
  }
  return perm;
}

// Householder reduction to upper Hessenberg form. Columns whose part below
// the subdiagonal is already zero are skipped, so banded input costs O(n^2).
void reduce_hessenberg(Eigen::MatrixXcd& h, Eigen::MatrixXcd* q) {
  const Index n = h.rows();
  for (Index k = 0; k + 2 < n; ++k) {
    const Index m = n - k - 1;
    if (h.col(k).tail(m - 1).squaredNorm() == 0.0) continue;

    Eigen::VectorXcd v = h.col(k).tail(m);
    const double xnorm = v.norm();
    const cplx x0 = v(0);
    const cplx phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
    const cplx alpha = -phase * xnorm;
    v(0) -= alpha;
    v /= v.norm();

    // Left: rows k+1.., columns k..n-1
    auto left = h.bottomRightCorner(m, n - k);
    const Eigen::RowVectorXcd vl = v.adjoint() * left;
    left.noalias() -= 2.0 * v * vl;
    // Right: all rows, columns k+1..
    auto right = h.rightCols(m);
    const Eigen::VectorXcd rv = right * v;
    right.noalias() -= 2.0 * rv * v.adjoint();
    if (q) {
      auto qr = q->rightCols(m);
      const Eigen::VectorXcd qv = qr * v;
      qr.noalias() -= 2.0 * qv * v.adjoint();
    }
    h(k + 1, k) = alpha;
    h.col(k).tail(m - 1).setZero();
  }
}

cplx wilkinson_shift(const Eigen::MatrixXcd& h, Index iu) {
  const cplx a = h(iu - 1, iu - 1);
  const cplx b = h(iu - 1, iu);
  const cplx c = h(iu, iu - 1);
  const cplx d = h(iu, iu);
  const double scale = std::abs(a) + std::abs(b) + std::abs(c) + std::abs(d);
  if (scale == 0.0) return d;
  const cplx t00 = a / scale, t01 = b / scale, t10 = c / scale, t11 = d / scale;
  const cplx prod = t01 * t10;
  const cplx diff = t00 - t11;
  const cplx disc = std::sqrt(diff * diff + 4.0 * prod);
  const cplx det = t00 * t11 - prod;
  const cplx trace = t00 + t11;
  cplx e1 = 0.5 * (trace + disc);
  cplx e2 = 0.5 * (trace - disc);
  // recover the smaller root from the determinant to avoid cancellation
  if (std::norm(e1) > std::norm(e2)) {
    e2 = det / e1;
  } else if (std::norm(e2) > 0.0) {
    e1 = det / e2;
  }
  const cplx pick = std::norm(e1 - t11) < std::norm(e2 - t11) ? e1 : e2;
  return pick * scale;
}

// Single-shift complex QR on an upper Hessenberg matrix. With `full` the
// whole matrix is updated (Schur form); otherwise only the active window,
// which is enough for eigenvalues.
void hessenberg_qr(Eigen::MatrixXcd& h, Eigen::MatrixXcd* q, bool full) {
  const Index n = h.rows();
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::min() / eps;
  const long budget = static_cast<long>(kIterationsPerEigenvalue) * static_cast<long>(n);
  long total = 0;
  int iter = 0;
  Index iu = n - 1;

  while (iu > 0) {
    Index il = iu;
    while (il > 0) {
      double s = std::abs(h(il - 1, il - 1)) + std::abs(h(il, il));
      if (s == 0.0) s = h.block(0, 0, iu + 1, iu + 1).norm();
      const double sub = std::abs(h(il, il - 1));
      if (sub <= eps * s || sub < tiny) {
        h(il, il - 1) = 0.0;
        break;
      }
      --il;
    }
    if (il == iu) {
      --iu;
      iter = 0;
      continue;
    }
    ++iter;
    if (++total > budget) {
      throw Error(ErrorKind::NoConvergence,
                  "complex QR did not converge within " + std::to_string(budget) + " iterations");
    }

    cplx shift;
    if (iter == 10 || iter == 20) {
      shift = std::abs(h(iu, iu - 1).real());
      if (iu - 2 >= il) shift += std::abs(h(iu - 1, iu - 2).real());
    } else {
      shift = wilkinson_shift(h, iu);
    }

    const Index col_end = full ? n - 1 : iu;
    const Index row_begin = full ? 0 : il;

    Rotation g = make_rotation(h(il, il) - shift, h(il + 1, il));
    rotate_rows(h, il, il + 1, il, col_end, g);
    rotate_cols(h, il, il + 1, row_begin, std::min(il + 2, iu), g);
    if (q) rotate_cols(*q, il, il + 1, 0, n - 1, g);

    for (Index k = il + 1; k < iu; ++k) {
      cplx r;
      g = make_rotation(h(k, k - 1), h(k + 1, k - 1), &r);
      h(k, k - 1) = r;
      h(k + 1, k - 1) = 0.0;
      rotate_rows(h, k, k + 1, k, col_end, g);
      rotate_cols(h, k, k + 1, row_begin, std::min(k + 2, iu), g);
      if (q) rotate_cols(*q, k, k + 1, 0, n - 1, g);
    }
  }
}

}  // namespace

SchurForm schur(const ComplexMatrix& A, const ToleranceConfig& tol) {
  tol.validate();
  const Index n = A.n();
  Eigen::MatrixXcd h = A.dense();
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(n, n);
  if (tol.balance) {
    const std::vector<Index> perm = permute_isolated(h);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (Index k = 0; k < n; ++k) p(perm[static_cast<std::size_t>(k)], k) = 1.0;
    q = p;
  }
  reduce_hessenberg(h, &q);
  hessenberg_qr(h, &q, true);
  h.triangularView<Eigen::StrictlyLower>().setZero();
  return SchurForm{std::move(q), std::move(h)};
}

Eigen::VectorXcd complex_eigenvalues(const ComplexMatrix& A, const ToleranceConfig& tol) {
  tol.validate();
  Eigen::MatrixXcd h = A.dense();
  if (tol.balance) permute_isolated(h);
  reduce_hessenberg(h, nullptr);
  hessenberg_qr(h, nullptr, false);
  return h.diagonal();
}

SchurForm schur_reorder(const SchurForm& S, const EigenvalueSelector& select,
                        const ToleranceConfig& tol) {
  tol.validate();
  SchurForm out = S;
  Eigen::MatrixXcd& t = out.T;
  const Index n = t.rows();
  const double limit = 10.0 * tol.tol_schur * std::max(t.norm(), std::numeric_limits<double>::min());

  std::vector<bool> chosen(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) chosen[static_cast<std::size_t>(k)] = select(t(k, k));

  Index dest = 0;
  for (Index i = 0; i < n; ++i) {
    if (!chosen[static_cast<std::size_t>(i)]) continue;
    for (Index k = i; k > dest; --k) {
      // swap diagonal positions k-1 and k
      const cplx t11 = t(k - 1, k - 1);
      const cplx t22 = t(k, k);
      const Rotation g = make_rotation(t(k - 1, k), t22 - t11);
      rotate_rows(t, k - 1, k, k - 1, n - 1, g);
      rotate_cols(t, k - 1, k, 0, k, g);
      rotate_cols(out.Q, k - 1, k, 0, n - 1, g);
      if (std::abs(t(k, k - 1)) > limit) {
        throw Error(ErrorKind::SwapIllConditioned,
                    "adjacent swap at position " + std::to_string(k) +
                        " left subdiagonal residual " + std::to_string(std::abs(t(k, k - 1))));
      }
      t(k, k - 1) = 0.0;
      t(k - 1, k - 1) = t22;
      t(k, k) = t11;
      std::swap(chosen[static_cast<std::size_t>(k - 1)], chosen[static_cast<std::size_t>(k)]);
    }
    ++dest;
  }
  return out;
}

}  // namespace spectral_lt
