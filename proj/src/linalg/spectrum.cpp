#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "spectral_lt/linalg.hpp"

namespace spectral_lt {
namespace {

Index find_root(std::vector<Index>& parent, Index k) {
  while (parent[static_cast<std::size_t>(k)] != k) {
    parent[static_cast<std::size_t>(k)] =
        parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(k)])];
    k = parent[static_cast<std::size_t>(k)];
  }
  return k;
}

bool exactly_hermitian(const Eigen::MatrixXcd& a) {
  for (Index c = 0; c < a.cols(); ++c) {
    if (a(c, c).imag() != 0.0) return false;
    for (Index r = c + 1; r < a.rows(); ++r) {
      if (a(r, c) != std::conj(a(c, r))) return false;
    }
  }
  return true;
}

}  // namespace

Spectrum cluster_values(std::span<const cplx> values, double radius) {
  const Index n = static_cast<Index>(values.size());
  std::vector<Index> parent(values.size());
  std::iota(parent.begin(), parent.end(), Index{0});

  // single linkage; sort by real part so only a sliding window is compared
  std::vector<Index> order(values.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values[a].real() < values[b].real(); });
  for (Index i = 0; i < n; ++i) {
    const cplx zi = values[order[i]];
    for (Index j = i + 1; j < n; ++j) {
      const cplx zj = values[order[j]];
      if (zj.real() - zi.real() > radius) break;
      if (std::abs(zj - zi) <= radius) {
        const Index ri = find_root(parent, order[i]);
        const Index rj = find_root(parent, order[j]);
        if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
      }
    }
  }

  // clusters reported in order of their first member
  std::vector<Index> slot(values.size(), -1);
  std::vector<std::vector<Index>> members;
  for (Index k = 0; k < n; ++k) {
    const Index root = find_root(parent, k);
    if (slot[static_cast<std::size_t>(root)] < 0) {
      slot[static_cast<std::size_t>(root)] = static_cast<Index>(members.size());
      members.emplace_back();
    }
    members[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(k);
  }

  Spectrum out;
  for (const auto& group : members) {
    cplx mean(0.0, 0.0);
    for (Index k : group) mean += values[k];
    mean /= static_cast<double>(group.size());
    double spread = 0.0;
    for (Index k : group) spread = std::max(spread, std::abs(values[k] - mean));
    out.values.push_back(mean);
    out.multiplicities.push_back(static_cast<int>(group.size()));
    out.residuals.push_back(spread);
  }
  return out;
}

Spectrum cluster_spectrum(const SchurForm& S, const ToleranceConfig& tol) {
  tol.validate();
  const Eigen::VectorXcd d = S.diagonal();
  const double radius = tol.cluster_radius * S.T.norm();
  Spectrum out = cluster_values(std::span<const cplx>(d.data(), static_cast<std::size_t>(d.size())),
                                radius);
  return out;
}

Spectrum spectrum_of(const ComplexMatrix& A, const ToleranceConfig& tol, Index schur_limit) {
  tol.validate();
  const double radius = tol.cluster_radius * A.norm();
  if (exactly_hermitian(A.dense())) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(A, tol);
    std::vector<cplx> z(ev.data(), ev.data() + ev.size());
    return cluster_values(z, radius);
  }
  if (A.n() > schur_limit) {
    Eigen::VectorXcd ev;
    bool done = false;
    if (is_tridiagonal(A)) {
      try {
        ev = tridiagonal_eigenvalues(A, tol);
        // trace invariance guards against silent loss of accuracy
        done = std::abs(ev.sum() - A.dense().trace()) <= tol.tol_eig * A.norm();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoConvergence) throw;
      }
    }
    if (!done) ev = complex_eigenvalues(A, tol);
    return cluster_values(std::span<const cplx>(ev.data(), static_cast<std::size_t>(ev.size())),
                          radius);
  }
  const SchurForm s = schur(A, tol);
  Spectrum out = cluster_spectrum(s, tol);
  out.backward_error = s.reconstruction_residual(A);
  return out;
}

Eigen::MatrixXcd random_orthonormal_frame(Index n, Index N, std::uint64_t seed) {
  if (N < 1 || N > n) {
    throw Error(ErrorKind::BadShape, "frame size N=" + std::to_string(N) +
                                         " must satisfy 1 <= N <= n=" + std::to_string(n));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd u(n, N);
  for (Index c = 0; c < N; ++c) {
    for (Index r = 0; r < n; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      u(r, c) = cplx(re * s, im * s);
    }
  }
  orthonormalize_columns(u);
  return u;
}

void orthonormalize_columns(Eigen::MatrixXcd& u) {
  for (Index c = 0; c < u.cols(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index p = 0; p < c; ++p) {
        const cplx proj = u.col(p).dot(u.col(c));
        u.col(c) -= proj * u.col(p);
      }
    }
    u.col(c).normalize();
  }
}

}  // namespace spectral_lt
