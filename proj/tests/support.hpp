#pragma once

// Test-side helpers: random inputs and oracles that do not go through the
// library's own solvers.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spectral_lt/linalg.hpp"

namespace testing_support {

using spectral_lt::ComplexMatrix;
using spectral_lt::cplx;
using spectral_lt::Index;

inline Eigen::MatrixXcd gaussian_matrix(Index n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXcd m(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) m(r, c) = cplx(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_complex(Index n, std::uint64_t seed) {
  return ComplexMatrix(gaussian_matrix(n, seed));
}

inline ComplexMatrix random_hermitian_oracle(Index n, std::uint64_t seed) {
  const Eigen::MatrixXcd g = gaussian_matrix(n, seed);
  return ComplexMatrix(0.5 * (g + g.adjoint()));
}

// Coefficients c_0..c_n of det(x I - A) = sum c_k x^k (Faddeev-LeVerrier).
inline std::vector<cplx> charpoly(const Eigen::MatrixXcd& A) {
  const Index n = A.rows();
  std::vector<cplx> c(n + 1);
  c[n] = 1.0;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (Index k = 1; k <= n; ++k) {
    M = A * M + c[n - k + 1] * I;
    c[n - k] = -(A * M).trace() / static_cast<double>(k);
  }
  return c;
}

// Coefficients of prod (x - lambda_k).
inline std::vector<cplx> poly_from_roots(const Eigen::VectorXcd& roots) {
  std::vector<cplx> c{1.0};
  for (Index k = 0; k < roots.size(); ++k) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] += c[j];
      next[j] -= roots[k] * c[j];
    }
    c = std::move(next);
  }
  return c;
}

// Largest distance under a greedy nearest-neighbour matching of two multisets.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

inline std::vector<cplx> to_vector(const Eigen::VectorXcd& v) {
  return std::vector<cplx>(v.data(), v.data() + v.size());
}

// Eigenvalues of A with multiplicity, expanded from a Spectrum.
inline std::vector<cplx> expand(const spectral_lt::Spectrum& s) {
  std::vector<cplx> out;
  for (std::size_t k = 0; k < s.size(); ++k)
    for (int m = 0; m < s.multiplicities[k]; ++m) out.push_back(s.values[k]);
  return out;
}

}  // namespace testing_support
