#pragma once

// Complex plane rotations G = [c s; -conj(s) c] with real c, shared by the
// QR iteration and the Schur reordering.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace spectral_lt::detail {

struct Rotation {
  double c = 1.0;
  std::complex<double> s{0.0, 0.0};
};

// Chooses G so that G * [a; b] = [r; 0].
inline Rotation make_rotation(std::complex<double> a, std::complex<double> b,
                              std::complex<double>* r = nullptr) {
  const double na = std::abs(a);
  const double nb = std::abs(b);
  Rotation g;
  if (nb == 0.0) {
    if (r) *r = a;
    return g;
  }
  if (na == 0.0) {
    g.c = 0.0;
    g.s = std::conj(b) / nb;
    if (r) *r = nb;
    return g;
  }
  const double nrm = std::hypot(na, nb);
  const std::complex<double> phase = a / na;
  g.c = na / nrm;
  g.s = phase * std::conj(b) / nrm;
  if (r) *r = phase * nrm;
  return g;
}

// M(p, first..last) and M(q, first..last) <- G applied from the left.
inline void rotate_rows(Eigen::MatrixXcd& m, Eigen::Index p, Eigen::Index q, Eigen::Index first,
                        Eigen::Index last, const Rotation& g) {
  const std::complex<double> sc = std::conj(g.s);
  for (Eigen::Index j = first; j <= last; ++j) {
    const std::complex<double> x = m(p, j);
    const std::complex<double> y = m(q, j);
    m(p, j) = g.c * x + g.s * y;
    m(q, j) = g.c * y - sc * x;
  }
}

// M(first..last, p) and M(first..last, q) <- G^dagger applied from the right.
inline void rotate_cols(Eigen::MatrixXcd& m, Eigen::Index p, Eigen::Index q, Eigen::Index first,
                        Eigen::Index last, const Rotation& g) {
  const std::complex<double> sc = std::conj(g.s);
  std::complex<double>* cp = m.col(p).data();
  std::complex<double>* cq = m.col(q).data();
  for (Eigen::Index i = first; i <= last; ++i) {
    const std::complex<double> x = cp[i];
    const std::complex<double> y = cq[i];
    cp[i] = g.c * x + sc * y;
    cq[i] = g.c * y - g.s * x;
  }
}

}  // namespace spectral_lt::detail
