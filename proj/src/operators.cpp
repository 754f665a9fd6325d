#include "spectral_lt/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace spectral_lt {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void require_length(const Eigen::VectorXcd& v, Index n, const char* what) {
  if (v.size() != n) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " has " + std::to_string(v.size()) +
                                              " samples, grid has " + std::to_string(n));
  }
}

// h^2 D2 + i (M_b Dc + Dc M_b) + M_w assembled entrywise.
Eigen::MatrixXcd assemble(const Grid1D& grid, cplx kinetic, const Eigen::VectorXcd& drift,
                          const Eigen::VectorXcd& potential) {
  const Index n = grid.n();
  const double dx = grid.spacing();
  const double inv_dx2 = 1.0 / (dx * dx);
  const cplx iu(0.0, 1.0);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    a(k, k) = kinetic * (2.0 * inv_dx2) + potential(k);
    if (k + 1 < n) {
      const cplx s = (drift(k) + drift(k + 1)) / (2.0 * dx);
      a(k, k + 1) = -kinetic * inv_dx2 + iu * s;
      a(k + 1, k) = -kinetic * inv_dx2 - iu * s;
    }
  }
  return a;
}

}  // namespace

Grid1D::Grid1D(double x_min, double x_max, Index n) : x_min_(x_min), x_max_(x_max), n_(n) {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorKind::InvalidArgument, "grid requires finite x_min < x_max");
  }
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "grid requires n >= 3 interior points");
}

Eigen::VectorXd Grid1D::points() const {
  Eigen::VectorXd x(n_);
  for (Index i = 0; i < n_; ++i) x(i) = point(i);
  return x;
}

void OperatorSpec::validate(const Grid1D& grid) const {
  require_length(potential, grid.n(), "potential");
  if (drift.size() != 0) require_length(drift, grid.n(), "drift");
  if (!(h > 0) || !std::isfinite(h)) throw Error(ErrorKind::InvalidArgument, "h must be positive");
  if (!potential.allFinite() || !drift.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "operator samples must be finite");
  }
}

Eigen::VectorXcd OperatorSpec::drift_or_zero(Index n) const {
  return drift.size() == 0 ? Eigen::VectorXcd::Zero(n) : drift;
}

cplx AnalyticProfile::operator()(cplx z) const {
  switch (shape) {
    case ProfileShape::Zero: return 0.0;
    case ProfileShape::Constant: return coupling;
    case ProfileShape::Sech2: {
      const cplx s = 1.0 / std::cosh(z);
      return coupling * s * s;
    }
    case ProfileShape::Gaussian: return coupling * std::exp(-z * z);
    case ProfileShape::Harmonic: return coupling * z * z;
  }
  return 0.0;
}

Eigen::VectorXcd AnalyticProfile::samples(const Grid1D& grid) const {
  Eigen::VectorXcd v(grid.n());
  for (Index i = 0; i < grid.n(); ++i) v(i) = (*this)(cplx(grid.point(i), 0.0));
  return v;
}

Eigen::VectorXcd AnalyticProfile::scaled_samples(const Grid1D& grid, double theta) const {
  const cplx rot = std::polar(1.0, theta / 2.0);
  Eigen::VectorXcd v(grid.n());
  for (Index i = 0; i < grid.n(); ++i) v(i) = (*this)(rot * grid.point(i));
  return v;
}

ProfileShape parse_profile_shape(std::string_view name) {
  if (name == "zero") return ProfileShape::Zero;
  if (name == "const" || name == "constant") return ProfileShape::Constant;
  if (name == "sech2") return ProfileShape::Sech2;
  if (name == "gaussian") return ProfileShape::Gaussian;
  if (name == "harmonic") return ProfileShape::Harmonic;
  throw Error(ErrorKind::InvalidArgument, "unknown profile '" + std::string(name) + "'");
}

std::string_view to_string(ProfileShape shape) {
  switch (shape) {
    case ProfileShape::Zero: return "zero";
    case ProfileShape::Constant: return "const";
    case ProfileShape::Sech2: return "sech2";
    case ProfileShape::Gaussian: return "gaussian";
    case ProfileShape::Harmonic: return "harmonic";
  }
  return "zero";
}

ComplexMatrix second_difference(const Grid1D& grid) {
  const Index n = grid.n();
  return ComplexMatrix(assemble(grid, 1.0, Eigen::VectorXcd::Zero(n), Eigen::VectorXcd::Zero(n)));
}

ComplexMatrix central_difference(const Grid1D& grid) {
  const Index n = grid.n();
  const double c = 1.0 / (2.0 * grid.spacing());
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  for (Index k = 0; k + 1 < n; ++k) {
    d(k, k + 1) = c;
    d(k + 1, k) = -c;
  }
  return ComplexMatrix(std::move(d));
}

ComplexMatrix build_schrodinger(const Grid1D& grid, const OperatorSpec& spec) {
  spec.validate(grid);
  return ComplexMatrix(
      assemble(grid, spec.h * spec.h, spec.drift_or_zero(grid.n()), spec.potential));
}

double cot_angle(double alpha) {
  const double s = std::sin(alpha);
  if (std::abs(s) < 1e-12) {
    throw Error(ErrorKind::AlphaSingular, "sin(alpha) vanishes for alpha=" + std::to_string(alpha));
  }
  if (alpha == kHalfPi || alpha == -kHalfPi) return 0.0;
  return std::cos(alpha) / s;
}

TiltedFields tilted_fields(const OperatorSpec& spec, double alpha) {
  const double cot = cot_angle(alpha);
  const Index n = spec.potential.size();
  const Eigen::VectorXcd a = spec.drift_or_zero(n);
  TiltedFields f;
  f.drift = a.real() - cot * a.imag();
  f.potential = spec.potential.real() - cot * spec.potential.imag();
  return f;
}

ComplexMatrix rotated_hamiltonian(const Grid1D& grid, const OperatorSpec& spec, double alpha) {
  spec.validate(grid);
  const TiltedFields f = tilted_fields(spec, alpha);
  return ComplexMatrix(assemble(grid, spec.h * spec.h, f.drift.cast<cplx>(),
                                f.potential.cast<cplx>()));
}

ComplexMatrix complex_scaled(const Grid1D& grid, const Eigen::VectorXcd& v_scaled, double theta,
                             double h) {
  require_length(v_scaled, grid.n(), "scaled potential");
  if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "h must be positive");
  const cplx kinetic = std::polar(h * h, -theta);
  return ComplexMatrix(assemble(grid, kinetic, Eigen::VectorXcd::Zero(grid.n()), v_scaled));
}

Eigen::VectorXd resonance_test_potential(const Eigen::VectorXcd& v_scaled, double theta,
                                         double alpha, double h) {
  const double s = std::sin(alpha);
  if (std::abs(s) < 1e-12) {
    throw Error(ErrorKind::AlphaSingular, "sin(alpha) vanishes for alpha=" + std::to_string(alpha));
  }
  const cplx phase = std::polar(1.0, -(alpha - theta - kHalfPi));
  const double factor = 1.0 / (h * h * s);
  Eigen::VectorXd w(v_scaled.size());
  for (Index i = 0; i < v_scaled.size(); ++i) w(i) = factor * (phase * v_scaled(i)).real();
  return w;
}

ComplexMatrix resonance_test_hamiltonian(const Grid1D& grid, const Eigen::VectorXcd& v_scaled,
                                         double theta, double alpha, double h) {
  require_length(v_scaled, grid.n(), "scaled potential");
  const Eigen::VectorXd w = resonance_test_potential(v_scaled, theta, alpha, h);
  return ComplexMatrix(
      assemble(grid, 1.0, Eigen::VectorXcd::Zero(grid.n()), w.cast<cplx>()));
}

ComplexMatrix bony_counterexample(Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "counterexample dimension must be >= 1");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    a(j, j) = -1.0;
    for (Index k = j + 1; k < n; ++k) a(j, k) = -2.0;
  }
  return ComplexMatrix(std::move(a));
}

}  // namespace spectral_lt
