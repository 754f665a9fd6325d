#pragma once

// Finite-difference realizations of one-dimensional Schrodinger-type
// operators  -h^2 d^2/dx^2 + i (a d/dx + d/dx a) + V  with complex V and a,
// together with the rotated self-adjoint family, complex-scaled operators
// and the upper-triangular counterexample family.

#include <string>
#include <string_view>

#include "spectral_lt/linalg.hpp"

namespace spectral_lt {

/// Uniform grid of n interior points on (x_min, x_max), Dirichlet ends.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, Index n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  Index n() const { return n_; }
  double spacing() const { return (x_max_ - x_min_) / static_cast<double>(n_ + 1); }
  double point(Index i) const { return x_min_ + static_cast<double>(i + 1) * spacing(); }
  Eigen::VectorXd points() const;

 private:
  double x_min_;
  double x_max_;
  Index n_;
};

/// Sampled coefficients of the operator. An empty drift means a = 0.
struct OperatorSpec {
  Eigen::VectorXcd potential;
  Eigen::VectorXcd drift;
  double h = 1.0;

  void validate(const Grid1D& grid) const;
  Eigen::VectorXcd drift_or_zero(Index n) const;
};

/// Closed-form coefficient profiles that can be evaluated off the real axis,
/// which is what complex scaling needs: f(z) = coupling * shape(z).
enum class ProfileShape { Zero, Constant, Sech2, Gaussian, Harmonic };

struct AnalyticProfile {
  ProfileShape shape = ProfileShape::Zero;
  cplx coupling{0.0, 0.0};

  cplx operator()(cplx z) const;
  Eigen::VectorXcd samples(const Grid1D& grid) const;
  /// Samples of x -> f(e^{i theta/2} x).
  Eigen::VectorXcd scaled_samples(const Grid1D& grid, double theta) const;
};

ProfileShape parse_profile_shape(std::string_view name);
std::string_view to_string(ProfileShape shape);

/// -d^2/dx^2 with the (2, -1, -1)/dx^2 stencil.
ComplexMatrix second_difference(const Grid1D& grid);

/// d/dx with the centred stencil; exactly antisymmetric.
ComplexMatrix central_difference(const Grid1D& grid);

/// h^2 D2 + i (M_a Dc + Dc M_a) + M_V
ComplexMatrix build_schrodinger(const Grid1D& grid, const OperatorSpec& spec);

/// cot(alpha) with the value at +-pi/2 pinned to exactly zero.
/// Throws AlphaSingular when |sin(alpha)| < 1e-12.
double cot_angle(double alpha);

/// b(alpha) = Re a - cot(alpha) Im a, W(alpha) = Re V - cot(alpha) Im V.
struct TiltedFields {
  Eigen::VectorXd drift;
  Eigen::VectorXd potential;
};
TiltedFields tilted_fields(const OperatorSpec& spec, double alpha);

/// Self-adjoint H(alpha) = h^2 D2 + i (M_b Dc + Dc M_b) + M_W with the tilted
/// fields. Its expansion equals (i d/dx + b)^2 - b^2 + W.
ComplexMatrix rotated_hamiltonian(const Grid1D& grid, const OperatorSpec& spec, double alpha);

/// e^{-i theta} h^2 D2 + M_{V(e^{i theta/2} x)}; the caller supplies the
/// continued potential samples.
ComplexMatrix complex_scaled(const Grid1D& grid, const Eigen::VectorXcd& v_scaled, double theta,
                             double h);

/// w(x) = h^{-2} / sin(alpha) * Re(e^{-i(alpha - theta - pi/2)} V(e^{i theta/2} x))
Eigen::VectorXd resonance_test_potential(const Eigen::VectorXcd& v_scaled, double theta,
                                         double alpha, double h);

/// D2 + M_w with w from resonance_test_potential.
ComplexMatrix resonance_test_hamiltonian(const Grid1D& grid, const Eigen::VectorXcd& v_scaled,
                                         double theta, double alpha, double h);

/// n x n: -1 on the diagonal, -2 strictly above it.
ComplexMatrix bony_counterexample(Index n);

}  // namespace spectral_lt
