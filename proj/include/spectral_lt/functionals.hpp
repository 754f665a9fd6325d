#pragma once

// Scalar quantities built from spectra and potentials: eigenvalue moments,
// Riesz means and their lifting in the exponent, Lieb-Thirring constants,
// potential integrals and Ky Fan frame sums.

#include <numbers>

#include "spectral_lt/linalg.hpp"
#include "spectral_lt/operators.hpp"

namespace spectral_lt {

struct MomentValue {
  double value = 0.0;
  double gamma = 1.0;
  int count = 0;  // contributing eigenvalues, multiplicity included
};

// All `threshold` arguments below are absolute; callers usually pass
// ToleranceConfig::zero_threshold(||A||).

/// sum over E_j < -threshold of (-E_j)^gamma
MomentValue negative_trace_moment(const Eigen::VectorXd& eigenvalues, double gamma,
                                  double threshold);
MomentValue negative_trace_moment(const HermitianSpectrum& spec, double gamma, double threshold);

/// sum over Re lambda < -threshold of m(lambda) (-Re lambda)^gamma
MomentValue real_part_moment(const Spectrum& spec, double gamma, double threshold);

/// With c = e^{-i(alpha - pi/2)}, sums |sin alpha|^{-gamma} (sign Re(c lambda))_-^gamma
/// over eigenvalues with sign Re(c lambda) < -threshold. For sign equal to the
/// sign of sin(alpha) each term is (-Re lambda + cot(alpha) Im lambda)^gamma.
MomentValue tilted_moment(const Spectrum& spec, double gamma, double alpha, int sign,
                          double threshold);

/// sign * e^{i[alpha + epsilon, alpha - epsilon + pi]} R^+, closed.
struct SectorSpec {
  double alpha = std::numbers::pi / 2;
  double epsilon = std::numbers::pi / 2;
  int sign = 1;

  /// Throws SectorDegenerate unless epsilon in (0, pi/2] and sign is +-1.
  void validate() const;
  bool contains(cplx z) const;
};

/// sum of m(lambda) |lambda|^gamma over eigenvalues inside the sector
MomentValue sector_moment(const Spectrum& spec, double gamma, const SectorSpec& sector);

/// Quadrature check of  C_gamma s_-^gamma = int_0^inf t^{gamma-2} (s+t)_- dt.
struct LiftResult {
  double numeric = 0.0;
  double closed = 0.0;
};

/// 1 / (gamma (gamma - 1)); throws GammaOutOfRange for gamma <= 1.
double lift_constant(double gamma);

/// The integral is taken over [0, -s] after the substitution t = -s u^q with
/// q (gamma - 1) a positive integer, which removes the endpoint singularity of
/// t^{gamma-2}; the transformed integrand is then summed by the composite
/// midpoint rule.
LiftResult aizenman_lieb_lift(double s, double gamma, int panels = 10000);

/// int_0^T t^{gamma-2} Tr(H + t)_- dt with T = -min E (zero when H >= 0),
/// same quadrature as aizenman_lieb_lift. Equals C_gamma Tr(H)_-^gamma.
double riesz_mean_lift(const Eigen::VectorXd& eigenvalues, double gamma, int panels = 10000);

enum class ConstantProvenance { ClassicalFormula, UserSupplied };

struct LTConstant {
  double gamma = 1.5;
  double d = 1.0;
  double value = 0.1875;
  ConstantProvenance provenance = ConstantProvenance::ClassicalFormula;

  /// Same constant scaled by `factor` (> 0); provenance becomes user-supplied
  /// unless factor is exactly 1.
  LTConstant scaled(double factor) const;
};

/// Gamma(gamma + 1) / ((4 pi)^{d/2} Gamma(gamma + 1 + d/2))
LTConstant classical_lt_constant(double gamma, double d = 1.0);
LTConstant user_lt_constant(double gamma, double d, double value);

/// Composite trapezoid rule over the grid's interior points.
double trapezoid(const Grid1D& grid, const Eigen::VectorXd& samples);

/// L * int [W - b^2]_-^{gamma + d/2} dx
double rhs_lt_integral(const Grid1D& grid, const Eigen::VectorXd& W, const Eigen::VectorXd& b,
                       double gamma, const LTConstant& L, double d = 1.0);

/// (1/4) (int |V| dx)^2
double aad_single_eigenvalue_bound(const Grid1D& grid, const Eigen::VectorXcd& V);

/// h^{-d} L / ((sin eps)^gamma (sin(theta - phi - eps))^{d/2})
///   * int [Im(e^{i(phi + eps)} V_scaled)]_+^{gamma + d/2} dx
/// Throws SectorDegenerate unless 0 < eps < theta - phi.
double resonance_moment_rhs(const Grid1D& grid, const Eigen::VectorXcd& v_scaled, double gamma,
                            double phi, double epsilon, double theta, double h,
                            const LTConstant& L, double d = 1.0);

struct KyFanSum {
  double value = 0.0;
  double imaginary_residue = 0.0;  // |Im sum <H u_k, u_k>|, diagnostic only
};

/// sum_k <H u_k, u_k> over the columns of `frame`.
/// Throws NotHermitian, NotOrthonormal or ShapeMismatch.
KyFanSum kyfan_sum(const ComplexMatrix& H, const Eigen::MatrixXcd& frame,
                   const ToleranceConfig& tol = {});

/// E_1 + ... + E_{N'} + (N - N') E_{N'+1}; eigenvalues ascending.
/// Throws BadShape unless 0 <= N' <= N <= n.
double kyfan_lower_bound(const Eigen::VectorXd& eigenvalues, Index N, Index N_prime);

}  // namespace spectral_lt
