#include "spectral_lt/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace spectral_lt {
namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_gamma(double gamma) {
  if (!(gamma > 0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::GammaOutOfRange, "moment order must be positive, got " +
                                                std::to_string(gamma));
  }
}

void require_samples(const Grid1D& grid, Index size, const char* what) {
  if (size != grid.n()) {
    throw Error(ErrorKind::ShapeMismatch, std::string(what) + " has " + std::to_string(size) +
                                              " samples, grid has " + std::to_string(grid.n()));
  }
}

// Smallest positive integer m with q = m / (gamma - 1) >= 1.
double lift_exponent(double gamma) {
  const double m = std::max(1.0, std::ceil(gamma - 1.0 - 1e-12));
  return m / (gamma - 1.0);
}

// int_0^T t^{gamma-2} f(t) dt with t = T u^q; f must vanish at t = T.
template <class F>
double lifted_integral(double T, double gamma, int panels, F&& f) {
  if (panels < 1) throw Error(ErrorKind::InvalidArgument, "panel count must be positive");
  if (!(T > 0)) return 0.0;
  const double q = lift_exponent(gamma);
  const double m = q * (gamma - 1.0);
  const double du = 1.0 / panels;
  double sum = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double u = (k + 0.5) * du;
    const double t = T * std::pow(u, q);
    // t^{gamma-2} dt = T^{gamma-1} q u^{m-1} du
    sum += std::pow(u, m - 1.0) * f(t);
  }
  return sum * du * q * std::pow(T, gamma - 1.0);
}

}  // namespace

MomentValue negative_trace_moment(const Eigen::VectorXd& eigenvalues, double gamma,
                                  double threshold) {
  require_positive_gamma(gamma);
  MomentValue out;
  out.gamma = gamma;
  for (Index k = 0; k < eigenvalues.size(); ++k) {
    const double e = eigenvalues(k);
    if (e < -threshold) {
      out.value += std::pow(-e, gamma);
      ++out.count;
    }
  }
  return out;
}

MomentValue negative_trace_moment(const HermitianSpectrum& spec, double gamma, double threshold) {
  return negative_trace_moment(spec.values, gamma, threshold);
}

MomentValue real_part_moment(const Spectrum& spec, double gamma, double threshold) {
  require_positive_gamma(gamma);
  MomentValue out;
  out.gamma = gamma;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double re = spec.values[k].real();
    if (re < -threshold) {
      out.value += spec.multiplicities[k] * std::pow(-re, gamma);
      out.count += spec.multiplicities[k];
    }
  }
  return out;
}

MomentValue tilted_moment(const Spectrum& spec, double gamma, double alpha, int sign,
                          double threshold) {
  require_positive_gamma(gamma);
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  const double cot = cot_angle(alpha);
  const double s = std::sin(alpha);
  const double abs_sin = alpha == kPi / 2 || alpha == -kPi / 2 ? 1.0 : std::abs(s);
  const double orient = (s > 0 ? 1.0 : -1.0) * sign;
  MomentValue out;
  out.gamma = gamma;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const cplx z = spec.values[k];
    // |sin alpha| * t = -sign * Re(e^{-i(alpha - pi/2)} z)
    const double t = orient * (-z.real() + cot * z.imag());
    if (abs_sin * t > threshold) {
      out.value += spec.multiplicities[k] * std::pow(t, gamma);
      out.count += spec.multiplicities[k];
    }
  }
  return out;
}

void SectorSpec::validate() const {
  if (!(epsilon > 0) || epsilon > kPi / 2 + 1e-15) {
    throw Error(ErrorKind::SectorDegenerate,
                "sector opening requires epsilon in (0, pi/2], got " + std::to_string(epsilon));
  }
  if (sign != 1 && sign != -1) throw Error(ErrorKind::SectorDegenerate, "sign must be +1 or -1");
  if (!std::isfinite(alpha)) throw Error(ErrorKind::SectorDegenerate, "alpha must be finite");
}

bool SectorSpec::contains(cplx z) const {
  if (z == cplx(0.0, 0.0)) return true;
  const cplx w = sign > 0 ? z : -z;
  const double width = std::max(0.0, kPi - 2.0 * epsilon);
  double offset = std::fmod(std::arg(w) - (alpha + epsilon), 2.0 * kPi);
  if (offset < 0) offset += 2.0 * kPi;
  constexpr double slop = 1e-14;
  return offset <= width + slop || offset >= 2.0 * kPi - slop;
}

MomentValue sector_moment(const Spectrum& spec, double gamma, const SectorSpec& sector) {
  require_positive_gamma(gamma);
  sector.validate();
  MomentValue out;
  out.gamma = gamma;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (!sector.contains(spec.values[k])) continue;
    out.value += spec.multiplicities[k] * std::pow(std::abs(spec.values[k]), gamma);
    out.count += spec.multiplicities[k];
  }
  return out;
}

double lift_constant(double gamma) {
  if (!(gamma > 1) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::GammaOutOfRange, "lifting needs gamma > 1, got " + std::to_string(gamma));
  }
  return 1.0 / (gamma * (gamma - 1.0));
}

LiftResult aizenman_lieb_lift(double s, double gamma, int panels) {
  LiftResult r;
  r.closed = lift_constant(gamma) * (s < 0 ? std::pow(-s, gamma) : 0.0);
  if (s < 0) {
    r.numeric = lifted_integral(-s, gamma, panels, [s](double t) { return -s - t; });
  }
  return r;
}

double riesz_mean_lift(const Eigen::VectorXd& eigenvalues, double gamma, int panels) {
  lift_constant(gamma);
  if (eigenvalues.size() == 0) return 0.0;
  const double T = -eigenvalues.minCoeff();
  return lifted_integral(T, gamma, panels, [&](double t) {
    double tr = 0.0;  // Tr(H + t)_-
    for (Index k = 0; k < eigenvalues.size(); ++k) tr += std::max(0.0, -(eigenvalues(k) + t));
    return tr;
  });
}

LTConstant LTConstant::scaled(double factor) const {
  if (!(factor > 0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::InvalidArgument, "constant multiplier must be positive");
  }
  LTConstant out = *this;
  out.value *= factor;
  if (factor != 1.0) out.provenance = ConstantProvenance::UserSupplied;
  return out;
}

LTConstant classical_lt_constant(double gamma, double d) {
  if (!(gamma >= 0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::GammaOutOfRange, "constant needs gamma >= 0");
  }
  if (!(d >= 1) || d != std::floor(d)) {
    throw Error(ErrorKind::InvalidArgument, "dimension must be a positive integer");
  }
  LTConstant L;
  L.gamma = gamma;
  L.d = d;
  L.value = std::tgamma(gamma + 1.0) /
            (std::pow(4.0 * kPi, d / 2.0) * std::tgamma(gamma + 1.0 + d / 2.0));
  L.provenance = ConstantProvenance::ClassicalFormula;
  return L;
}

LTConstant user_lt_constant(double gamma, double d, double value) {
  if (!(value > 0) || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument, "Lieb-Thirring constant must be positive");
  }
  LTConstant L;
  L.gamma = gamma;
  L.d = d;
  L.value = value;
  L.provenance = ConstantProvenance::UserSupplied;
  return L;
}

double trapezoid(const Grid1D& grid, const Eigen::VectorXd& samples) {
  require_samples(grid, samples.size(), "integrand");
  const Index n = samples.size();
  const double interior = samples.sum() - 0.5 * (samples(0) + samples(n - 1));
  return grid.spacing() * interior;
}

double rhs_lt_integral(const Grid1D& grid, const Eigen::VectorXd& W, const Eigen::VectorXd& b,
                       double gamma, const LTConstant& L, double d) {
  require_samples(grid, W.size(), "W");
  require_samples(grid, b.size(), "b");
  require_positive_gamma(gamma);
  const double p = gamma + d / 2.0;
  Eigen::VectorXd f(W.size());
  for (Index i = 0; i < W.size(); ++i) {
    const double neg = std::max(0.0, -(W(i) - b(i) * b(i)));
    f(i) = neg > 0 ? std::pow(neg, p) : 0.0;
  }
  return L.value * trapezoid(grid, f);
}

double aad_single_eigenvalue_bound(const Grid1D& grid, const Eigen::VectorXcd& V) {
  require_samples(grid, V.size(), "V");
  const double integral = trapezoid(grid, V.cwiseAbs());
  return 0.25 * integral * integral;
}

double resonance_moment_rhs(const Grid1D& grid, const Eigen::VectorXcd& v_scaled, double gamma,
                            double phi, double epsilon, double theta, double h,
                            const LTConstant& L, double d) {
  require_samples(grid, v_scaled.size(), "scaled potential");
  require_positive_gamma(gamma);
  const double rest = theta - phi - epsilon;
  if (!(epsilon > 0) || !(rest > 0) || !(std::sin(epsilon) > 0) || !(std::sin(rest) > 0)) {
    throw Error(ErrorKind::SectorDegenerate,
                "resonance bound needs 0 < epsilon < theta - phi (epsilon=" +
                    std::to_string(epsilon) + ", theta-phi=" + std::to_string(theta - phi) + ")");
  }
  if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "h must be positive");
  const cplx phase = std::polar(1.0, phi + epsilon);
  const double p = gamma + d / 2.0;
  Eigen::VectorXd f(v_scaled.size());
  for (Index i = 0; i < v_scaled.size(); ++i) {
    const double pos = std::max(0.0, (phase * v_scaled(i)).imag());
    f(i) = pos > 0 ? std::pow(pos, p) : 0.0;
  }
  const double prefactor = std::pow(h, -d) * L.value /
                           (std::pow(std::sin(epsilon), gamma) * std::pow(std::sin(rest), d / 2.0));
  return prefactor * trapezoid(grid, f);
}

KyFanSum kyfan_sum(const ComplexMatrix& H, const Eigen::MatrixXcd& frame,
                   const ToleranceConfig& tol) {
  tol.validate();
  if (!is_hermitian(H, tol.tol_orth)) {
    throw Error(ErrorKind::NotHermitian, "Ky Fan sum needs a Hermitian matrix");
  }
  if (frame.rows() != H.n() || frame.cols() < 1 || frame.cols() > H.n()) {
    throw Error(ErrorKind::ShapeMismatch, "frame must be n x N with 1 <= N <= n");
  }
  const Index N = frame.cols();
  const double gram_err = (frame.adjoint() * frame - Eigen::MatrixXcd::Identity(N, N)).norm();
  if (gram_err > tol.tol_orth) {
    throw Error(ErrorKind::NotOrthonormal,
                "frame columns are not orthonormal (Gram residual " + std::to_string(gram_err) + ")");
  }
  const Eigen::MatrixXcd hu = H.dense() * frame;
  cplx total(0.0, 0.0);
  for (Index k = 0; k < N; ++k) total += frame.col(k).dot(hu.col(k));
  return {total.real(), std::abs(total.imag())};
}

double kyfan_lower_bound(const Eigen::VectorXd& eigenvalues, Index N, Index N_prime) {
  const Index n = eigenvalues.size();
  if (N_prime < 0 || N_prime > N || N > n) {
    throw Error(ErrorKind::BadShape, "need 0 <= N' <= N <= n (N'=" + std::to_string(N_prime) +
                                         ", N=" + std::to_string(N) + ", n=" + std::to_string(n) +
                                         ")");
  }
  double sum = eigenvalues.head(N_prime).sum();
  if (N > N_prime) sum += static_cast<double>(N - N_prime) * eigenvalues(N_prime);
  return sum;
}

}  // namespace spectral_lt
