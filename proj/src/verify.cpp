#include "spectral_lt/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace spectral_lt {
namespace {

constexpr double kPi = std::numbers::pi;

void require_gamma_at_least_one(double gamma) {
  if (!(gamma >= 1) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::GammaOutOfRange,
                "the trace inequalities need gamma >= 1, got " + std::to_string(gamma));
  }
}

double sign_of_sin(double alpha) {
  const double s = std::sin(alpha);
  if (std::abs(s) < 1e-12) {
    throw Error(ErrorKind::AlphaSingular, "sin(alpha) vanishes for alpha=" + std::to_string(alpha));
  }
  return s > 0 ? 1.0 : -1.0;
}

// s e^{-i(alpha - pi/2)} with s = sign(sin alpha): the rotation whose
// Hermitian part is |sin alpha| H(alpha).
cplx rotation_factor(double alpha) { return sign_of_sin(alpha) * std::polar(1.0, -(alpha - kPi / 2)); }

double abs_sin(double alpha) {
  return alpha == kPi / 2 || alpha == -kPi / 2 ? 1.0 : std::abs(std::sin(alpha));
}

std::string grid_text(const Grid1D& g) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << g.x_min() << "," << g.x_max() << "] n=" << g.n();
  return os.str();
}

double rotated_moment(const Spectrum& s, double gamma, cplx factor, double threshold) {
  double sum = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double r = (factor * s.values[k]).real();
    if (r < -threshold) sum += s.multiplicities[k] * std::pow(-r, gamma);
  }
  return sum;
}

InequalityCertificate abstract_lt_from(const Spectrum& spec, const Eigen::VectorXd& h_eigs,
                                       double a_norm, Index n, double gamma,
                                       const VerifyOptions& opts) {
  InequalityCertificate c;
  c.name = "abstract-lt";
  c.lhs = real_part_moment(spec, gamma, opts.tol.zero_threshold(a_norm)).value;
  c.rhs = negative_trace_moment(h_eigs, gamma, 0.0).value;
  c.slack = opts.matrix_slack * std::max(1.0, c.rhs);
  c.set_parameter("gamma", gamma);
  c.set_parameter("n", static_cast<double>(n));
  if (spec.backward_error) c.set_parameter("schur_residual", *spec.backward_error);
  c.finalize();
  return c;
}

struct GridOperator {
  ComplexMatrix A;
  Spectrum spectrum;
};

GridOperator discretize(const Grid1D& grid, const OperatorSpec& spec, const VerifyOptions& opts) {
  ComplexMatrix A = build_schrodinger(grid, spec);
  Spectrum s = spectrum_of(A, opts.tol, opts.schur_limit);
  return {std::move(A), std::move(s)};
}

void tag_continuum(InequalityCertificate& c, const Grid1D& grid, const OperatorSpec& spec,
                   const LTConstant& L, const VerifyOptions& opts) {
  c.slack = (opts.continuum_slack + opts.discretization_allowance) * std::max(1.0, c.rhs);
  c.set_parameter("h", spec.h);
  c.set_parameter("lt_constant", L.value);
  c.set_metadata("grid", grid_text(grid));
  c.set_metadata("slack", "continuum + discretization allowance");
  c.set_metadata("lt_constant",
                 L.provenance == ConstantProvenance::ClassicalFormula ? "classical" : "user");
}

// Shared by check_flls and check_tilted so that alpha = pi/2 reproduces the
// former exactly.
InequalityCertificate tilted_continuum(const char* name, const Grid1D& grid,
                                       const OperatorSpec& spec, const GridOperator& op,
                                       double gamma, double alpha, const LTConstant& L,
                                       const VerifyOptions& opts) {
  const int sign = sign_of_sin(alpha) > 0 ? 1 : -1;
  const TiltedFields f = tilted_fields(spec, alpha);
  InequalityCertificate c;
  c.name = name;
  c.lhs = tilted_moment(op.spectrum, gamma, alpha, sign, opts.tol.zero_threshold(op.A.norm())).value;
  c.rhs = rhs_lt_integral(grid, f.potential, f.drift, gamma, L);
  c.set_parameter("gamma", gamma);
  c.set_parameter("alpha", alpha);
  tag_continuum(c, grid, spec, L, opts);
  c.finalize();
  return c;
}

double sector_rhs_continuum(const Grid1D& grid, const OperatorSpec& spec, double gamma,
                            double alpha, double epsilon, const LTConstant& L) {
  const TiltedFields f = tilted_fields(spec, alpha);
  return std::pow(abs_sin(alpha) / std::sin(epsilon), gamma) *
         rhs_lt_integral(grid, f.potential, f.drift, gamma, L);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

cplx gaussian_cplx(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return cplx(re, im) * (scale / std::sqrt(2.0));
}

}  // namespace

void InequalityCertificate::finalize() {
  margin = rhs - lhs;
  passed = margin >= -slack;
}

void InequalityCertificate::set_parameter(const std::string& key, double value) {
  for (auto& [k, v] : parameters) {
    if (k == key) {
      v = value;
      return;
    }
  }
  parameters.emplace_back(key, value);
}

void InequalityCertificate::set_metadata(const std::string& key, std::string value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  metadata.emplace_back(key, std::move(value));
}

std::optional<double> InequalityCertificate::parameter(const std::string& key) const {
  for (const auto& [k, v] : parameters) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::optional<std::string> InequalityCertificate::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

InequalityCertificate check_empty_negative_spectrum(const ComplexMatrix& A,
                                                    const VerifyOptions& opts) {
  const double threshold = opts.tol.zero_threshold(A.norm());
  const Eigen::VectorXd h = hermitian_eigenvalues(symmetric_part(A), opts.tol);
  const Spectrum s = spectrum_of(A, opts.tol, opts.schur_limit);
  double min_re = std::numeric_limits<double>::infinity();
  for (const cplx& z : s.values) min_re = std::min(min_re, z.real());

  InequalityCertificate c;
  c.name = "empty-negative-spectrum";
  c.lhs = -min_re;
  c.rhs = 0.0;
  c.slack = threshold;
  c.set_parameter("min_hermitian_eigenvalue", h(0));
  c.set_parameter("n", static_cast<double>(A.n()));
  const bool applicable = h(0) >= -threshold;
  c.set_metadata("applicable", applicable ? "true" : "false");
  c.finalize();
  if (!applicable) c.passed = true;
  return c;
}

InequalityCertificate check_abstract_lt(const ComplexMatrix& A, double gamma,
                                        const VerifyOptions& opts) {
  require_gamma_at_least_one(gamma);
  const Spectrum s = spectrum_of(A, opts.tol, opts.schur_limit);
  const Eigen::VectorXd h = hermitian_eigenvalues(symmetric_part(A), opts.tol);
  return abstract_lt_from(s, h, A.norm(), A.n(), gamma, opts);
}

CounterexampleTable counterexample_sweep(const std::vector<Index>& ns,
                                         const std::vector<double>& gammas,
                                         const VerifyOptions& opts) {
  std::vector<Index> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  CounterexampleTable table;
  std::vector<std::vector<double>> ratios(gammas.size());
  for (Index n : sorted) {
    const ComplexMatrix A = bony_counterexample(n);
    const Spectrum s = spectrum_of(A, opts.tol, opts.schur_limit);
    const Eigen::VectorXd h = hermitian_eigenvalues(symmetric_part(A), opts.tol);
    const double threshold = opts.tol.zero_threshold(A.norm());
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      CounterexampleRow row;
      row.n = n;
      row.gamma = gammas[g];
      row.lhs = real_part_moment(s, gammas[g], threshold).value;
      row.rhs = negative_trace_moment(h, gammas[g], threshold).value;
      row.ratio = row.lhs / row.rhs;
      ratios[g].push_back(row.ratio);
      table.rows.push_back(row);
    }
  }
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    if (gammas[g] >= 1) continue;
    for (std::size_t k = 1; k < ratios[g].size(); ++k) {
      if (!(ratios[g][k] > ratios[g][k - 1])) table.unbounded_below_one = false;
    }
  }
  return table;
}

KyFanReport kyfan_experiment(const ComplexMatrix& H, Index N, int samples, std::uint64_t seed,
                             int opt_steps, const VerifyOptions& opts) {
  const Index n = H.n();
  if (N < 1 || N > n) throw Error(ErrorKind::BadShape, "frame size must satisfy 1 <= N <= n");
  if (samples < 0 || opt_steps < 0) {
    throw Error(ErrorKind::InvalidArgument, "sample and step counts must be nonnegative");
  }
  const Eigen::VectorXd E = hermitian_eigenvalues(H, opts.tol);
  std::vector<double> bounds;
  for (Index np = 0; np <= N; ++np) bounds.push_back(kyfan_lower_bound(E, N, np));

  KyFanReport r;
  r.eigen_sum = E.head(N).sum();
  r.samples = samples;
  r.sampled_min = std::numeric_limits<double>::infinity();
  r.lower_bound_margin = std::numeric_limits<double>::infinity();

  Eigen::MatrixXcd best;
  for (int i = 0; i < samples; ++i) {
    Eigen::MatrixXcd u = random_orthonormal_frame(n, N, trial_seed(seed, static_cast<std::uint64_t>(i)));
    const double f = kyfan_sum(H, u, opts.tol).value;
    for (double b : bounds) r.lower_bound_margin = std::min(r.lower_bound_margin, f - b);
    if (f < r.sampled_min) {
      r.sampled_min = f;
      best = std::move(u);
    }
  }
  if (samples == 0) {
    best = random_orthonormal_frame(n, N, trial_seed(seed, 0));
    r.sampled_min = kyfan_sum(H, best, opts.tol).value;
    r.lower_bound_margin = 0.0;
  }

  const double norm2 = E.cwiseAbs().maxCoeff();
  const double eta = norm2 > 0 ? 1.0 / (2.0 * norm2) : 1.0;
  const double noise = 1e-12 * std::max(1.0, static_cast<double>(N) * norm2);
  const double stall = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, static_cast<double>(N) * norm2);
  Eigen::MatrixXcd u = best;
  double f = r.sampled_min;
  r.optimized = f;
  for (int step = 0; step < opt_steps; ++step) {
    u -= eta * (H.dense() * u);
    orthonormalize_columns(u);
    const double next = kyfan_sum(H, u, opts.tol).value;
    r.history.push_back(next);
    ++r.iterations;
    if (next > f + noise) r.monotone = false;
    r.optimized = std::min(r.optimized, next);
    const bool stalled = f - next <= stall;
    f = next;
    if (stalled) break;
  }
  return r;
}

std::vector<InequalityCertificate> kyfan_certificates(const KyFanReport& r, double opt_tol) {
  constexpr double slack = 1e-10;
  std::vector<InequalityCertificate> out(4);
  out[0].name = "kyfan-sampled";
  out[0].lhs = r.eigen_sum;
  out[0].rhs = r.sampled_min;
  out[1].name = "kyfan-lower-bounds";
  out[1].lhs = 0.0;
  out[1].rhs = r.lower_bound_margin;
  out[2].name = "kyfan-optimized-floor";
  out[2].lhs = r.eigen_sum;
  out[2].rhs = r.optimized;
  out[3].name = "kyfan-optimized-reach";
  out[3].lhs = r.optimized - r.eigen_sum;
  out[3].rhs = opt_tol;
  for (auto& c : out) {
    c.slack = c.name == "kyfan-optimized-reach" ? 0.0 : slack;
    c.set_parameter("samples", r.samples);
    c.set_parameter("iterations", r.iterations);
    c.finalize();
  }
  return out;
}

ComplexMatrix random_hermitian(Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd g(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) g(r, c) = gaussian_cplx(rng, 1.0);
  }
  return symmetric_part(ComplexMatrix(std::move(g)));
}

InequalityCertificate check_flls(const Grid1D& grid, const OperatorSpec& spec, double gamma,
                                 const LTConstant& L, const VerifyOptions& opts) {
  require_gamma_at_least_one(gamma);
  const GridOperator op = discretize(grid, spec, opts);
  return tilted_continuum("flls", grid, spec, op, gamma, kPi / 2, L, opts);
}

TiltedReport check_tilted(const Grid1D& grid, const OperatorSpec& spec, double gamma,
                          double alpha, const LTConstant& L, const VerifyOptions& opts) {
  require_gamma_at_least_one(gamma);
  sign_of_sin(alpha);
  const GridOperator op = discretize(grid, spec, opts);
  TiltedReport r;
  r.continuum = tilted_continuum("tilted", grid, spec, op, gamma, alpha, L, opts);

  InequalityCertificate& m = r.matrix_level;
  m.name = "tilted-matrix";
  m.lhs = rotated_moment(op.spectrum, gamma, rotation_factor(alpha),
                         opts.tol.zero_threshold(op.A.norm()));
  const Eigen::VectorXd h = hermitian_eigenvalues(rotated_hamiltonian(grid, spec, alpha), opts.tol);
  m.rhs = std::pow(abs_sin(alpha), gamma) * negative_trace_moment(h, gamma, 0.0).value;
  m.slack = opts.matrix_slack * std::max(1.0, m.rhs);
  m.set_parameter("gamma", gamma);
  m.set_parameter("alpha", alpha);
  m.set_metadata("grid", grid_text(grid));
  m.finalize();
  return r;
}

InequalityCertificate check_tilted_matrix(const ComplexMatrix& A, double gamma, double alpha,
                                          const VerifyOptions& opts) {
  require_gamma_at_least_one(gamma);
  const cplx factor = rotation_factor(alpha);
  const Spectrum s = spectrum_of(A, opts.tol, opts.schur_limit);
  const Eigen::VectorXd h = hermitian_eigenvalues(symmetric_part(A * factor), opts.tol);
  InequalityCertificate c;
  c.name = "tilted-matrix";
  c.lhs = rotated_moment(s, gamma, factor, opts.tol.zero_threshold(A.norm()));
  c.rhs = negative_trace_moment(h, gamma, 0.0).value;
  c.slack = opts.matrix_slack * std::max(1.0, c.rhs);
  c.set_parameter("gamma", gamma);
  c.set_parameter("alpha", alpha);
  c.set_parameter("n", static_cast<double>(A.n()));
  c.finalize();
  return c;
}

SectorReport check_sector(const Grid1D& grid, const OperatorSpec& spec, double gamma,
                          double alpha, double epsilon, const LTConstant& L,
                          const VerifyOptions& opts) {
  require_gamma_at_least_one(gamma);
  const int sign = sign_of_sin(alpha) > 0 ? 1 : -1;
  const SectorSpec sector{alpha, epsilon, sign};
  sector.validate();
  const GridOperator op = discretize(grid, spec, opts);
  const double lhs = sector_moment(op.spectrum, gamma, sector).value;
  const double factor = std::pow(abs_sin(alpha) / std::sin(epsilon), gamma);

  SectorReport r;
  r.continuum.name = "sector";
  r.continuum.lhs = lhs;
  r.continuum.rhs = sector_rhs_continuum(grid, spec, gamma, alpha, epsilon, L);
  r.continuum.set_parameter("gamma", gamma);
  r.continuum.set_parameter("alpha", alpha);
  r.continuum.set_parameter("epsilon", epsilon);
  tag_continuum(r.continuum, grid, spec, L, opts);
  r.continuum.finalize();

  const Eigen::VectorXd h = hermitian_eigenvalues(rotated_hamiltonian(grid, spec, alpha), opts.tol);
  r.matrix_level.name = "sector-matrix";
  r.matrix_level.lhs = lhs;
  r.matrix_level.rhs = factor * negative_trace_moment(h, gamma, 0.0).value;
  r.matrix_level.slack = opts.matrix_slack * std::max(1.0, r.matrix_level.rhs);
  r.matrix_level.set_parameter("gamma", gamma);
  r.matrix_level.set_parameter("alpha", alpha);
  r.matrix_level.set_parameter("epsilon", epsilon);
  r.matrix_level.set_metadata("grid", grid_text(grid));
  r.matrix_level.finalize();

  const double a = std::abs(alpha);
  const SectorSpec upper{a, epsilon, 1};
  const SectorSpec lower{-a, epsilon, -1};
  double combined = 0.0;
  for (std::size_t k = 0; k < op.spectrum.size(); ++k) {
    const cplx z = op.spectrum.values[k];
    if (upper.contains(z) || lower.contains(z)) {
      combined += op.spectrum.multiplicities[k] * std::pow(std::abs(z), gamma);
    }
  }
  r.combined.name = "sector-combined";
  r.combined.lhs = combined;
  r.combined.rhs = sector_rhs_continuum(grid, spec, gamma, a, epsilon, L) +
                   sector_rhs_continuum(grid, spec, gamma, -a, epsilon, L);
  r.combined.set_parameter("gamma", gamma);
  r.combined.set_parameter("alpha", a);
  r.combined.set_parameter("epsilon", epsilon);
  tag_continuum(r.combined, grid, spec, L, opts);
  r.combined.finalize();
  return r;
}

InequalityCertificate check_sector_matrix(const ComplexMatrix& A, double gamma, double alpha,
                                          double epsilon, const VerifyOptions& opts) {
  require_gamma_at_least_one(gamma);
  const cplx factor = rotation_factor(alpha);
  const SectorSpec sector{alpha, epsilon, sign_of_sin(alpha) > 0 ? 1 : -1};
  sector.validate();
  const Spectrum s = spectrum_of(A, opts.tol, opts.schur_limit);
  const Eigen::VectorXd h = hermitian_eigenvalues(symmetric_part(A * factor), opts.tol);
  InequalityCertificate c;
  c.name = "sector-matrix";
  c.lhs = sector_moment(s, gamma, sector).value;
  c.rhs = std::pow(1.0 / std::sin(epsilon), gamma) * negative_trace_moment(h, gamma, 0.0).value;
  c.slack = opts.matrix_slack * std::max(1.0, c.rhs);
  c.set_parameter("gamma", gamma);
  c.set_parameter("alpha", alpha);
  c.set_parameter("epsilon", epsilon);
  c.set_parameter("n", static_cast<double>(A.n()));
  c.finalize();
  return c;
}

ResonanceReport resonance_experiment(const Grid1D& grid, const AnalyticProfile& potential,
                                     const ResonanceParams& p, const LTConstant& L,
                                     const VerifyOptions& opts) {
  if (!(p.theta > 0) || !(p.theta < kPi)) {
    throw Error(ErrorKind::InvalidArgument, "dilation angle must lie in (0, pi)");
  }
  if (!(p.h > 0)) throw Error(ErrorKind::InvalidArgument, "h must be positive");
  require_gamma_at_least_one(p.gamma);
  const Eigen::VectorXcd v_scaled = potential.scaled_samples(grid, p.theta);
  // evaluated first so that a degenerate sector fails before any solve
  const double rhs = resonance_moment_rhs(grid, v_scaled, p.gamma, p.phi, p.epsilon, p.theta,
                                          p.h, L);

  ResonanceReport r;
  const ComplexMatrix P = complex_scaled(grid, v_scaled, p.theta, p.h);
  r.spectrum = spectrum_of(P, opts.tol, opts.schur_limit);
  const double dx = grid.spacing();
  r.e_cut = p.filter.e_cut_factor * p.h * p.h / (dx * dx);
  for (const cplx& z : r.spectrum.values) {
    const double off_ray = std::abs(std::remainder(std::arg(z) + p.theta, 2.0 * kPi));
    if (std::abs(z) > r.e_cut || off_ray < p.filter.delta_ray) continue;
    r.retained.push_back(z);
  }

  const double h2 = p.h * p.h;
  for (double alpha : p.alphas) {
    ExclusionCheck e;
    e.alpha = alpha;
    const double s = sign_of_sin(alpha);
    const Eigen::VectorXd w =
        hermitian_eigenvalues(resonance_test_hamiltonian(grid, v_scaled, p.theta, alpha, p.h), opts.tol);
    e.min_eig = w(0);
    e.applicable = e.min_eig >= -opts.tol.tol_zero;
    // Hermitian part of s e^{-i(alpha - theta - pi/2)} h^{-2} P is |sin alpha| H_theta(alpha)
    const cplx rot = s * std::polar(1.0 / h2, -(alpha - p.theta - kPi / 2));
    auto depth = [&](cplx z) {
      const cplx y = rot * z;
      return -y.real() / std::max(1.0, std::abs(y));
    };
    double worst = 0.0;
    for (const cplx& z : r.retained) {
      const double d = depth(z);
      worst = std::max(worst, d);
      if (d > opts.matrix_slack) ++e.violations;
    }
    for (const cplx& z : r.spectrum.values) {
      if (depth(z) > opts.matrix_slack) ++e.raw_violations;
    }
    InequalityCertificate& c = e.certificate;
    c.name = "resonance-exclusion";
    c.lhs = worst;
    c.rhs = 0.0;
    c.slack = opts.matrix_slack;
    c.set_parameter("alpha", alpha);
    c.set_parameter("theta", p.theta);
    c.set_parameter("h", p.h);
    c.set_parameter("min_eig", e.min_eig);
    c.set_metadata("applicable", e.applicable ? "true" : "false");
    c.finalize();
    if (!e.applicable) c.passed = true;

    InequalityCertificate& m = e.rotated_moment;
    m.name = "resonance-rotated-lt";
    m.lhs = rotated_moment(r.spectrum, p.gamma, rot, 0.0);
    m.rhs = std::pow(abs_sin(alpha), p.gamma) * negative_trace_moment(w, p.gamma, 0.0).value;
    m.slack = opts.matrix_slack * std::max(1.0, m.rhs);
    m.set_parameter("alpha", alpha);
    m.set_parameter("theta", p.theta);
    m.set_parameter("h", p.h);
    m.set_parameter("gamma", p.gamma);
    m.finalize();
    r.exclusions.push_back(std::move(e));
  }

  InequalityCertificate& c = r.certificate;
  c.name = "resonance-moment";
  for (const cplx& z : r.retained) {
    const double a = std::arg(z);
    if (a >= -p.phi && a <= 0.0 && z != cplx(0.0, 0.0)) c.lhs += std::pow(std::abs(z), p.gamma);
  }
  c.rhs = rhs;
  c.slack = (opts.continuum_slack + opts.discretization_allowance) * std::max(1.0, rhs);
  c.set_parameter("gamma", p.gamma);
  c.set_parameter("theta", p.theta);
  c.set_parameter("phi", p.phi);
  c.set_parameter("epsilon", p.epsilon);
  c.set_parameter("h", p.h);
  c.set_parameter("lt_constant", L.value);
  c.set_parameter("delta_ray", p.filter.delta_ray);
  c.set_parameter("e_cut", r.e_cut);
  c.set_metadata("grid", grid_text(grid));
  c.set_metadata("pollution_filter", "heuristic");
  c.finalize();
  return r;
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "ginibre") return EnsembleKind::Ginibre;
  if (name == "jordan-perturbed") return EnsembleKind::JordanPerturbed;
  if (name == "bony") return EnsembleKind::Bony;
  if (name == "discretized-operator") return EnsembleKind::DiscretizedOperator;
  if (name == "user") return EnsembleKind::User;
  throw Error(ErrorKind::InvalidArgument, "unknown ensemble '" + std::string(name) + "'");
}

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Ginibre: return "ginibre";
    case EnsembleKind::JordanPerturbed: return "jordan-perturbed";
    case EnsembleKind::Bony: return "bony";
    case EnsembleKind::DiscretizedOperator: return "discretized-operator";
    case EnsembleKind::User: return "user";
  }
  return "ginibre";
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) {
  return splitmix64(splitmix64(base) ^ (trial * 0xD1B54A32D192ED03ULL));
}

OperatorSpec random_drift_operator(const Grid1D& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = grid.x_min();
  const double span = grid.x_max() - grid.x_min();
  const Eigen::VectorXd x = grid.points();
  auto bumps = [&](int count, double amplitude, cplx shift) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(grid.n());
    for (int k = 0; k < count; ++k) {
      const cplx c = gaussian_cplx(rng, amplitude) + shift;
      const double centre = lo + span * (0.25 + 0.5 * unit(rng));
      const double width = 0.5 + 1.5 * unit(rng);
      for (Index i = 0; i < grid.n(); ++i) {
        const double u = (x(i) - centre) / width;
        f(i) += c * std::exp(-u * u);
      }
    }
    return f;
  };
  OperatorSpec spec;
  spec.potential = bumps(3, 3.0, cplx(-1.0, 0.0));
  spec.drift = bumps(2, 1.0, cplx(0.0, 0.0));
  spec.h = 1.0;
  return spec;
}

ComplexMatrix sample_ensemble(const EnsembleSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw Error(ErrorKind::InvalidArgument, "ensemble dimension must be >= 1");
  std::mt19937_64 rng(seed);
  const Index n = spec.n;
  switch (spec.kind) {
    case EnsembleKind::Ginibre: {
      Eigen::MatrixXcd a(n, n);
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      for (Index c = 0; c < n; ++c) {
        for (Index r = 0; r < n; ++r) a(r, c) = gaussian_cplx(rng, scale);
      }
      return ComplexMatrix(std::move(a));
    }
    case EnsembleKind::JordanPerturbed: {
      // Jordan blocks of size <= 4 with random eigenvalues, a small complex
      // perturbation, hidden behind a random unitary similarity
      Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(n, n);
      std::uniform_int_distribution<int> block(1, 4);
      for (Index start = 0; start < n;) {
        const Index size = std::min<Index>(block(rng), n - start);
        const cplx lambda = gaussian_cplx(rng, 1.5);
        for (Index k = start; k < start + size; ++k) {
          j(k, k) = lambda;
          if (k + 1 < start + size) j(k, k + 1) = 1.0;
        }
        start += size;
      }
      for (Index c = 0; c < n; ++c) {
        for (Index r = 0; r < n; ++r) j(r, c) += gaussian_cplx(rng, spec.noise);
      }
      const Eigen::MatrixXcd q = random_orthonormal_frame(n, n, rng());
      return ComplexMatrix(q * j * q.adjoint());
    }
    case EnsembleKind::Bony: {
      // random dimension and a diagonal unitary similarity, which keeps the
      // matrix triangular
      std::uniform_int_distribution<Index> dim(1, n);
      const Index m = dim(rng);
      Eigen::MatrixXcd a = bony_counterexample(m).dense();
      std::uniform_real_distribution<double> angle(-kPi, kPi);
      Eigen::VectorXcd d(m);
      for (Index k = 0; k < m; ++k) d(k) = std::polar(1.0, angle(rng));
      a = d.asDiagonal() * a * d.conjugate().asDiagonal();
      return ComplexMatrix(std::move(a));
    }
    case EnsembleKind::DiscretizedOperator: {
      const Grid1D grid(-8.0, 8.0, std::max<Index>(n, 3));
      return build_schrodinger(grid, random_drift_operator(grid, rng()));
    }
    case EnsembleKind::User: {
      if (!spec.user) throw Error(ErrorKind::InvalidArgument, "user ensemble needs a matrix");
      return *spec.user;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown ensemble kind");
}

CampaignResult ensemble_campaign(const EnsembleSpec& spec, const std::vector<double>& gammas,
                                 int trials, const VerifyOptions& opts, int threads) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "campaign needs at least one trial");
  if (gammas.empty()) throw Error(ErrorKind::InvalidArgument, "campaign needs at least one gamma");
  for (double g : gammas) require_gamma_at_least_one(g);

  const std::size_t per_trial = gammas.size();
  std::vector<InequalityCertificate> certs(static_cast<std::size_t>(trials) * per_trial);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) seeds[t] = trial_seed(spec.seed, static_cast<std::uint64_t>(t));

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(trials));
  auto worker = [&] {
    for (int t = next++; t < trials; t = next++) {
      try {
        const ComplexMatrix A = sample_ensemble(spec, seeds[t]);
        const Spectrum s = spectrum_of(A, opts.tol, opts.schur_limit);
        const Eigen::VectorXd h = hermitian_eigenvalues(symmetric_part(A), opts.tol);
        for (std::size_t g = 0; g < per_trial; ++g) {
          InequalityCertificate c = abstract_lt_from(s, h, A.norm(), A.n(), gammas[g], opts);
          c.set_parameter("trial", t);
          c.set_metadata("ensemble", std::string(to_string(spec.kind)));
          c.set_metadata("seed", std::to_string(seeds[t]));
          certs[static_cast<std::size_t>(t) * per_trial + g] = std::move(c);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, trials);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CampaignResult out;
  out.summary.total = static_cast<int>(certs.size());
  out.summary.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& c : certs) {
    if (!c.passed) ++out.summary.failures;
    out.summary.min_margin = std::min(out.summary.min_margin, c.margin);
    out.summary.max_abs_margin = std::max(out.summary.max_abs_margin, std::abs(c.margin));
    if (auto r = c.parameter("schur_residual")) {
      out.summary.max_schur_residual = std::max(out.summary.max_schur_residual, *r);
    }
  }
  out.summary.seeds = std::move(seeds);
  out.certificates = std::move(certs);
  return out;
}

}  // namespace spectral_lt
