#pragma once

// Executable forms of the trace inequalities: certificates for single
// instances, the Ky Fan frame experiments, the counterexample sweep, the
// complex-scaling experiment and randomized campaigns.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spectral_lt/functionals.hpp"
#include "spectral_lt/linalg.hpp"
#include "spectral_lt/operators.hpp"

namespace spectral_lt {

/// One checked inequality lhs <= rhs. passed <=> margin >= -slack.
struct InequalityCertificate {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double slack = 0.0;
  bool passed = false;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Sets margin = rhs - lhs and passed from the current slack.
  void finalize();
  void set_parameter(const std::string& key, double value);
  void set_metadata(const std::string& key, std::string value);
  std::optional<double> parameter(const std::string& key) const;
  std::optional<std::string> meta(const std::string& key) const;
};

struct VerifyOptions {
  ToleranceConfig tol;
  double matrix_slack = 1e-8;             // times max(1, rhs)
  double continuum_slack = 1e-6;          // times max(1, rhs)
  double discretization_allowance = 2e-2; // times max(1, rhs), grid checks only
  Index schur_limit = 400;
};

/// If the Hermitian part of A is nonnegative, every eigenvalue has Re >= 0.
/// lhs = -min Re(lambda), rhs = 0, so the margin is min Re(lambda). When the
/// Hermitian part has a negative eigenvalue the statement is vacuous and the
/// certificate passes with metadata applicable=false.
InequalityCertificate check_empty_negative_spectrum(const ComplexMatrix& A,
                                                    const VerifyOptions& opts = {});

/// sum over Re lambda < 0 of (-Re lambda)^gamma  <=  Tr(H)_-^gamma
InequalityCertificate check_abstract_lt(const ComplexMatrix& A, double gamma,
                                        const VerifyOptions& opts = {});

struct CounterexampleRow {
  Index n = 0;
  double gamma = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct CounterexampleTable {
  std::vector<CounterexampleRow> rows;
  /// For every gamma < 1 the ratio strictly increases along the sorted ns.
  bool unbounded_below_one = true;
};

/// lhs and rhs of the abstract inequality for the upper-triangular family,
/// both computed from the actual spectra.
CounterexampleTable counterexample_sweep(const std::vector<Index>& ns,
                                         const std::vector<double>& gammas,
                                         const VerifyOptions& opts = {});

struct KyFanReport {
  double eigen_sum = 0.0;
  double sampled_min = 0.0;
  double optimized = 0.0;
  int samples = 0;
  int iterations = 0;
  /// min over frames and N' of (frame sum - lower bound with N')
  double lower_bound_margin = 0.0;
  /// frame sum never increased from one optimizer step to the next
  bool monotone = true;
  std::vector<double> history;  // optimizer objective, one entry per step
};

/// Random frames plus projected gradient descent U <- orth(U - eta H U) with
/// eta = 1 / (2 ||H||_2), started from the best sampled frame.
KyFanReport kyfan_experiment(const ComplexMatrix& H, Index N, int samples, std::uint64_t seed,
                             int opt_steps = 500, const VerifyOptions& opts = {});

/// Certificates for the report invariants: sampled and optimized frame sums
/// against the eigenvalue sum and the N'-bounds (slack 1e-10), and the
/// optimizer landing within `opt_tol` of the eigenvalue sum.
std::vector<InequalityCertificate> kyfan_certificates(const KyFanReport& r, double opt_tol = 1e-6);

/// Hermitian matrix with independent complex Gaussian entries (GUE-like).
ComplexMatrix random_hermitian(Index n, std::uint64_t seed);

/// Real-part moment of the discretized operator against
/// L int (Re V - (Re a)^2)_-^{gamma + 1/2}.
InequalityCertificate check_flls(const Grid1D& grid, const OperatorSpec& spec, double gamma,
                                 const LTConstant& L, const VerifyOptions& opts = {});

struct TiltedReport {
  InequalityCertificate continuum;     // moment vs potential integral
  InequalityCertificate matrix_level;  // moment vs |sin alpha|^gamma Tr(H(alpha))_-^gamma
};

TiltedReport check_tilted(const Grid1D& grid, const OperatorSpec& spec, double gamma,
                          double alpha, const LTConstant& L, const VerifyOptions& opts = {});

/// sum (Re(s e^{-i(alpha - pi/2)} lambda))_-^gamma <= Tr(Re(s e^{-i(alpha - pi/2)} A))_-^gamma
/// with s the sign of sin(alpha); valid for any square matrix.
InequalityCertificate check_tilted_matrix(const ComplexMatrix& A, double gamma, double alpha,
                                          const VerifyOptions& opts = {});

struct SectorReport {
  InequalityCertificate continuum;
  InequalityCertificate matrix_level;
  /// Eigenvalues outside e^{i[-|alpha| - eps, |alpha| + eps]} R^+ against the
  /// sum of the bounds for +|alpha| and -|alpha|.
  InequalityCertificate combined;
};

SectorReport check_sector(const Grid1D& grid, const OperatorSpec& spec, double gamma,
                          double alpha, double epsilon, const LTConstant& L,
                          const VerifyOptions& opts = {});

/// sector moment <= (1 / sin eps)^gamma Tr(Re(s e^{-i(alpha - pi/2)} A))_-^gamma
InequalityCertificate check_sector_matrix(const ComplexMatrix& A, double gamma, double alpha,
                                          double epsilon, const VerifyOptions& opts = {});

struct PollutionFilter {
  double delta_ray = 0.05;
  /// Eigenvalues with modulus above e_cut_factor * h^2 / dx^2 are dropped.
  double e_cut_factor = 0.5;
};

struct ExclusionCheck {
  double alpha = 0.0;
  double min_eig = 0.0;    // smallest eigenvalue of H_theta(alpha)
  bool applicable = false; // min_eig >= -tol.tol_zero
  int violations = 0;      // retained eigenvalues inside the excluded sector
  int raw_violations = 0;  // same count over the unfiltered spectrum
  InequalityCertificate certificate;
  /// sum (Re(rotated lambda))_-^gamma <= |sin alpha|^gamma Tr(H_theta(alpha))_-^gamma
  /// over all eigenvalues of P_theta; exact at matrix level for every alpha.
  InequalityCertificate rotated_moment;
};

struct ResonanceReport {
  Spectrum spectrum;           // all eigenvalues of P_theta
  std::vector<cplx> retained;  // after the pollution filter
  double e_cut = 0.0;
  std::vector<ExclusionCheck> exclusions;
  InequalityCertificate certificate;  // moment bound on e^{i[-phi, 0]} R^+
};

struct ResonanceParams {
  double theta = 0.8;
  double h = 1.0;
  std::vector<double> alphas;
  double gamma = 1.5;
  double phi = 0.3;
  double epsilon = 0.2;
  PollutionFilter filter;
};

ResonanceReport resonance_experiment(const Grid1D& grid, const AnalyticProfile& potential,
                                     const ResonanceParams& params, const LTConstant& L,
                                     const VerifyOptions& opts = {});

enum class EnsembleKind { Ginibre, JordanPerturbed, Bony, DiscretizedOperator, User };

EnsembleKind parse_ensemble_kind(std::string_view name);
std::string_view to_string(EnsembleKind kind);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Ginibre;
  Index n = 10;
  std::uint64_t seed = 0;
  double noise = 1e-6;                     // jordan-perturbed
  std::optional<ComplexMatrix> user;       // user
};

/// Independent per-trial seed derived from a base seed.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial);

/// One member of the ensemble.
ComplexMatrix sample_ensemble(const EnsembleSpec& spec, std::uint64_t seed);

/// Complex potential and complex drift built from a few random Gaussian bumps.
OperatorSpec random_drift_operator(const Grid1D& grid, std::uint64_t seed);

struct CampaignSummary {
  int total = 0;
  int failures = 0;
  double min_margin = 0.0;
  double max_abs_margin = 0.0;
  double max_schur_residual = 0.0;
  std::vector<std::uint64_t> seeds;
};

struct CampaignResult {
  std::vector<InequalityCertificate> certificates;
  CampaignSummary summary;
};

/// check_abstract_lt for every trial and every gamma. Trials are distributed
/// over `threads` workers; results do not depend on the thread count.
CampaignResult ensemble_campaign(const EnsembleSpec& spec, const std::vector<double>& gammas,
                                 int trials, const VerifyOptions& opts = {}, int threads = 0);

}  // namespace spectral_lt
