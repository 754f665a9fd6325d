#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json_config.hpp"
#include "spectral_lt/functionals.hpp"
#include "spectral_lt/operators.hpp"
#include "spectral_lt/report.hpp"
#include "spectral_lt/verify.hpp"

namespace fs = std::filesystem;
using namespace spectral_lt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct RunConfig {
  std::string command;
  std::string verify_kind;

  std::string family;
  double depth = 2.0;
  double beta = 0.0;
  double coefficient = 1.0;
  std::string samples_file;
  std::string matrix_file;
  std::string drift = "zero";
  double drift_re = 0.0;
  double drift_im = 0.0;

  std::optional<double> xmin, xmax;
  std::optional<Index> n;

  std::vector<double> gammas;
  std::vector<double> alphas;
  double epsilon = 0.2;
  std::optional<double> theta;
  double phi = 0.3;
  double h = 1.0;
  std::optional<double> lt_constant;
  double lt_multiplier = 1.0;
  std::vector<double> dims;

  std::string ensemble = "ginibre";
  std::vector<std::string> ensembles;
  std::optional<int> trials;
  std::vector<Index> ns;
  Index frame_size = 5;
  int frames = 200;
  int steps = 500;
  int threads = 0;

  std::uint64_t seed = 1;
  std::string out = "results";

  VerifyOptions opts;
  PollutionFilter filter;
};

// What a command produced, before it is written out.
struct Outcome {
  ReportDocument doc;
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::vector<std::string> lines;                          // stdout body
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::uint64_t env_seed() {
  const char* s = std::getenv("SPECTRAL_LT_SEED");
  if (s == nullptr || *s == '\0') return 1;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw ConfigError("SPECTRAL_LT_SEED is not an unsigned integer");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// {"re": [[...], ...], "im": [[...], ...]}; "im" may be omitted.
ComplexMatrix read_matrix(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.contains("re")) throw ConfigError(path + ": missing \"re\"");
  const auto& re = j.at("re");
  const Index n = static_cast<Index>(re.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Index r = 0; r < n; ++r) {
    if (static_cast<Index>(re[r].size()) != n) throw ConfigError(path + ": matrix is not square");
    for (Index c = 0; c < n; ++c) m(r, c) = re[r][c].get<double>();
  }
  if (j.contains("im")) {
    const auto& im = j.at("im");
    if (static_cast<Index>(im.size()) != n) throw ConfigError(path + ": re/im shapes differ");
    for (Index r = 0; r < n; ++r) {
      if (static_cast<Index>(im[r].size()) != n) throw ConfigError(path + ": re/im shapes differ");
      for (Index c = 0; c < n; ++c) m(r, c) += cplx(0.0, im[r][c].get<double>());
    }
  }
  return ComplexMatrix(std::move(m));
}

// One potential sample per line: "re" or "re,im". A non-numeric first line is a header.
Eigen::VectorXcd read_samples(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<cplx> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    char* end = nullptr;
    const double re = std::strtod(line.c_str(), &end);
    if (end == line.c_str()) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError(path + ": bad sample line '" + line + "'");
    }
    first = false;
    double im = 0.0;
    if (*end == ',') im = std::strtod(end + 1, nullptr);
    values.emplace_back(re, im);
  }
  Eigen::VectorXcd v(static_cast<Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) v[static_cast<Index>(k)] = values[k];
  return v;
}

bool is_analytic_family(const std::string& f) {
  return f == "sech2" || f == "gaussian" || f == "harmonic" || f == "zero";
}

AnalyticProfile potential_profile(const RunConfig& cfg) {
  if (cfg.family == "sech2") return {ProfileShape::Sech2, cplx(-cfg.depth, cfg.beta)};
  if (cfg.family == "gaussian") return {ProfileShape::Gaussian, cplx(-cfg.depth, cfg.beta)};
  if (cfg.family == "harmonic") return {ProfileShape::Harmonic, cplx(cfg.coefficient, cfg.beta)};
  if (cfg.family == "zero") return {};
  throw ConfigError("family '" + cfg.family + "' has no closed-form potential");
}

struct GridDefaults {
  double xmin, xmax;
  Index n;
};

GridDefaults grid_defaults(const RunConfig& cfg) {
  if (cfg.command == "verify" && cfg.verify_kind == "resonance") return {-12.0, 12.0, 800};
  return {-20.0, 20.0, 2000};
}

Grid1D make_grid(const RunConfig& cfg, std::optional<Index> n_override = {}) {
  const GridDefaults d = grid_defaults(cfg);
  return Grid1D(cfg.xmin.value_or(d.xmin), cfg.xmax.value_or(d.xmax),
                n_override ? *n_override : cfg.n.value_or(d.n));
}

struct Operator {
  Grid1D grid;
  OperatorSpec spec;
};

Operator make_operator(const RunConfig& cfg) {
  if (cfg.family == "custom-samples") {
    if (cfg.samples_file.empty()) throw ConfigError("family custom-samples needs --samples");
    Eigen::VectorXcd v = read_samples(cfg.samples_file);
    if (cfg.n && *cfg.n != v.size()) {
      throw ConfigError(fmt("--n %lld does not match %lld samples", static_cast<long long>(*cfg.n),
                            static_cast<long long>(v.size())));
    }
    Grid1D grid = make_grid(cfg, v.size());
    OperatorSpec spec{std::move(v), {}, cfg.h};
    return {grid, std::move(spec)};
  }
  Grid1D grid = make_grid(cfg);
  OperatorSpec spec{potential_profile(cfg).samples(grid), {}, cfg.h};
  return {grid, std::move(spec)};
}

void attach_drift(const RunConfig& cfg, Operator& op) {
  const ProfileShape shape = parse_profile_shape(cfg.drift);
  if (shape != ProfileShape::Zero) {
    op.spec.drift = AnalyticProfile{shape, cplx(cfg.drift_re, cfg.drift_im)}.samples(op.grid);
  }
  op.spec.validate(op.grid);
}

Operator operator_from_config(const RunConfig& cfg) {
  if (cfg.family.empty()) throw ConfigError("--family is required");
  if (!is_analytic_family(cfg.family) && cfg.family != "custom-samples") {
    throw ConfigError("family '" + cfg.family + "' does not describe a Schrodinger operator");
  }
  Operator op = make_operator(cfg);
  attach_drift(cfg, op);
  return op;
}

LTConstant lt_constant(const RunConfig& cfg, double gamma) {
  if (cfg.lt_constant) return user_lt_constant(gamma, 1.0, *cfg.lt_constant);
  return classical_lt_constant(gamma, 1.0).scaled(cfg.lt_multiplier);
}

std::vector<double> gammas_or(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.gammas.empty() ? fallback : cfg.gammas;
}

std::vector<double> alphas_or(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.alphas.empty() ? fallback : cfg.alphas;
}

std::string describe(const InequalityCertificate& c) {
  std::string s = fmt("%-28s lhs=%-14.8g rhs=%-14.8g margin=%-12.4g %s", c.name.c_str(), c.lhs,
                      c.rhs, c.margin, c.passed ? "ok" : "FAILED");
  if (auto g = c.parameter("gamma")) s += fmt(" gamma=%g", *g);
  if (auto a = c.parameter("alpha")) s += fmt(" alpha=%.6g", *a);
  if (auto m = c.meta("applicable"); m && *m == "false") s += " (vacuous)";
  return s;
}

std::string certificates_csv(const std::vector<InequalityCertificate>& certs) {
  std::ostringstream os;
  os << "index,name,lhs,rhs,margin,slack,passed\n";
  for (std::size_t k = 0; k < certs.size(); ++k) {
    const auto& c = certs[k];
    os << k << ',' << c.name << ',' << format_double(c.lhs) << ',' << format_double(c.rhs) << ','
       << format_double(c.margin) << ',' << format_double(c.slack) << ','
       << (c.passed ? 1 : 0) << '\n';
  }
  return os.str();
}

Json config_json(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["verify"] = cfg.verify_kind;
  j["family"] = cfg.family;
  j["depth"] = cfg.depth;
  j["beta"] = cfg.beta;
  j["coefficient"] = cfg.coefficient;
  j["samples"] = cfg.samples_file;
  j["matrix"] = cfg.matrix_file;
  j["drift"] = cfg.drift;
  j["drift_re"] = cfg.drift_re;
  j["drift_im"] = cfg.drift_im;
  const GridDefaults d = grid_defaults(cfg);
  j["xmin"] = cfg.xmin.value_or(d.xmin);
  j["xmax"] = cfg.xmax.value_or(d.xmax);
  j["n"] = cfg.n ? Json(*cfg.n) : Json(nullptr);
  j["gammas"] = cfg.gammas;
  j["alphas"] = cfg.alphas;
  j["epsilon"] = cfg.epsilon;
  j["theta"] = cfg.theta ? Json(*cfg.theta) : Json(nullptr);
  j["phi"] = cfg.phi;
  j["h"] = cfg.h;
  j["lt_constant"] = cfg.lt_constant ? Json(*cfg.lt_constant) : Json(nullptr);
  j["lt_multiplier"] = cfg.lt_multiplier;
  j["dims"] = cfg.dims;
  j["ensemble"] = cfg.ensemble;
  j["ensembles"] = cfg.ensembles;
  j["trials"] = cfg.trials ? Json(*cfg.trials) : Json(nullptr);
  j["ns"] = cfg.ns;
  j["frame_size"] = cfg.frame_size;
  j["frames"] = cfg.frames;
  j["steps"] = cfg.steps;
  j["seed"] = cfg.seed;
  Json tol;
  tol["tol_eig"] = cfg.opts.tol.tol_eig;
  tol["tol_orth"] = cfg.opts.tol.tol_orth;
  tol["tol_schur"] = cfg.opts.tol.tol_schur;
  tol["tol_zero"] = cfg.opts.tol.tol_zero;
  tol["cluster_radius"] = cfg.opts.tol.cluster_radius;
  tol["matrix_slack"] = cfg.opts.matrix_slack;
  tol["continuum_slack"] = cfg.opts.continuum_slack;
  tol["discretization_allowance"] = cfg.opts.discretization_allowance;
  tol["delta_ray"] = cfg.filter.delta_ray;
  tol["e_cut_factor"] = cfg.filter.e_cut_factor;
  j["tolerances"] = std::move(tol);
  // Thread count and output directory are left out: neither changes a result,
  // and two runs into different directories should compare equal.
  return j;
}

void add_certs(Outcome& o, std::vector<InequalityCertificate> certs, bool echo = true) {
  for (auto& c : certs) {
    if (echo) o.lines.push_back(describe(c));
    o.doc.certificates.push_back(std::move(c));
  }
}

void lowest_eigenvalue_lines(const Spectrum& s, std::size_t count, std::vector<std::string>& lines) {
  std::vector<std::size_t> order(s.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.values[a].real() < s.values[b].real();
  });
  for (std::size_t k = 0; k < std::min(count, order.size()); ++k) {
    const std::size_t i = order[k];
    lines.push_back(fmt("  %.12g %+.12gi  (x%d)", s.values[i].real(), s.values[i].imag(),
                        s.multiplicities[i]));
  }
}

// ---- commands -------------------------------------------------------------

Outcome cmd_spectrum(const RunConfig& cfg) {
  if (cfg.family.empty()) throw ConfigError("--family is required");
  Outcome o;
  std::optional<ComplexMatrix> A;
  if (cfg.family == "bony") {
    A = bony_counterexample(cfg.n.value_or(8));
  } else if (cfg.family == "matrix") {
    if (cfg.matrix_file.empty()) throw ConfigError("family matrix needs --matrix");
    A = read_matrix(cfg.matrix_file);
  } else if (cfg.theta && is_analytic_family(cfg.family)) {
    // Complex-scaled operator; the drift is not continued.
    const Grid1D grid = make_grid(cfg);
    A = complex_scaled(grid, potential_profile(cfg).scaled_samples(grid, *cfg.theta), *cfg.theta,
                       cfg.h);
  } else {
    const Operator op = operator_from_config(cfg);
    A = build_schrodinger(op.grid, op.spec);
  }
  Spectrum s = spectrum_of(*A, cfg.opts.tol, cfg.opts.schur_limit);
  o.lines.push_back(fmt("spectrum: n=%lld, %zu distinct eigenvalues, lowest by real part:",
                        static_cast<long long>(A->n()), s.size()));
  lowest_eigenvalue_lines(s, 10, o.lines);
  o.doc.results["dimension"] = A->n();
  o.doc.results["distinct"] = s.size();
  o.files.emplace_back("spectrum.csv", spectrum_csv(s));
  o.doc.spectrum = std::move(s);
  return o;
}

EnsembleSpec ensemble_spec(const RunConfig& cfg, const std::string& name, Index default_n) {
  EnsembleSpec spec;
  spec.kind = parse_ensemble_kind(name);
  spec.n = cfg.n.value_or(default_n);
  spec.seed = cfg.seed;
  if (spec.kind == EnsembleKind::User) {
    if (cfg.matrix_file.empty()) throw ConfigError("ensemble user needs --matrix");
    spec.user = read_matrix(cfg.matrix_file);
    spec.n = spec.user->n();
  }
  return spec;
}

void run_campaign(const RunConfig& cfg, const std::vector<std::string>& names, Index default_n,
                  int default_trials, const std::vector<double>& gammas, Outcome& o) {
  const int trials = cfg.trials.value_or(default_trials);
  Json per = Json::object();
  for (const auto& name : names) {
    const EnsembleSpec spec = ensemble_spec(cfg, name, default_n);
    CampaignResult r = ensemble_campaign(spec, gammas, trials, cfg.opts, cfg.threads);
    o.lines.push_back(fmt("%-22s trials=%d certificates=%d failures=%d min_margin=%.4g "
                          "max_schur_residual=%.3g",
                          name.c_str(), trials, r.summary.total, r.summary.failures,
                          r.summary.min_margin, r.summary.max_schur_residual));
    for (const auto& c : r.certificates) {
      if (!c.passed) o.lines.push_back("  " + describe(c));
    }
    per[name] = to_json(r.summary);
    add_certs(o, std::move(r.certificates), false);
  }
  o.doc.results["campaigns"] = std::move(per);
}

Outcome cmd_abstract(const RunConfig& cfg) {
  Outcome o;
  const std::string name = cfg.matrix_file.empty() ? cfg.ensemble : "user";
  run_campaign(cfg, {name}, 30, 100, gammas_or(cfg, {1.0}), o);
  return o;
}

Outcome cmd_campaign(const RunConfig& cfg) {
  Outcome o;
  std::vector<std::string> names = cfg.ensembles;
  if (names.empty()) names = {"ginibre", "jordan-perturbed", "bony", "discretized-operator"};
  run_campaign(cfg, names, 40, 125, gammas_or(cfg, {1.0, 1.5, 2.0, 3.0}), o);
  return o;
}

void attach_operator_spectrum(const Operator& op, const RunConfig& cfg, Outcome& o) {
  Spectrum s = spectrum_of(build_schrodinger(op.grid, op.spec), cfg.opts.tol, cfg.opts.schur_limit);
  o.files.emplace_back("eigenvalues.csv", spectrum_csv(s));
  o.doc.results["bound_states"] = Json::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s.values[k].real() < 0.0) {
      o.doc.results["bound_states"].push_back({{"re", s.values[k].real()}, {"im", s.values[k].imag()}});
    }
  }
  o.doc.spectrum = std::move(s);
}

Outcome cmd_flls(const RunConfig& cfg) {
  Outcome o;
  const Operator op = operator_from_config(cfg);
  for (double g : gammas_or(cfg, {1.5})) {
    add_certs(o, {check_flls(op.grid, op.spec, g, lt_constant(cfg, g), cfg.opts)});
  }
  attach_operator_spectrum(op, cfg, o);
  return o;
}

Outcome cmd_tilted(const RunConfig& cfg) {
  Outcome o;
  const Operator op = operator_from_config(cfg);
  for (double g : gammas_or(cfg, {1.5})) {
    for (double a : alphas_or(cfg, {std::numbers::pi / 4, std::numbers::pi / 2})) {
      TiltedReport r = check_tilted(op.grid, op.spec, g, a, lt_constant(cfg, g), cfg.opts);
      add_certs(o, {std::move(r.continuum), std::move(r.matrix_level)});
    }
  }
  attach_operator_spectrum(op, cfg, o);
  return o;
}

Outcome cmd_sector(const RunConfig& cfg) {
  Outcome o;
  const Operator op = operator_from_config(cfg);
  for (double g : gammas_or(cfg, {1.5})) {
    for (double a : alphas_or(cfg, {std::numbers::pi / 4})) {
      SectorReport r = check_sector(op.grid, op.spec, g, a, cfg.epsilon, lt_constant(cfg, g), cfg.opts);
      add_certs(o, {std::move(r.continuum), std::move(r.matrix_level), std::move(r.combined)});
    }
  }
  attach_operator_spectrum(op, cfg, o);
  return o;
}

std::vector<double> default_resonance_alphas() {
  std::vector<double> out;
  for (int k = -11; k <= 11; ++k) {
    if (k != 0) out.push_back(k * std::numbers::pi / 12);
  }
  return out;
}

Outcome cmd_resonance(const RunConfig& cfg) {
  if (cfg.family.empty()) throw ConfigError("--family is required");
  if (!is_analytic_family(cfg.family)) {
    throw ConfigError("resonance needs a closed-form family (sech2, gaussian, harmonic, zero)");
  }
  Outcome o;
  const Grid1D grid = make_grid(cfg);
  ResonanceParams p;
  p.theta = cfg.theta.value_or(0.8);
  p.h = cfg.h;
  p.alphas = alphas_or(cfg, default_resonance_alphas());
  const std::vector<double> gammas = gammas_or(cfg, {1.5});
  if (gammas.size() != 1) throw ConfigError("resonance takes a single --gamma");
  p.gamma = gammas.front();
  p.phi = cfg.phi;
  p.epsilon = cfg.epsilon;
  p.filter = cfg.filter;
  ResonanceReport r = resonance_experiment(grid, potential_profile(cfg), p, lt_constant(cfg, p.gamma),
                                           cfg.opts);
  int applicable = 0;
  Json rows = Json::array();
  for (auto& ex : r.exclusions) {
    applicable += ex.applicable ? 1 : 0;
    rows.push_back({{"alpha", ex.alpha},
                    {"min_eig", ex.min_eig},
                    {"applicable", ex.applicable},
                    {"violations", ex.violations},
                    {"raw_violations", ex.raw_violations}});
    add_certs(o, {std::move(ex.certificate), std::move(ex.rotated_moment)});
  }
  add_certs(o, {std::move(r.certificate)});
  o.lines.push_back(fmt("retained %zu of %zu eigenvalues (|z| <= %.4g); %d of %zu alphas applicable",
                        r.retained.size(), r.spectrum.size(), r.e_cut, applicable, r.exclusions.size()));
  Json retained = Json::array();
  std::ostringstream csv;
  csv << "re,im\n";
  for (const cplx& z : r.retained) {
    retained.push_back({{"re", z.real()}, {"im", z.imag()}});
    csv << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
  }
  o.doc.results["e_cut"] = r.e_cut;
  o.doc.results["retained"] = std::move(retained);
  o.doc.results["exclusions"] = std::move(rows);
  o.files.emplace_back("eigenvalues.csv", spectrum_csv(r.spectrum));
  o.files.emplace_back("retained.csv", csv.str());
  o.doc.spectrum = std::move(r.spectrum);
  return o;
}

Outcome cmd_kyfan(const RunConfig& cfg) {
  Outcome o;
  std::vector<ComplexMatrix> mats;
  if (!cfg.matrix_file.empty()) {
    mats.push_back(read_matrix(cfg.matrix_file));
  } else {
    const int trials = cfg.trials.value_or(1);
    for (int t = 0; t < trials; ++t) {
      mats.push_back(random_hermitian(cfg.n.value_or(20), trial_seed(cfg.seed, t)));
    }
  }
  Json reports = Json::array();
  std::ostringstream hist;
  hist << "trial,step,objective\n";
  for (std::size_t t = 0; t < mats.size(); ++t) {
    const KyFanReport r = kyfan_experiment(mats[t], cfg.frame_size, cfg.frames,
                                           trial_seed(cfg.seed ^ 0x6b79ULL, t), cfg.steps, cfg.opts);
    o.lines.push_back(fmt("trial %zu: eigen_sum=%.12g sampled_min=%.12g optimized=%.12g steps=%d", t,
                          r.eigen_sum, r.sampled_min, r.optimized, r.iterations));
    for (std::size_t s = 0; s < r.history.size(); ++s) {
      hist << t << ',' << s << ',' << format_double(r.history[s]) << '\n';
    }
    reports.push_back(to_json(r));
    add_certs(o, kyfan_certificates(r));
  }
  o.doc.results["kyfan"] = std::move(reports);
  o.files.emplace_back("kyfan_history.csv", hist.str());
  return o;
}

// For gamma < 1 the sweep demonstrates failure: the ratio has to keep growing
// with n. The certificate "0 <= smallest consecutive increase" records it.
Outcome cmd_counterexample(const RunConfig& cfg) {
  Outcome o;
  const std::vector<Index> ns = cfg.ns.empty() ? std::vector<Index>{4, 8, 16, 32} : cfg.ns;
  const std::vector<double> gammas = gammas_or(cfg, {0.5, 1.0, 2.0});
  const CounterexampleTable t = counterexample_sweep(ns, gammas, cfg.opts);

  std::ostringstream csv;
  csv << "n,gamma,lhs,rhs,ratio\n";
  for (const auto& r : t.rows) {
    csv << r.n << ',' << format_double(r.gamma) << ',' << format_double(r.lhs) << ','
        << format_double(r.rhs) << ',' << format_double(r.ratio) << '\n';
    o.lines.push_back(fmt("n=%-4lld gamma=%-5g lhs=%-14.10g rhs=%-14.10g ratio=%.10g",
                          static_cast<long long>(r.n), r.gamma, r.lhs, r.rhs, r.ratio));
  }
  for (double g : gammas) {
    if (g >= 1.0) {
      for (Index n : ns) {
        InequalityCertificate c = check_abstract_lt(bony_counterexample(n), g, cfg.opts);
        c.set_parameter("n", static_cast<double>(n));
        add_certs(o, {std::move(c)});
      }
      continue;
    }
    std::vector<double> ratios;
    for (const auto& r : t.rows) {
      if (r.gamma == g) ratios.push_back(r.ratio);
    }
    double min_increase = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < ratios.size(); ++k) {
      min_increase = std::min(min_increase, ratios[k] - ratios[k - 1]);
    }
    InequalityCertificate c;
    c.name = "counterexample-growth";
    c.lhs = 0.0;
    c.rhs = ratios.size() < 2 ? 0.0 : min_increase;
    c.slack = 0.0;
    c.set_parameter("gamma", g);
    c.finalize();
    if (ratios.size() >= 2) c.passed = c.margin > 0.0;
    add_certs(o, {std::move(c)});
  }
  o.doc.results["table"] = to_json(t);
  o.files.emplace_back("counterexample.csv", csv.str());
  return o;
}

Outcome cmd_constants(const RunConfig& cfg) {
  Outcome o;
  const std::vector<double> gammas = gammas_or(cfg, {0.5, 1.0, 1.5, 2.0, 3.0});
  const std::vector<double> dims = cfg.dims.empty() ? std::vector<double>{1.0, 2.0, 3.0} : cfg.dims;
  std::ostringstream csv;
  csv << "gamma,d,value\n";
  Json rows = Json::array();
  std::string header = fmt("%-8s", "gamma");
  for (double d : dims) header += fmt(" %-22s", fmt("d=%g", d).c_str());
  o.lines.push_back(header);
  for (double g : gammas) {
    std::string line = fmt("%-8g", g);
    for (double d : dims) {
      const double v = classical_lt_constant(g, d).value * cfg.lt_multiplier;
      line += fmt(" %-22.17g", v);
      csv << format_double(g) << ',' << format_double(d) << ',' << format_double(v) << '\n';
      rows.push_back({{"gamma", g}, {"d", d}, {"value", v}});
    }
    o.lines.push_back(line);
  }
  o.doc.results["constants"] = std::move(rows);
  o.files.emplace_back("constants.csv", csv.str());
  return o;
}

Outcome dispatch(const RunConfig& cfg) {
  if (cfg.command == "spectrum") return cmd_spectrum(cfg);
  if (cfg.command == "constants") return cmd_constants(cfg);
  const std::string& k = cfg.verify_kind;
  if (k == "abstract") return cmd_abstract(cfg);
  if (k == "flls") return cmd_flls(cfg);
  if (k == "tilted") return cmd_tilted(cfg);
  if (k == "sector") return cmd_sector(cfg);
  if (k == "resonance") return cmd_resonance(cfg);
  if (k == "kyfan") return cmd_kyfan(cfg);
  if (k == "counterexample") return cmd_counterexample(cfg);
  if (k == "campaign") return cmd_campaign(cfg);
  throw ConfigError("unknown verify kind '" + k + "'");
}

void write_outputs(const RunConfig& cfg, Outcome& o) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + cfg.out + ": " + ec.message());
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    f << text;
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
  };
  if (!o.doc.certificates.empty()) put("certificates.csv", certificates_csv(o.doc.certificates));
  for (const auto& [name, text] : o.files) put(name, text);
  put("report.json", dump_json(to_json(o.doc)));
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoConvergence:
    case ErrorKind::SwapIllConditioned:
    case ErrorKind::NotOrthonormal:
      return kExitSolver;
    default:
      return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Lieb-Thirring type inequalities for non-self-adjoint operators",
               "spectral-lt"};
  app.config_formatter(std::make_shared<spectral_lt::cli::JsonConfig>());
  app.set_config("--config", "", "JSON file with option values; command-line flags override it");
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h

  RunConfig cfg;
  try {
    cfg.seed = env_seed();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  app.add_option("--family", cfg.family, "sech2 | gaussian | harmonic | zero | custom-samples | bony | matrix")
      ->check(CLI::IsMember({"sech2", "gaussian", "harmonic", "zero", "custom-samples", "bony", "matrix"}));
  app.add_option("--depth", cfg.depth, "well depth for sech2 and gaussian (V = -depth f)");
  app.add_option("--beta", cfg.beta, "imaginary coupling added to the potential");
  app.add_option("--coefficient", cfg.coefficient, "harmonic coefficient (V = c x^2)");
  app.add_option("--samples", cfg.samples_file, "potential samples, one 're[,im]' per line")
      ->check(CLI::ExistingFile);
  app.add_option("--matrix", cfg.matrix_file, "matrix JSON {\"re\": [[..]], \"im\": [[..]]}")
      ->check(CLI::ExistingFile);
  app.add_option("--drift", cfg.drift, "drift profile: zero | const | sech2 | gaussian | harmonic");
  app.add_option("--drift-re", cfg.drift_re, "real part of the drift coupling");
  app.add_option("--drift-im", cfg.drift_im, "imaginary part of the drift coupling");
  app.add_option("--xmin", cfg.xmin, "left end of the interval");
  app.add_option("--xmax", cfg.xmax, "right end of the interval");
  app.add_option("--n", cfg.n, "grid points, matrix size or bony dimension")->check(CLI::PositiveNumber);
  app.add_option("--gamma,--gammas", cfg.gammas, "moment exponents")->delimiter(',');
  app.add_option("--alpha,--alphas", cfg.alphas, "tilt angles in radians")->delimiter(',');
  app.add_option("--epsilon", cfg.epsilon, "sector opening");
  app.add_option("--theta", cfg.theta, "complex scaling angle");
  app.add_option("--phi", cfg.phi, "resonance sector half-width");
  app.add_option("--h", cfg.h, "semiclassical parameter")->check(CLI::PositiveNumber);
  app.add_option("--lt-constant", cfg.lt_constant, "override the Lieb-Thirring constant");
  app.add_option("--lt-multiplier", cfg.lt_multiplier, "multiply the classical constant")
      ->check(CLI::PositiveNumber);
  app.add_option("--dims", cfg.dims, "dimensions for the constants table")->delimiter(',');
  app.add_option("--ensemble", cfg.ensemble, "ginibre | jordan-perturbed | bony | discretized-operator | user");
  app.add_option("--ensembles", cfg.ensembles, "ensembles for the campaign")->delimiter(',');
  app.add_option("--trials", cfg.trials, "random trials")->check(CLI::PositiveNumber);
  app.add_option("--ns", cfg.ns, "dimensions for the counterexample sweep")->delimiter(',');
  app.add_option("--N", cfg.frame_size, "Ky Fan frame size")->check(CLI::PositiveNumber);
  app.add_option("--frames", cfg.frames, "random Ky Fan frames per trial")->check(CLI::PositiveNumber);
  app.add_option("--steps", cfg.steps, "Ky Fan optimizer steps")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", cfg.threads, "campaign worker threads (0 = hardware)");
  app.add_option("--seed", cfg.seed, "base seed (default from SPECTRAL_LT_SEED, else 1)");
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--tol-eig", cfg.opts.tol.tol_eig);
  app.add_option("--tol-orth", cfg.opts.tol.tol_orth);
  app.add_option("--tol-schur", cfg.opts.tol.tol_schur);
  app.add_option("--tol-zero", cfg.opts.tol.tol_zero);
  app.add_option("--cluster-radius", cfg.opts.tol.cluster_radius);
  app.add_option("--matrix-slack", cfg.opts.matrix_slack);
  app.add_option("--continuum-slack", cfg.opts.continuum_slack);
  app.add_option("--discretization-allowance", cfg.opts.discretization_allowance);
  app.add_option("--delta-ray", cfg.filter.delta_ray, "pollution filter: minimum distance from the rotated ray");
  app.add_option("--e-cut-factor", cfg.filter.e_cut_factor, "pollution filter: |z| cut in units of h^2/dx^2");

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of an operator or matrix");
  CLI::App* verify = app.add_subcommand("verify", "run a family of certificates");
  CLI::App* constants = app.add_subcommand("constants", "classical Lieb-Thirring constants");
  verify->require_subcommand(1);
  const std::pair<const char*, const char*> kinds[] = {
      {"abstract", "moment of Re(lambda) against Tr(H)_- on random or given matrices"},
      {"flls", "real-part moment of a discretized operator against the potential integral"},
      {"tilted", "rotated moment at each alpha, continuum and matrix level"},
      {"sector", "sector moments for +alpha and -alpha and their union"},
      {"resonance", "sector exclusion and moment bound for a complex-scaled operator"},
      {"kyfan", "random and optimized orthonormal frames against eigenvalue sums"},
      {"counterexample", "upper-triangular family, including gamma < 1"},
      {"campaign", "abstract inequality over several ensembles and gammas"},
  };
  for (const auto& [kind, about] : kinds) verify->add_subcommand(kind, about)->fallthrough();
  for (CLI::App* sub : {spectrum, verify, constants}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (spectrum->parsed()) cfg.command = "spectrum";
  if (constants->parsed()) cfg.command = "constants";
  if (verify->parsed()) {
    cfg.command = "verify";
    cfg.verify_kind = verify->get_subcommands().front()->get_name();
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    cfg.opts.tol.validate();
    o = dispatch(cfg);
    o.doc.config = config_json(cfg);
    o.doc.timings["total_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_outputs(cfg, o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n\n"
              << app.get_formatter()->make_help(&app, "spectral-lt", CLI::AppFormatMode::Normal);
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  int passed = 0;
  for (const auto& c : o.doc.certificates) passed += c.passed ? 1 : 0;
  const int total = static_cast<int>(o.doc.certificates.size());
  for (const auto& line : o.lines) std::cout << line << "\n";
  std::cout << (passed == total ? "PASS " : "FAIL ") << passed << "/" << total << "\n";
  return passed == total ? kExitOk : kExitFailed;
}
