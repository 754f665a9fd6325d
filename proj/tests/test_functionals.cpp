#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "spectral_lt/functionals.hpp"
#include "support.hpp"

using namespace spectral_lt;
using namespace testing_support;

namespace {

constexpr double pi = std::numbers::pi;

Spectrum simple(std::vector<cplx> values) {
  Spectrum s;
  s.values = std::move(values);
  s.multiplicities.assign(s.values.size(), 1);
  s.residuals.assign(s.values.size(), 0.0);
  return s;
}

Spectrum random_spectrum(std::uint64_t seed, int count = 40, double scale = 3.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<cplx> v;
  for (int k = 0; k < count; ++k) v.emplace_back(g(rng), g(rng));
  return simple(std::move(v));
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Index>(xs.size()));
  Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

// Composite Simpson on [a, b] with an even number of panels.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace

TEST(NegativeTraceMoment, Examples) {
  EXPECT_DOUBLE_EQ(negative_trace_moment(vec({-2, -1, 3}), 1.0, 0.0).value, 3.0);
  EXPECT_EQ(negative_trace_moment(vec({-2, -1, 3}), 1.0, 0.0).count, 2);
  EXPECT_EQ(negative_trace_moment(vec({0.5, 1, 3}), 1.0, 0.0).value, 0.0);
  for (int n : {2, 5, 9}) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[0] = -n;
    for (double g : {1.0, 1.5, 2.0}) {
      EXPECT_NEAR(negative_trace_moment(e, g, 0.0).value, std::pow(n, g), 1e-12 * std::pow(n, g));
    }
  }
}

TEST(NegativeTraceMoment, ThresholdIsStrict) {
  EXPECT_EQ(negative_trace_moment(vec({-1e-12, -1.0}), 1.0, 1e-10).value, 1.0);
  EXPECT_EQ(negative_trace_moment(vec({-1e-10}), 1.0, 1e-10).value, 0.0);
}

TEST(RealPartMoment, Examples) {
  EXPECT_DOUBLE_EQ(real_part_moment(simple({{-1, 2}, {-0.5, 0}, {3, 0}}), 1.0, 0.0).value, 1.5);
  EXPECT_EQ(real_part_moment(simple({{1, 2}, {0.5, -3}, {3, 0}}), 2.0, 0.0).value, 0.0);
  for (Index n : {3, 8, 16}) {
    Spectrum s;
    s.values = {cplx(-1.0, 0.0)};
    s.multiplicities = {static_cast<int>(n)};
    s.residuals = {0.0};
    for (double g : {1.0, 2.0, 0.5}) EXPECT_DOUBLE_EQ(real_part_moment(s, g, 0.0).value, n);
  }
}

TEST(TiltedMoment, Examples) {
  EXPECT_NEAR(tilted_moment(simple({{-1, 1}}), 1.0, pi / 4, 1, 0.0).value, 2.0, 1e-14);
  EXPECT_EQ(kind_of([] { tilted_moment(simple({{-1, 1}}), 1.0, 0.0, 1, 0.0); }), ErrorKind::AlphaSingular);
}

TEST(TiltedMoment, HalfPiIsRealPartMomentExactly) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Spectrum sp = random_spectrum(s);
    for (double g : {1.0, 1.5, 3.0}) {
      EXPECT_EQ(tilted_moment(sp, g, pi / 2, 1, 1e-10).value, real_part_moment(sp, g, 1e-10).value);
    }
  }
}

TEST(TiltedMoment, RotatedRealPartIdentity) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Spectrum sp = random_spectrum(100 + s);
    for (double alpha : {0.2, pi / 6, pi / 4, pi / 3, 1.3, 2.5, -0.4, -1.2, -2.9}) {
      for (double g : {1.0, 1.5, 2.0}) {
        const int sign = std::sin(alpha) > 0 ? 1 : -1;
        const cplx c = static_cast<double>(sign) * std::polar(1.0, -(alpha - pi / 2));
        double direct = 0.0;
        for (const cplx& z : sp.values) direct += std::pow(std::max(0.0, -(c * z).real()), g);
        const double tilted = std::pow(std::abs(std::sin(alpha)), g) * tilted_moment(sp, g, alpha, sign, 0.0).value;
        EXPECT_NEAR(tilted, direct, 1e-12 * std::max(1.0, direct));
      }
    }
  }
}

TEST(TiltedMoment, Homogeneous) {
  const Spectrum sp = random_spectrum(7);
  Spectrum scaled = sp;
  for (auto& z : scaled.values) z *= 2.5;
  for (double g : {1.0, 1.5, 2.0}) {
    EXPECT_NEAR(tilted_moment(scaled, g, 0.7, 1, 0.0).value,
                std::pow(2.5, g) * tilted_moment(sp, g, 0.7, 1, 0.0).value, 1e-11);
    EXPECT_NEAR(real_part_moment(scaled, g, 0.0).value, std::pow(2.5, g) * real_part_moment(sp, g, 0.0).value,
                1e-11);
    EXPECT_NEAR(sector_moment(scaled, g, {0.7, 0.3, 1}).value,
                std::pow(2.5, g) * sector_moment(sp, g, {0.7, 0.3, 1}).value, 1e-11);
  }
  Eigen::VectorXd e = Eigen::VectorXd::LinSpaced(9, -4.0, 4.0);
  EXPECT_NEAR(negative_trace_moment(2.5 * e, 1.5, 0.0).value,
              std::pow(2.5, 1.5) * negative_trace_moment(e, 1.5, 0.0).value, 1e-11);
}

TEST(SectorMoment, Examples) {
  EXPECT_DOUBLE_EQ(sector_moment(simple({{-1, 0}}), 1.0, {pi / 2, pi / 4, 1}).value, 1.0);
  EXPECT_EQ(sector_moment(simple({{1, 0}, {2, 0.1}}), 1.0, {pi / 2, pi / 4, 1}).value, 0.0);
  // Closed boundary: argument exactly alpha + epsilon belongs to the sector.
  EXPECT_TRUE((SectorSpec{pi / 4, pi / 4, 1}.contains(std::polar(2.0, pi / 2))));
  EXPECT_EQ(kind_of([] { SectorSpec{0.5, 0.0, 1}.validate(); }), ErrorKind::SectorDegenerate);
  EXPECT_EQ(kind_of([] { SectorSpec{0.5, 2.0, 1}.validate(); }), ErrorKind::SectorDegenerate);
}

TEST(SectorMoment, PlusMinusSectorsCoverComplement) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> arg(-pi, pi), mod(0.01, 10.0);
  for (auto [alpha, eps] : {std::pair{pi / 4, pi / 8}, std::pair{pi / 3, pi / 3}, std::pair{1.2, 0.1}}) {
    const SectorSpec upper{alpha, eps, 1};
    const SectorSpec lower{-alpha, eps, -1};
    for (int k = 0; k < 1000; ++k) {
      const cplx z = std::polar(mod(rng), arg(rng));
      const bool outside_main = std::abs(std::arg(z)) > alpha + eps;
      EXPECT_EQ(outside_main, upper.contains(z) || lower.contains(z)) << z;
    }
  }
}

TEST(SectorMoment, MonotoneInEpsilon) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Spectrum sp = random_spectrum(300 + s);
    double prev = -1.0;
    for (double eps : {1.5, 1.2, 0.9, 0.6, 0.3, 0.05}) {
      const double v = sector_moment(sp, 1.5, {0.8, eps, 1}).value;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(SectorMoment, ProofInequalityPointwise) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Spectrum sp = random_spectrum(500 + s);
    for (double alpha : {0.3, pi / 4, 1.1, pi / 2, -0.6, -1.4}) {
      for (double eps : {0.1, 0.5, 1.0}) {
        const int sign = std::sin(alpha) > 0 ? 1 : -1;
        const SectorSpec sector{alpha, eps, sign};
        const cplx c = static_cast<double>(sign) * std::polar(1.0, -(alpha - pi / 2));
        for (const cplx& z : sp.values) {
          if (!sector.contains(z)) continue;
          EXPECT_GE(-(c * z).real(), std::abs(z) * std::sin(eps) - 1e-12 * std::max(1.0, std::abs(z)));
        }
      }
    }
  }
}

TEST(AizenmanLieb, ClosedFormsAndQuadrature) {
  const LiftResult a = aizenman_lieb_lift(-2.0, 2.0);
  EXPECT_DOUBLE_EQ(a.closed, 2.0);
  EXPECT_NEAR(a.numeric, 2.0, 2e-6);
  const LiftResult b = aizenman_lieb_lift(-1.0, 3.0);
  EXPECT_NEAR(b.closed, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(b.numeric, 1.0 / 6.0, 1e-6 / 6.0);
  const LiftResult c = aizenman_lieb_lift(0.5, 1.5);
  EXPECT_EQ(c.closed, 0.0);
  EXPECT_EQ(c.numeric, 0.0);
  EXPECT_EQ(kind_of([] { aizenman_lieb_lift(-1.0, 1.0); }), ErrorKind::GammaOutOfRange);
}

TEST(AizenmanLieb, ConstantMatchesBetaFunction) {
  for (double g : {1.5, 2.0, 2.5, 3.0, 4.2}) {
    const double beta = std::tgamma(g - 1.0) * std::tgamma(2.0) / std::tgamma(g + 1.0);
    EXPECT_NEAR(lift_constant(g), beta, 1e-14 * beta);
  }
}

TEST(AizenmanLieb, RieszMeanOnRandomHermitian) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix H = random_hermitian_oracle(12, 40 + s);
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H.dense()).eigenvalues();
    for (double g : {1.5, 2.0, 3.0}) {
      double moment = 0.0;
      for (Index k = 0; k < e.size(); ++k) moment += std::pow(std::max(0.0, -e[k]), g);
      const double want = moment / (g * (g - 1.0));
      EXPECT_NEAR(riesz_mean_lift(e, g), want, 1e-5 * want);
    }
  }
}

TEST(ClassicalConstant, Values) {
  EXPECT_NEAR(classical_lt_constant(1.5, 1).value, 0.1875, 1e-15);
  EXPECT_NEAR(classical_lt_constant(1.0, 1).value, 2.0 / (3.0 * pi), 1e-15);
  for (double g : {1.0, 1.5, 2.0, 3.0}) {
    EXPECT_GT(classical_lt_constant(g, 1).value, classical_lt_constant(g, 2).value);
    EXPECT_GT(classical_lt_constant(g, 2).value, classical_lt_constant(g, 3).value);
  }
  EXPECT_EQ(classical_lt_constant(1.5).provenance, ConstantProvenance::ClassicalFormula);
  EXPECT_EQ(classical_lt_constant(1.5).scaled(2.0).provenance, ConstantProvenance::UserSupplied);
  EXPECT_EQ(user_lt_constant(1.5, 1.0, 0.3).value, 0.3);
  EXPECT_THROW(user_lt_constant(1.5, 1.0, -0.3), Error);
}

TEST(RhsIntegral, ZeroForNonnegativeField) {
  const Grid1D g(-5.0, 5.0, 100);
  const Eigen::VectorXd W = Eigen::VectorXd::Constant(100, 0.3);
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(100, 0.7);
  EXPECT_EQ(rhs_lt_integral(g, W, Eigen::VectorXd::Zero(100), 1.5, classical_lt_constant(1.5)), 0.0);
  EXPECT_GT(rhs_lt_integral(g, W, b, 1.5, classical_lt_constant(1.5)), 0.0);
}

TEST(RhsIntegral, PoschlTellerIsOne) {
  const Grid1D g(-20.0, 20.0, 2000);
  const Eigen::VectorXd W = AnalyticProfile{ProfileShape::Sech2, -2.0}.samples(g).real();
  EXPECT_NEAR(rhs_lt_integral(g, W, Eigen::VectorXd::Zero(2000), 1.5, classical_lt_constant(1.5)), 1.0, 1e-6);
}

TEST(RhsIntegral, Refinement) {
  const AnalyticProfile V{ProfileShape::Gaussian, -1.3};
  auto value = [&](Index n) {
    const Grid1D g(-20.0, 20.0, n);
    return rhs_lt_integral(g, V.samples(g).real(), Eigen::VectorXd::Zero(n), 1.5, classical_lt_constant(1.5));
  };
  EXPECT_LT(std::abs(value(2000) - value(4001)), 1e-6);
}

TEST(RhsIntegral, ZeroIffFieldNonnegative) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  const Grid1D g(-3.0, 3.0, 40);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd W(40), b(40);
    for (Index k = 0; k < 40; ++k) {
      W[k] = n01(rng) + 1.0;
      b[k] = 0.3 * n01(rng);
    }
    const double r = rhs_lt_integral(g, W, b, 1.0, classical_lt_constant(1.0));
    EXPECT_GE(r, 0.0);
    const bool nonneg = ((W.array() - b.array().square()) >= 0).all();
    EXPECT_EQ(r == 0.0, nonneg);
  }
  EXPECT_EQ(kind_of([&] { rhs_lt_integral(g, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(40), 1.0,
                                          classical_lt_constant(1.0)); }),
            ErrorKind::ShapeMismatch);
}

TEST(AadBound, Examples) {
  const Grid1D g(-20.0, 20.0, 2000);
  const Eigen::VectorXcd V = AnalyticProfile{ProfileShape::Sech2, -2.0}.samples(g);
  EXPECT_NEAR(aad_single_eigenvalue_bound(g, V), 4.0, 1e-6);
  EXPECT_EQ(aad_single_eigenvalue_bound(g, Eigen::VectorXcd::Zero(2000)), 0.0);
  EXPECT_NEAR(aad_single_eigenvalue_bound(g, 2.0 * V), 4.0 * aad_single_eigenvalue_bound(g, V), 1e-12);
}

TEST(ResonanceRhs, VanishesForSignedPotential) {
  const Grid1D g(-12.0, 12.0, 200);
  const double phi = 0.3, eps = 0.2;
  // Im(e^{i(phi+eps)} V) = -|V| <= 0.
  Eigen::VectorXcd V(200);
  for (Index k = 0; k < 200; ++k) V[k] = cplx(0.0, -1.0) * std::polar(std::exp(-g.point(k) * g.point(k)), -(phi + eps));
  EXPECT_EQ(resonance_moment_rhs(g, V, 1.5, phi, eps, 0.8, 1.0, classical_lt_constant(1.5)), 0.0);
}

TEST(ResonanceRhs, HalvingHDoubles) {
  const Grid1D g(-12.0, 12.0, 800);
  const Eigen::VectorXcd vs = AnalyticProfile{ProfileShape::Gaussian, -3.0}.scaled_samples(g, 0.8);
  const LTConstant L = classical_lt_constant(1.5);
  const double r1 = resonance_moment_rhs(g, vs, 1.5, 0.3, 0.2, 0.8, 1.0, L);
  const double r2 = resonance_moment_rhs(g, vs, 1.5, 0.3, 0.2, 0.8, 0.5, L);
  EXPECT_GT(r1, 0.0);
  EXPECT_NEAR(r2 / r1, 2.0, 1e-10);
}

TEST(ResonanceRhs, MatchesIndependentQuadrature) {
  const double theta = 0.8, phi = 0.3, eps = 0.2, gamma = 1.0;
  const LTConstant L = classical_lt_constant(gamma);
  auto integrand = [&](double x) {
    const cplx v = -3.0 * std::exp(-std::polar(1.0, theta) * x * x);
    const double im = (std::polar(1.0, phi + eps) * v).imag();
    return std::pow(std::max(0.0, im), gamma + 0.5);
  };
  const double oracle = L.value / (std::sin(eps) * std::sqrt(std::sin(theta - phi - eps))) *
                        simpson(integrand, -12.0, 12.0, 400000);
  const Grid1D g(-12.0, 12.0, 40000);
  const Eigen::VectorXcd vs = AnalyticProfile{ProfileShape::Gaussian, -3.0}.scaled_samples(g, theta);
  EXPECT_NEAR(resonance_moment_rhs(g, vs, gamma, phi, eps, theta, 1.0, L), oracle, 1e-6);
}

TEST(ResonanceRhs, DegenerateSector) {
  const Grid1D g(-1.0, 1.0, 10);
  const Eigen::VectorXcd vs = Eigen::VectorXcd::Ones(10);
  const LTConstant L = classical_lt_constant(1.5);
  EXPECT_EQ(kind_of([&] { resonance_moment_rhs(g, vs, 1.5, 0.3, 0.5, 0.8, 1.0, L); }), ErrorKind::SectorDegenerate);
  EXPECT_EQ(kind_of([&] { resonance_moment_rhs(g, vs, 1.5, 0.3, 0.0, 0.8, 1.0, L); }), ErrorKind::SectorDegenerate);
  EXPECT_EQ(kind_of([&] { resonance_moment_rhs(g, vs, 1.5, 0.3, 0.6, 0.8, 1.0, L); }), ErrorKind::SectorDegenerate);
}

TEST(KyFanSum, LeadingEigenvectors) {
  const ComplexMatrix H = random_hermitian_oracle(10, 3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.dense());
  for (Index N = 1; N <= 10; ++N) {
    EXPECT_NEAR(kyfan_sum(H, es.eigenvectors().leftCols(N)).value, es.eigenvalues().head(N).sum(), 1e-12);
  }
}

TEST(KyFanSum, CoordinateFrame) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d.diagonal() << -3.0, -1.0, 2.0;
  const Eigen::MatrixXcd frame = Eigen::MatrixXcd::Identity(3, 2);
  EXPECT_EQ(kyfan_sum(ComplexMatrix(d), frame).value, -4.0);
}

TEST(KyFanSum, RandomFramesBoundedBelow) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const ComplexMatrix H = random_hermitian_oracle(15, 900 + s);
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H.dense()).eigenvalues();
    const Index N = 4;
    for (int f = 0; f < 200; ++f) {
      const double v = kyfan_sum(H, random_orthonormal_frame(15, N, 1000 * s + f)).value;
      EXPECT_GE(v, e.head(N).sum() - 1e-10);
      for (Index Np = 0; Np <= N; ++Np) EXPECT_GE(v, kyfan_lower_bound(e, N, Np) - 1e-10);
    }
  }
}

TEST(KyFanSum, Errors) {
  const ComplexMatrix A = random_complex(4, 1);
  EXPECT_EQ(kind_of([&] { kyfan_sum(A, Eigen::MatrixXcd::Identity(4, 2)); }), ErrorKind::NotHermitian);
  const ComplexMatrix H = random_hermitian_oracle(4, 1);
  EXPECT_EQ(kind_of([&] { kyfan_sum(H, 2.0 * Eigen::MatrixXcd::Identity(4, 2)); }), ErrorKind::NotOrthonormal);
  EXPECT_EQ(kind_of([&] { kyfan_sum(H, Eigen::MatrixXcd::Identity(3, 2)); }), ErrorKind::ShapeMismatch);
}

TEST(KyFanLowerBound, Examples) {
  const Eigen::VectorXd e = vec({-3, -1, 2});
  EXPECT_EQ(kyfan_lower_bound(e, 3, 2), -2.0);
  EXPECT_EQ(kyfan_lower_bound(e, 2, 2), -4.0);
  EXPECT_EQ(kyfan_lower_bound(e, 3, 3), -2.0);
  EXPECT_EQ(kyfan_lower_bound(e, 2, 0), -6.0);
  EXPECT_EQ(kind_of([&] { kyfan_lower_bound(e, 4, 1); }), ErrorKind::BadShape);
  EXPECT_EQ(kind_of([&] { kyfan_lower_bound(e, 2, 3); }), ErrorKind::BadShape);
}
