#include "adpdtc/analysis.hpp"
#include "adpdtc/constants.hpp"
#include "adpdtc/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace adpdtc;
using namespace adpdtc::analysis;

namespace {

std::vector<double> random_signal(oracle::Gen& g, std::size_t n) {
  std::vector<double> s(n);
  for (auto& v : s) v = g.uniform(-1, 1);
  return s;
}

}  // namespace

TEST(Dft, MatchesNaiveTransformAndParseval) {
  oracle::Gen g(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_signal(g, static_cast<std::size_t>(g.integer(8, 200)));
    const std::int64_t start = g.integer(1, 4);
    const std::int64_t end = static_cast<std::int64_t>(s.size()) - g.integer(0, 3);
    const Window w{start, end};
    const auto spec = dft(s, w);
    std::vector<oracle::cd> seg(s.begin() + (start - 1), s.begin() + end);
    const auto ref = oracle::naive_dft(seg);
    double p_time = 0.0, p_freq = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      EXPECT_NEAR(std::abs(spec[k] - ref[k]), 0.0, 1e-10);
      p_freq += std::norm(spec[k]);
      p_time += std::norm(seg[k]);
    }
    EXPECT_NEAR(p_freq, static_cast<double>(w.length()) * p_time, 1e-9 * p_freq);
  }
  EXPECT_THROW(dft(std::vector<double>(10, 1.0), {1, 11}), InvalidArgument);
  EXPECT_THROW(dft(std::vector<double>(10, 1.0), {5, 4}), InvalidArgument);
  const auto nu = normalized_frequencies(4);
  EXPECT_EQ(nu, (std::vector<double>{0.0, 0.25, 0.5, 0.75}));
}

TEST(CrystallineFraction, BoundedAndScaleInvariantProperty) {
  oracle::Gen g(32);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_signal(g, 128);
    const double f = crystalline_fraction(s, {1, 128});
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    const double scale = std::exp(g.uniform(-20, 20)) * (g.coin() ? -1 : 1);
    for (auto& v : s) v *= scale;
    EXPECT_NEAR(crystalline_fraction(s, {1, 128}), f, 1e-12);
  }
}

TEST(CrystallineFraction, KnownSignals) {
  std::vector<double> alt(128), dc(128, 1.0);
  for (std::size_t k = 0; k < alt.size(); ++k) alt[k] = k % 2 ? 1.0 : -1.0;
  EXPECT_NEAR(crystalline_fraction(alt, {1, 128}), 1.0, 1e-15);
  EXPECT_NEAR(crystalline_fraction(dc, {1, 128}), 0.0, 1e-15);
  // Equal mix of DC and alternation: half the power each.
  std::vector<double> mix(128);
  for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = 1.0 + alt[k];
  EXPECT_NEAR(crystalline_fraction(mix, {1, 128}), 0.5, 1e-12);
  EXPECT_THROW(crystalline_fraction(alt, {1, 127}), InvalidArgument);
  EXPECT_THROW(crystalline_fraction(std::vector<double>(16, 0.0), {1, 16}), DegenerateSpectrum);
}

TEST(Fit, GaussianRecoversParametersDeterministically) {
  oracle::Gen g(33);
  std::vector<double> x, y;
  for (int i = 0; i <= 60; ++i) {
    x.push_back(0.8 + 0.4 * i / 60.0);
    y.push_back(gaussian(x.back(), 0.7, 1.013, 0.045) + 1e-4 * g.uniform(-1, 1));
  }
  const auto fit = fit_gaussian(x, y);
  EXPECT_TRUE(fit.report.converged);
  EXPECT_NEAR(fit.amplitude, 0.7, 2e-3);
  EXPECT_NEAR(fit.center, 1.013, 1e-3);
  EXPECT_NEAR(fit.sigma, 0.045, 1e-3);
  EXPECT_EQ(fit.report.starts, 8);
  const auto again = fit_gaussian(x, y);
  EXPECT_EQ(again.center, fit.center);
  EXPECT_THROW(fit_gaussian({1.0, 2.0}, {1.0}), InvalidArgument);
}

TEST(Fit, SuperGaussianRecoversExponent) {
  for (double p : {2.0, 3.0, 5.0}) {
    std::vector<double> x, y;
    for (int i = 0; i <= 80; ++i) {
      x.push_back(-1.0 + 2.0 * i / 80.0);
      y.push_back(super_gaussian(x.back(), 0.9, 0.05, 0.3, p));
    }
    const auto fit = fit_super_gaussian(x, y, 0.05);
    EXPECT_NEAR(fit.p, p, 1e-6) << p;
    EXPECT_NEAR(fit.sigma, 0.3, 1e-6);
    EXPECT_NEAR(fit.amplitude, 0.9, 1e-6);
    EXPECT_EQ(fit.center, 0.05);
  }
}

TEST(Boundary, ClosedFormAndNestingProperty) {
  const auto b = boundary_extract(1.0, 0.0, 1.0, 2.0, std::exp(-0.5));
  ASSERT_TRUE(b);
  EXPECT_NEAR(b->left, -1.0, 1e-12);
  EXPECT_NEAR(b->right, 1.0, 1e-12);
  EXPECT_FALSE(boundary_extract(0.4, 0.0, 1.0, 2.0, 0.5));

  oracle::Gen g(34);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = g.uniform(0.2, 1.0), c = g.uniform(-1, 1), s = g.uniform(0.01, 0.5), p = g.uniform(1.0, 8.0);
    const double c1 = g.uniform(0.01, a), c2 = g.uniform(c1, a);
    const auto i1 = boundary_extract(a, c, s, p, c1);
    const auto i2 = boundary_extract(a, c, s, p, c2);
    ASSERT_TRUE(i1 && i2);
    EXPECT_LE(i1->left, i2->left + 1e-15);
    EXPECT_GE(i1->right, i2->right - 1e-15);
    // The curve crosses the cutoff at the boundary.
    EXPECT_NEAR(super_gaussian(i1->right, a, c, s, p), c1, 1e-9);
  }
  const auto line = w_tau_line(2.0 * kPi * 500.0, 20e-6);
  EXPECT_NEAR(line.right - kPi, kTwoPi * 500.0 * 20e-6, 1e-15);
}

TEST(DecayModels, ProductOfCosinesNonincreasingProperty) {
  oracle::Gen g(35);
  for (int trial = 0; trial < 200; ++trial) {
    const double eps = g.uniform(-kPi / 2 + 1e-6, kPi / 2 - 1e-6);
    for (std::int64_t n = 0; n < 60; ++n) EXPECT_LE(product_of_cosines(eps, n + 1), product_of_cosines(eps, n));
  }
  for (std::int64_t n = 0; n < 500; ++n) EXPECT_EQ(product_of_cosines(0.0, n), 1.0);
  EXPECT_THROW(product_of_cosines(0.1, -1), InvalidArgument);
}

TEST(DecayModels, PhaseTransientAgreesWithRotationComposition) {
  EXPECT_EQ(phase_transient_model(0.0, 0.0, 77), 1.0);
  oracle::Gen g(36);
  for (int trial = 0; trial < 50; ++trial) {
    const double eps = g.uniform(-0.3, 0.3), d = g.uniform(-0.1, 0.1);
    // Ry(d) Rx(pi + eps) Ry(-d) acting on z: retained z component.
    auto ry = [](double a) {
      Eigen::Matrix3d m;
      m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
      return m;
    };
    Eigen::Matrix3d rx;
    const double a = kPi + eps;
    rx << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
    const double mzz = (ry(d) * rx * ry(-d))(2, 2);
    EXPECT_NEAR(phase_transient_model(eps, d, 1), -mzz, 1e-14);
  }
  EXPECT_NEAR(phase_transient_model(0.0, kPi / 180, 128), std::pow(std::cos(kPi / 90), 128), 1e-12);
}

TEST(DecayModels, InhomogeneityAverage) {
  AngleDistribution single{{{0.1, 1.0}}};
  EXPECT_DOUBLE_EQ(inhomogeneity_model(single, 0.02, 10), std::pow(std::cos(0.12), 10));
  AngleDistribution pair{{{-0.1, 0.5}, {0.1, 0.5}}};
  EXPECT_NEAR(inhomogeneity_model(pair, 0.0, 7), std::pow(std::cos(0.1), 7), 1e-15);
  AngleDistribution bad{{{0.0, 0.6}, {0.1, 0.6}}};
  EXPECT_THROW(bad.validate(), InvalidArgument);
  AngleDistribution neg{{{0.0, 1.5}, {0.1, -0.5}}};
  EXPECT_THROW(neg.validate(), InvalidArgument);
}

TEST(WindowModel, LorentzianValues) {
  EXPECT_EQ(lorentzian_nstar(kPi), 125.0);
  EXPECT_NEAR(lorentzian_nstar(1.04 * kPi), 62.5, 1e-9);
}

TEST(WindowModel, InfiniteMemoryIsWindowIndependent) {
  WindowModel m;
  m.n0 = std::numeric_limits<double>::infinity();
  const std::vector<double> th{0.9 * kPi, kPi, 1.1 * kPi};
  const auto a = window_effect_model(th, {1, 128}, m);
  const auto b = window_effect_model(th, {1, 20}, m);
  for (std::size_t i = 0; i < th.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
  // Large but finite memory converges towards the same answer.
  m.n0 = 1e12;
  const auto c = window_effect_model(th, {1, 128}, m);
  const auto d = window_effect_model(th, {1, 20}, m);
  for (std::size_t i = 0; i < th.size(); ++i) EXPECT_NEAR(c[i], d[i], 1e-9);
  EXPECT_THROW(window_effect_model(th, {1, 129}), InvalidArgument);
}

TEST(WindowModel, ShortWindowHasFlatterTop) {
  std::vector<double> th, x;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(0.95 + 0.1 * i / 40.0);
    th.push_back(kPi * x.back());
  }
  auto p_of = [&](Window w) {
    const auto f = window_effect_model(th, w);
    return fit_super_gaussian(x, f, fit_gaussian(x, f).center).p;
  };
  const double p128 = p_of({1, 128}), p50 = p_of({1, 50}), p20 = p_of({1, 20});
  EXPECT_GT(p20, p50);
  EXPECT_GT(p50, p128);
  EXPECT_GT(p128, 2.0);
}

TEST(TimeToFraction, FirstDropBelowLevel) {
  DiscreteSignal s;
  s.first_n = 1;
  s.period = 1e-3;
  s.values = {-1.0, 0.9, -0.7, 0.49, -0.3};
  const auto t = time_to_fraction(s, 0.5);
  ASSERT_TRUE(t);
  EXPECT_DOUBLE_EQ(*t, 4e-3);
  s.values = {1.0, -1.0};
  EXPECT_FALSE(time_to_fraction(s, 0.5));
}

TEST(Nutation, CorrectionDividesByHahnAtHalfTime) {
  TimeSeries hahn;
  hahn.dt = 1e-6;
  for (int k = 0; k < 200; ++k) hahn.values.push_back(std::exp(-k * 1e-6 / 5e-5));
  TimeSeries nut;
  nut.dt = 2e-6;
  for (int k = 0; k < 150; ++k) {
    const double t = k * 2e-6;
    nut.values.push_back(std::cos(kTwoPi * 68e3 * t) * std::exp(-t / 1e-4));
  }
  const auto c = nutation_correct(nut, hahn, 0.0);
  ASSERT_EQ(c.size(), nut.size());
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(c.values[k], std::cos(kTwoPi * 68e3 * c.times[k]), 1e-3);

  const auto floored = nutation_correct(nut, hahn, 0.1);
  EXPECT_LT(floored.size(), nut.size());
  TimeSeries short_hahn = hahn;
  short_hahn.values.resize(20);
  EXPECT_THROW(nutation_correct(nut, short_hahn), InvalidArgument);
}

TEST(Nutation, TwoGaussianFitRecoversComponents) {
  const std::vector<GaussianComponent> truth{{0.7, 68e3, 1.5e3}, {0.3, 64e3, 4e3}};
  SampledSignal s;
  for (int k = 0; k < 400; ++k) {
    s.times.push_back(k * 0.5e-6);
    s.values.push_back(two_gaussian_signal(s.times.back(), truth));
  }
  const auto fit = fit_h1_distribution(s);
  ASSERT_EQ(fit.components.size(), 2u);
  EXPECT_NEAR(fit.components[0].amplitude, 0.7, 1e-4);
  EXPECT_NEAR(fit.components[0].nu, 68e3, 1.0);
  EXPECT_NEAR(fit.components[0].sigma, 1.5e3, 1.0);
  EXPECT_NEAR(fit.components[1].nu, 64e3, 5.0);
  EXPECT_NEAR(fit.nu_peak, 68e3, 0.6e3);
  EXPECT_NO_THROW(fit.epsilon.validate());
  EXPECT_EQ(fit.epsilon.points.size(), 41u);
}

TEST(Nutation, SingleGaussianLeavesSecondComponentEmpty) {
  SampledSignal s;
  for (int k = 0; k < 300; ++k) {
    s.times.push_back(k * 0.5e-6);
    s.values.push_back(two_gaussian_signal(s.times.back(), {{1.0, 68e3, 2e3}}));
  }
  const auto fit = fit_h1_distribution(s);
  EXPECT_NEAR(fit.components[0].nu, 68e3, 1.0);
  EXPECT_NEAR(fit.components[0].amplitude, 1.0, 1e-3);
  EXPECT_LT(std::abs(fit.components[1].amplitude), 1e-3);
  // The angle error distribution is centred on zero.
  double mean = 0.0;
  for (const auto& [eps, p] : fit.epsilon.points) mean += eps * p;
  EXPECT_NEAR(mean, 0.0, 1e-3);
}

TEST(Dft, SplitPeaksForModulatedAlternation) {
  // (-1)^N cos(N eps) = two tones at 1/2 +- eps/2pi; with eps = 0.04 pi and
  // M = 100 they land exactly on bins 48 and 52.
  const double eps = 0.04 * kPi;
  std::vector<double> s(100);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    s[k] = (k % 2 ? 1.0 : -1.0) * std::cos(n * eps);
  }
  const auto spec = dft(s, {1, 100});
  double total = 0.0;
  for (const auto& z : spec) total += std::norm(z);
  EXPECT_NEAR((std::norm(spec[48]) + std::norm(spec[52])) / total, 1.0, 1e-12);
  EXPECT_NEAR(std::norm(spec[50]) / total, 0.0, 1e-20);
}

TEST(CrystallineFraction, DecayingAlternationAgainstDirectSum) {
  std::vector<double> s(128);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double n = static_cast<double>(k + 1);
    s[k] = (k % 2 ? 1.0 : -1.0) * std::exp(-n / 20.0);
  }
  // Direct sum: S(1/2) = sum S(N) (-1)^(N-1); Parseval gives the denominator.
  double half = 0.0, power = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    half += s[k] * (k % 2 ? -1.0 : 1.0);
    power += s[k] * s[k];
  }
  const double want = half * half / (128.0 * power);
  EXPECT_NEAR(crystalline_fraction(s, {1, 128}), want, 1e-12 * want);
}

TEST(Fit, ExactModelSamples) {
  std::vector<double> x, g, sg;
  for (int i = 0; i <= 60; ++i) {
    x.push_back(0.9 * kPi + 0.2 * kPi * i / 60.0);
    g.push_back(gaussian(x.back(), 0.85, 1.01 * kPi, 0.03 * kPi));
    sg.push_back(super_gaussian(x.back(), 0.85, 1.01 * kPi, 0.04 * kPi, 4.0));
  }
  const auto fg = fit_gaussian(x, g);
  EXPECT_NEAR(fg.amplitude, 0.85, 1e-6);
  EXPECT_NEAR(fg.center, 1.01 * kPi, 1e-6);
  EXPECT_NEAR(fg.sigma, 0.03 * kPi, 1e-6);
  const auto fs = fit_super_gaussian(x, sg, 1.01 * kPi);
  EXPECT_NEAR(fs.p, 4.0, 1e-3);
}

TEST(WindowModel, LateWindowIsFlatterThanGaussian) {
  std::vector<double> th;
  for (int i = 0; i <= 40; ++i) th.push_back(kPi * (0.95 + 0.1 * i / 40.0));
  const auto f = window_effect_model(th, {51, 100});
  const auto p = fit_super_gaussian(th, f, fit_gaussian(th, f).center).p;
  EXPECT_GT(p, 2.0);
}

TEST(Boundary, GaussianCutoffClosedForm) {
  GaussianFit fit;
  fit.amplitude = 1.0;
  fit.center = 1.02 * kPi;
  fit.sigma = 0.05;
  const auto b = boundary_extract(fit, 0.1);
  ASSERT_TRUE(b);
  const double half = 0.05 * std::sqrt(2.0 * std::log(10.0));
  EXPECT_NEAR(b->left, fit.center - half, 1e-14);
  EXPECT_NEAR(b->right, fit.center + half, 1e-14);
  fit.amplitude = 0.08;
  EXPECT_FALSE(boundary_extract(fit, 0.1));
}
