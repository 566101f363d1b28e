#include "adpdtc/analysis.hpp"
#include "adpdtc/error.hpp"
#include "fit_internal.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace adpdtc::analysis {

namespace detail {

namespace {

struct Functor : Eigen::DenseFunctor<double> {
  explicit Functor(const LeastSquaresProblem& p) : DenseFunctor(p.parameters, p.values), problem(p) {}

  int operator()(const InputType& x, ValueType& f) const {
    problem.residuals(x, f);
    return f.allFinite() ? 0 : -1;
  }
  int df(const InputType& x, JacobianType& j) const {
    problem.jacobian(x, j);
    return 0;
  }

  const LeastSquaresProblem& problem;
};

}  // namespace

LeastSquaresResult levenberg_marquardt(const LeastSquaresProblem& problem, Eigen::VectorXd start) {
  Functor functor(problem);
  Eigen::LevenbergMarquardt<Functor> lm(functor);
  lm.setFtol(1e-10);
  lm.setXtol(1e-10);
  lm.setMaxfev(500);
  const auto status = lm.minimize(start);

  LeastSquaresResult out;
  out.x = start;
  Eigen::VectorXd f(problem.values);
  problem.residuals(start, f);
  out.cost = f.allFinite() ? f.squaredNorm() : std::numeric_limits<double>::infinity();
  out.evaluations = static_cast<int>(lm.nfev());
  using S = Eigen::LevenbergMarquardtSpace::Status;
  out.converged = std::isfinite(out.cost) &&
                  (status == S::RelativeReductionTooSmall || status == S::RelativeErrorTooSmall ||
                   status == S::RelativeErrorAndReductionTooSmall || status == S::CosinusTooSmall ||
                   status == S::FtolTooSmall || status == S::XtolTooSmall || status == S::GtolTooSmall);
  return out;
}

LeastSquaresResult multi_start(const LeastSquaresProblem& problem, const std::vector<Eigen::VectorXd>& starts,
                               FitReport& report) {
  LeastSquaresResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    LeastSquaresResult r = levenberg_marquardt(problem, s);
    if (r.cost < best.cost || !std::isfinite(best.cost)) best = r;
  }
  report.converged = best.converged;
  report.residual = best.cost;
  report.iterations = best.evaluations;
  report.starts = static_cast<int>(starts.size());
  return best;
}

}  // namespace detail

namespace {

void check_samples(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("x and y differ in length");
  if (x.size() < 4) throw InvalidArgument("need at least four samples to fit");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InvalidArgument("non-finite sample");
}

// Peak height, position and a half-width estimate of sampled data.
struct PeakGuess {
  double amplitude;
  double center;
  double half_width;
};

PeakGuess guess_peak(const std::vector<double>& x, const std::vector<double>& y) {
  const auto imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double amp = y[imax];
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  double hw = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y[i] >= 0.5 * amp) hw = std::max(hw, std::abs(x[i] - x[imax]));
  if (!(hw > 0.0)) hw = 0.1 * (*xmax - *xmin);
  if (!(hw > 0.0)) hw = 1.0;
  return {amp, x[imax], hw};
}

}  // namespace

double gaussian(double x, double amplitude, double center, double sigma) {
  const double u = (x - center) / sigma;
  return amplitude * std::exp(-0.5 * u * u);
}

double super_gaussian(double x, double amplitude, double center, double sigma, double p) {
  return amplitude * std::exp(-0.5 * std::pow(std::abs(x - center) / sigma, p));
}

GaussianFit fit_gaussian(const std::vector<double>& x, const std::vector<double>& y, std::uint64_t seed) {
  check_samples(x, y);
  const int m = static_cast<int>(x.size());
  detail::LeastSquaresProblem prob;
  prob.parameters = 3;  // A, x0, ln sigma
  prob.values = m;
  prob.residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& f) {
    const double s = std::exp(q(2));
    for (int i = 0; i < m; ++i) f(i) = gaussian(x[i], q(0), q(1), s) - y[i];
  };
  prob.jacobian = [&](const Eigen::VectorXd& q, Eigen::MatrixXd& j) {
    const double s = std::exp(q(2));
    for (int i = 0; i < m; ++i) {
      const double d = x[i] - q(1);
      const double g = std::exp(-0.5 * d * d / (s * s));
      j(i, 0) = g;
      j(i, 1) = q(0) * g * d / (s * s);
      j(i, 2) = q(0) * g * d * d / (s * s);
    }
  };

  const PeakGuess g = guess_peak(x, y);
  const double sigma0 = g.half_width / std::sqrt(2.0 * std::log(2.0));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lw(std::log(0.3), std::log(3.0));
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::Vector3d(g.amplitude, g.center, std::log(sigma0)));
  while (starts.size() < 8) {
    starts.push_back(Eigen::Vector3d(g.amplitude, g.center + shift(rng) * sigma0, std::log(sigma0) + lw(rng)));
  }

  GaussianFit fit;
  const auto best = detail::multi_start(prob, starts, fit.report);
  fit.amplitude = best.x(0);
  fit.center = best.x(1);
  fit.sigma = std::exp(best.x(2));
  return fit;
}

SuperGaussianFit fit_super_gaussian(const std::vector<double>& x, const std::vector<double>& y, double center,
                                    std::uint64_t seed) {
  check_samples(x, y);
  const int m = static_cast<int>(x.size());
  detail::LeastSquaresProblem prob;
  prob.parameters = 3;  // A, ln sigma, ln p
  prob.values = m;
  prob.residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& f) {
    const double s = std::exp(q(1));
    const double p = std::exp(q(2));
    for (int i = 0; i < m; ++i) f(i) = super_gaussian(x[i], q(0), center, s, p) - y[i];
  };
  prob.jacobian = [&](const Eigen::VectorXd& q, Eigen::MatrixXd& j) {
    const double s = std::exp(q(1));
    const double p = std::exp(q(2));
    for (int i = 0; i < m; ++i) {
      const double u = std::abs(x[i] - center) / s;
      const double up = u > 0.0 ? std::pow(u, p) : 0.0;
      const double g = std::exp(-0.5 * up);
      j(i, 0) = g;
      j(i, 1) = q(0) * g * p * up / 2.0;
      j(i, 2) = u > 0.0 ? -q(0) * g * p * up * std::log(u) / 2.0 : 0.0;
    }
  };

  PeakGuess g = guess_peak(x, y);
  g.center = center;
  double hw = 0.0;
  for (int i = 0; i < m; ++i)
    if (y[i] >= 0.5 * g.amplitude) hw = std::max(hw, std::abs(x[i] - center));
  if (hw > 0.0) g.half_width = hw;

  // For a given p the half-maximum point fixes sigma: (hw/sigma)^p = 2 ln 2.
  auto sigma_for = [&](double p) { return g.half_width / std::pow(2.0 * std::log(2.0), 1.0 / p); };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lp(std::log(0.7), std::log(12.0));
  std::uniform_real_distribution<double> ls(std::log(0.7), std::log(1.4));
  std::vector<Eigen::VectorXd> starts;
  for (double p : {2.0, 4.0, 1.0}) starts.push_back(Eigen::Vector3d(g.amplitude, std::log(sigma_for(p)), std::log(p)));
  while (starts.size() < 8) {
    const double lnp = lp(rng);
    starts.push_back(Eigen::Vector3d(g.amplitude, std::log(sigma_for(std::exp(lnp))) + ls(rng), lnp));
  }

  SuperGaussianFit fit;
  const auto best = detail::multi_start(prob, starts, fit.report);
  fit.amplitude = best.x(0);
  fit.center = center;
  fit.sigma = std::exp(best.x(1));
  fit.p = std::exp(best.x(2));
  return fit;
}

std::optional<Boundary> boundary_extract(double amplitude, double center, double sigma, double p, double cutoff) {
  if (!(cutoff > 0.0)) throw InvalidArgument("cutoff must be positive");
  if (!(sigma > 0.0) || !(p > 0.0)) throw InvalidArgument("sigma and p must be positive");
  if (amplitude <= cutoff) return std::nullopt;
  const double half = sigma * std::pow(2.0 * std::log(amplitude / cutoff), 1.0 / p);
  return Boundary{center - half, center + half};
}

std::optional<Boundary> boundary_extract(const GaussianFit& fit, double cutoff) {
  return boundary_extract(fit.amplitude, fit.center, fit.sigma, 2.0, cutoff);
}

std::optional<Boundary> boundary_extract(const SuperGaussianFit& fit, double cutoff) {
  return boundary_extract(fit.amplitude, fit.center, fit.sigma, fit.p, cutoff);
}

}  // namespace adpdtc::analysis
