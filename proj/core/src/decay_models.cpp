#include "adpdtc/analysis.hpp"
#include "adpdtc/error.hpp"

#include <cmath>

namespace adpdtc::analysis {

double product_of_cosines(double epsilon, std::int64_t n) {
  if (n < 0) throw InvalidArgument("N must be >= 0");
  return std::pow(std::cos(epsilon), static_cast<double>(n));
}

double phase_transient_model(double epsilon, double transient_angle, std::int64_t n) {
  if (n < 0) throw InvalidArgument("N must be >= 0");
  const double c = std::cos(transient_angle);
  const double s = std::sin(transient_angle);
  return std::pow(c * c * std::cos(epsilon) - s * s, static_cast<double>(n));
}

void AngleDistribution::validate() const {
  if (points.empty()) throw InvalidArgument("empty angle distribution");
  double total = 0.0;
  for (const auto& [eps, p] : points) {
    if (!(p >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("invalid distribution entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("distribution weights must sum to 1");
}

double inhomogeneity_model(const AngleDistribution& dist, double epsilon_offset, std::int64_t n) {
  dist.validate();
  double acc = 0.0;
  for (const auto& [eps, p] : dist.points) acc += p * product_of_cosines(eps + epsilon_offset, n);
  return acc;
}

}  // namespace adpdtc::analysis
