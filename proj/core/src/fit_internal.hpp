#pragma once

#include "adpdtc/analysis.hpp"

#include <Eigen/Dense>

#include <functional>
#include <random>

namespace adpdtc::analysis::detail {

struct LeastSquaresProblem {
  int parameters = 0;
  int values = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> residuals;
  std::function<void(const Eigen::VectorXd&, Eigen::MatrixXd&)> jacobian;
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double cost = 0.0;  // sum of squared residuals
  int evaluations = 0;
  bool converged = false;
};

// Levenberg-Marquardt from one start; relative tolerances 1e-10, at most
// 500 function evaluations.
LeastSquaresResult levenberg_marquardt(const LeastSquaresProblem& problem, Eigen::VectorXd start);

// Best of several starts; fills the report.
LeastSquaresResult multi_start(const LeastSquaresProblem& problem, const std::vector<Eigen::VectorXd>& starts,
                               FitReport& report);

}  // namespace adpdtc::analysis::detail
