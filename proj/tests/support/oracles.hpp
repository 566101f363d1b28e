#pragma once

// Independent reference implementations. Nothing here calls into the
// library; the point is a second route to the same numbers.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

constexpr double pi = 3.14159265358979323846;

// Larmor frequencies at 4 T (MHz) and textbook constants, written out again.
constexpr double larmor_p = 68.940;
constexpr double larmor_h = 170.304;
constexpr double larmor_n = 12.307;

inline double gamma_of(double larmor_mhz) { return 2.0 * pi * larmor_mhz * 1e6 / 4.0; }

/// Secular coupling between 31P and a partner, r in Angstrom.
inline double dipolar_b(double rx, double ry, double rz, double theta_deg, double phi_deg, double larmor_partner) {
  const double th = theta_deg * pi / 180.0;
  const double ph = phi_deg * pi / 180.0;
  const double bx = std::sin(th) * std::cos(ph), by = std::sin(th) * std::sin(ph), bz = std::cos(th);
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  const double c = (rx * bx + ry * by + rz * bz) / r;
  const double r3 = std::pow(r * 1e-10, 3);
  return 1e-7 * gamma_of(larmor_p) * gamma_of(larmor_partner) * 1.054571817e-34 * (1.0 - 3.0 * c * c) / (2.0 * r3);
}

/// Textbook O(n^2) DFT, exp(-2 pi i k n / L).
inline std::vector<cd> naive_dft(const std::vector<cd>& x) {
  const std::size_t n = x.size();
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cd acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += x[j] * std::polar(1.0, -2.0 * pi * double(k * j % n) / double(n));
    out[k] = acc;
  }
  return out;
}

// ---- spin matrices by explicit Kronecker products ---------------------------

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Spin-1/2 or spin-1 matrices in the m = s..-s ordering; axis 0,1,2 = x,y,z.
inline Mat local(int twice_spin, int axis) {
  if (twice_spin == 1) {
    Mat m(2, 2);
    if (axis == 0) m << 0, 0.5, 0.5, 0;
    if (axis == 1) m << 0, cd(0, -0.5), cd(0, 0.5), 0;
    if (axis == 2) m << 0.5, 0, 0, -0.5;
    return m;
  }
  const double r = 1.0 / std::sqrt(2.0);
  Mat m = Mat::Zero(3, 3);
  if (axis == 0) m << 0, r, 0, r, 0, r, 0, r, 0;
  if (axis == 1) m << 0, cd(0, -r), 0, cd(0, r), 0, cd(0, -r), 0, cd(0, r), 0;
  if (axis == 2) m << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  return m;
}

/// Operator `a` on spin i of a product space with the given twice-spins.
inline Mat embed(const std::vector<int>& spins, std::size_t i, const Mat& a) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t k = 0; k < spins.size(); ++k)
    out = kron(out, k == i ? a : Mat(Mat::Identity(spins[k] + 1, spins[k] + 1)));
  return out;
}

inline Mat expm(const Mat& a) { return a.exp(); }

// ---- generators -------------------------------------------------------------

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  bool coin() { return integer(0, 1) == 1; }
};

}  // namespace oracle
