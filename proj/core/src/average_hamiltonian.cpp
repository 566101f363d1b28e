#include "adpdtc/error.hpp"
#include "adpdtc/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace adpdtc::quantum {

using cd = std::complex<double>;

AverageHamiltonian average_hamiltonian_0(const SpinSystem& sys, const pulseq::Timeline& block, std::size_t cap) {
  const Operator h = build_hamiltonian(sys, cap);
  const Eigen::Index d = h.rows();
  Operator frame = Operator::Identity(d, d);  // accumulated rf propagator
  Operator integral = Operator::Zero(d, d);
  double total = 0.0;

  for (const auto& ev : block) {
    if (ev.kind == pulseq::PulseEvent::Kind::Delay) {
      if (ev.duration < 0.0) throw InvalidArgument("negative delay");
      integral += ev.duration * (frame.adjoint() * h * frame);
      total += ev.duration;
      continue;
    }
    const Operator iphi = phase_operator(sys, ev.phase, cap);
    if (!ev.finite) {
      frame = rotation(sys, ev.angle, ev.phase, cap) * frame;
      continue;
    }
    // During the pulse the frame is exp(+i w1 s I_phi) F0; in the eigenbasis
    // of I_phi the integral of exp(-i w1 s D) H' exp(+i w1 s D) is elementwise.
    Eigen::SelfAdjointEigenSolver<Operator> es(iphi);
    const Operator& v = es.eigenvectors();
    const Eigen::VectorXd& dvals = es.eigenvalues();
    const Operator hp = v.adjoint() * h * v;
    Operator acc(d, d);
    const double w1 = ev.omega1;
    const double tp = ev.duration;
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        const double delta = dvals(a) - dvals(b);
        cd weight;
        if (std::abs(w1 * delta * tp) < 1e-12) {
          weight = tp;
        } else {
          weight = (std::exp(cd(0.0, -w1 * delta * tp)) - 1.0) / cd(0.0, -w1 * delta);
        }
        acc(a, b) = hp(a, b) * weight;
      }
    }
    // Conjugation order: frame^dag e^{-i w1 s I} H e^{+i w1 s I} frame.
    integral += frame.adjoint() * (v * acc * v.adjoint()) * frame;
    frame = rotation(sys, ev.angle, ev.phase, cap) * frame;
    total += tp;
  }
  if (!(total > 0.0)) throw InvalidArgument("block has zero duration");
  return {integral / total, total};
}

std::pair<double, double> project_onto(const Operator& op, const Operator& basis) {
  const double nb = basis.squaredNorm();
  if (!(nb > 0.0)) throw InvalidArgument("cannot project onto a zero operator");
  const double c = (basis.adjoint() * op).trace().real() / nb;
  return {c, (op - c * basis).norm()};
}

}  // namespace adpdtc::quantum
