#include "adpdtc/error.hpp"
#include "adpdtc/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

namespace adpdtc::quantum {

using cd = std::complex<double>;

namespace {

struct Basis {
  std::vector<std::size_t> mult;
  std::vector<std::size_t> stride;
  std::size_t dim = 1;

  Basis(const SpinSystem& sys, std::size_t cap) {
    sys.check_dimension(cap);
    const std::size_t n = sys.size();
    mult.resize(n);
    stride.resize(n);
    for (std::size_t i = n; i-- > 0;) {
      mult[i] = static_cast<std::size_t>(sys.spins()[i].twice_spin + 1);
      stride[i] = dim;
      dim *= mult[i];
    }
  }

  std::size_t digit(std::size_t idx, std::size_t i) const { return (idx / stride[i]) % mult[i]; }
};

// Local (2s+1)-dimensional spin matrices, rows/cols ordered m = s, s-1, ..., -s.
Eigen::MatrixXcd local_operator(int twice_spin, Axis axis) {
  const int m = twice_spin + 1;
  const double s = 0.5 * twice_spin;
  Eigen::MatrixXcd plus = Eigen::MatrixXcd::Zero(m, m);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(m, m);
  for (int d = 0; d < m; ++d) {
    const double mz = s - d;
    z(d, d) = mz;
    if (d > 0) plus(d - 1, d) = std::sqrt(s * (s + 1.0) - mz * (mz + 1.0));
  }
  const Eigen::MatrixXcd minus = plus.adjoint();
  switch (axis) {
    case Axis::X:
      return 0.5 * (plus + minus);
    case Axis::Y:
      return cd(0.0, -0.5) * (plus - minus);
    case Axis::Z:
      return z;
  }
  return z;
}

void add_single(Operator& out, const Basis& basis, std::size_t i, const Eigen::MatrixXcd& a, cd coeff) {
  for (std::size_t idx = 0; idx < basis.dim; ++idx) {
    const std::size_t di = basis.digit(idx, i);
    const std::size_t base = idx - di * basis.stride[i];
    for (std::size_t ni = 0; ni < basis.mult[i]; ++ni) {
      const cd v = a(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(di));
      if (v == cd(0.0)) continue;
      out(static_cast<Eigen::Index>(base + ni * basis.stride[i]), static_cast<Eigen::Index>(idx)) += coeff * v;
    }
  }
}

void add_pair(Operator& out, const Basis& basis, std::size_t i, const Eigen::MatrixXcd& a, std::size_t j,
              const Eigen::MatrixXcd& b, cd coeff) {
  for (std::size_t idx = 0; idx < basis.dim; ++idx) {
    const std::size_t di = basis.digit(idx, i);
    const std::size_t dj = basis.digit(idx, j);
    const std::size_t base = idx - di * basis.stride[i] - dj * basis.stride[j];
    for (std::size_t ni = 0; ni < basis.mult[i]; ++ni) {
      const cd va = a(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(di));
      if (va == cd(0.0)) continue;
      for (std::size_t nj = 0; nj < basis.mult[j]; ++nj) {
        const cd vb = b(static_cast<Eigen::Index>(nj), static_cast<Eigen::Index>(dj));
        if (vb == cd(0.0)) continue;
        out(static_cast<Eigen::Index>(base + ni * basis.stride[i] + nj * basis.stride[j]),
            static_cast<Eigen::Index>(idx)) += coeff * va * vb;
      }
    }
  }
}

const Eigen::MatrixXcd& local(int twice_spin, Axis axis) {
  static const Eigen::MatrixXcd tab[2][3] = {
      {local_operator(1, Axis::X), local_operator(1, Axis::Y), local_operator(1, Axis::Z)},
      {local_operator(2, Axis::X), local_operator(2, Axis::Y), local_operator(2, Axis::Z)},
  };
  if (twice_spin != 1 && twice_spin != 2) throw InvalidArgument("only spin-1/2 and spin-1 are supported");
  return tab[twice_spin - 1][static_cast<int>(axis)];
}

Operator zero(const Basis& basis) {
  return Operator::Zero(static_cast<Eigen::Index>(basis.dim), static_cast<Eigen::Index>(basis.dim));
}

}  // namespace

Operator spin_operator(const SpinSystem& sys, std::size_t i, Axis axis, std::size_t cap) {
  if (i >= sys.size()) throw InvalidArgument("spin index out of range");
  const Basis basis(sys, cap);
  Operator out = zero(basis);
  add_single(out, basis, i, local(sys.spins()[i].twice_spin, axis), 1.0);
  return out;
}

Operator total_operator(const SpinSystem& sys, Axis axis, std::size_t cap) {
  const Basis basis(sys, cap);
  Operator out = zero(basis);
  for (std::size_t i : sys.phosphorus_indices()) add_single(out, basis, i, local(1, axis), 1.0);
  return out;
}

Operator phase_operator(const SpinSystem& sys, double phase, std::size_t cap) {
  const Basis basis(sys, cap);
  Operator out = zero(basis);
  const Eigen::MatrixXcd a = std::cos(phase) * local(1, Axis::X) + std::sin(phase) * local(1, Axis::Y);
  for (std::size_t i : sys.phosphorus_indices()) add_single(out, basis, i, a, 1.0);
  return out;
}

Operator build_hamiltonian(const SpinSystem& sys, std::size_t cap) {
  const Basis basis(sys, cap);
  Operator h = zero(basis);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (sys.offsets()[i] != 0.0) add_single(h, basis, i, local(sys.spins()[i].twice_spin, Axis::Z), sys.offsets()[i]);
  }
  for (const auto& c : sys.couplings()) {
    const int si = sys.spins()[c.i].twice_spin;
    const int sj = sys.spins()[c.j].twice_spin;
    add_pair(h, basis, c.i, local(si, Axis::Z), c.j, local(sj, Axis::Z), 2.0 * c.b);
    if (sys.coupling_class(c.i, c.j) == CouplingClass::Homonuclear) {
      add_pair(h, basis, c.i, local(si, Axis::X), c.j, local(sj, Axis::X), -c.b);
      add_pair(h, basis, c.i, local(si, Axis::Y), c.j, local(sj, Axis::Y), -c.b);
    }
  }
  return h;
}

Operator dipolar_form(const SpinSystem& sys, Axis axis, std::size_t cap) {
  const Basis basis(sys, cap);
  Operator h = zero(basis);
  for (const auto& c : sys.couplings()) {
    if (sys.coupling_class(c.i, c.j) != CouplingClass::Homonuclear) continue;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const double w = (a == axis ? 3.0 : 0.0) - 1.0;
      add_pair(h, basis, c.i, local(1, a), c.j, local(1, a), w * c.b);
    }
  }
  return h;
}

Operator propagator(const Operator& hamiltonian, double t) {
  if (t == 0.0) return Operator::Identity(hamiltonian.rows(), hamiltonian.cols());
  Eigen::SelfAdjointEigenSolver<Operator> es(hamiltonian);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<cd>() * cd(0.0, -t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Operator rotation(const SpinSystem& sys, double angle, double phase, std::size_t cap) {
  sys.check_dimension(cap);
  // exp(+i angle (cos p sx + sin p sy)/2) per 31P spin; identity elsewhere.
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Eigen::Matrix2cd r;
  r << cd(c, 0.0), cd(0.0, s) * std::exp(cd(0.0, -phase)), cd(0.0, s) * std::exp(cd(0.0, phase)), cd(c, 0.0);
  Operator out = Operator::Identity(1, 1);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const int m = sys.spins()[i].twice_spin + 1;
    Eigen::MatrixXcd loc = sys.is_phosphorus(i) ? Eigen::MatrixXcd(r) : Eigen::MatrixXcd::Identity(m, m);
    Operator next(out.rows() * loc.rows(), out.cols() * loc.cols());
    for (Eigen::Index a = 0; a < out.rows(); ++a)
      for (Eigen::Index b = 0; b < out.cols(); ++b)
        next.block(a * loc.rows(), b * loc.cols(), loc.rows(), loc.cols()) = out(a, b) * loc;
    out = std::move(next);
  }
  return out;
}

Operator evolve_free(const Operator& rho, const Operator& hamiltonian, double tau) {
  if (tau < 0.0) throw InvalidArgument("evolution time must be >= 0");
  if (tau == 0.0) return rho;
  const Operator u = propagator(hamiltonian, tau);
  return u * rho * u.adjoint();
}

Operator apply_pulse(const SpinSystem& sys, const Operator& rho, const Operator& hamiltonian,
                     const pulseq::PulseEvent& ev, std::size_t cap) {
  if (ev.kind == pulseq::PulseEvent::Kind::Delay) return evolve_free(rho, hamiltonian, ev.duration);
  if (!ev.finite) {
    const Operator r = rotation(sys, ev.angle, ev.phase, cap);
    return r * rho * r.adjoint();
  }
  if (!(ev.omega1 > 0.0)) throw InvalidArgument("finite pulse needs omega1 > 0");
  const Operator u = propagator(hamiltonian - ev.omega1 * phase_operator(sys, ev.phase, cap), ev.duration);
  return u * rho * u.adjoint();
}

TimeSeries free_induction_decay(const SpinSystem& sys, Axis axis, double dt, std::size_t n_samples,
                                std::size_t cap) {
  if (n_samples < 1) throw InvalidArgument("need at least one sample");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  const Operator h = build_hamiltonian(sys, cap);
  const Operator o = total_operator(sys, axis, cap);
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  const Operator ot = es.eigenvectors().adjoint() * o * es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::MatrixXd weight = ot.cwiseAbs2();
  const double norm = weight.sum();
  if (!(norm > 0.0)) throw InvalidArgument("observable has no 31P component");

  TimeSeries out;
  out.dt = dt;
  out.values.resize(n_samples);
  const Eigen::Index d = h.rows();
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = dt * static_cast<double>(k);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index l = 0; l < d; ++l)
        if (weight(j, l) != 0.0) acc += weight(j, l) * std::cos((lam(j) - lam(l)) * t);
    out.values[k] = acc / norm;
  }
  return out;
}

double max_unitarity_error(const Operator& u) {
  return (u * u.adjoint() - Operator::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace adpdtc::quantum
