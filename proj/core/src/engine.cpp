#include "adpdtc/error.hpp"
#include "adpdtc/quantum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>

namespace adpdtc::quantum {

using cd = std::complex<double>;

Engine::Engine(SpinSystem sys, EngineOptions options) : sys_(std::move(sys)), options_(options) {
  sys_.check_dimension(options_.dimension_cap);
  const auto p_index = sys_.phosphorus_indices();
  if (p_index.empty()) throw InvalidArgument("engine needs at least one 31P spin");

  std::vector<std::size_t> to_sub(sys_.size(), SIZE_MAX);
  std::vector<std::size_t> partners;
  for (std::size_t i = 0; i < sys_.size(); ++i) {
    if (sys_.is_phosphorus(i)) {
      to_sub[i] = psys_.add_spin(Species::P31, sys_.spins()[i].position);
    } else {
      partners.push_back(i);
    }
  }
  for (const auto& c : sys_.couplings()) {
    if (sys_.coupling_class(c.i, c.j) == CouplingClass::Homonuclear) psys_.set_coupling(to_sub[c.i], to_sub[c.j], c.b);
  }
  const Operator h_pp = build_hamiltonian(psys_, options_.dimension_cap);
  std::vector<Operator> iz;
  for (std::size_t a = 0; a < psys_.size(); ++a) iz.push_back(spin_operator(psys_, a, Axis::Z));

  // Heteronuclear partners: enumerate m configurations, accumulate local
  // fields on each 31P and merge configurations with identical fields.
  std::map<std::vector<double>, double> fields;
  std::vector<int> digit(partners.size(), 0);
  for (;;) {
    std::vector<double> h(psys_.size(), 0.0);
    for (std::size_t i : p_index) h[to_sub[i]] = sys_.offsets()[i];
    for (const auto& c : sys_.couplings()) {
      if (sys_.coupling_class(c.i, c.j) != CouplingClass::Heteronuclear) continue;
      const bool ip = sys_.is_phosphorus(c.i);
      const bool jp = sys_.is_phosphorus(c.j);
      if (ip == jp) continue;  // partner-partner: no effect on 31P dynamics
      const std::size_t p = ip ? c.i : c.j;
      const std::size_t q = ip ? c.j : c.i;
      const auto pos = static_cast<std::size_t>(std::find(partners.begin(), partners.end(), q) - partners.begin());
      const double m = 0.5 * sys_.spins()[q].twice_spin - digit[pos];
      h[to_sub[p]] += 2.0 * c.b * m;
    }
    fields[h] += 1.0;
    std::size_t k = 0;
    for (; k < partners.size(); ++k) {
      if (++digit[k] <= sys_.spins()[partners[k]].twice_spin) break;
      digit[k] = 0;
    }
    if (k == partners.size()) break;
  }
  for (const auto& [h, w] : fields) {
    Sector s;
    s.weight = w;
    s.hamiltonian = h_pp;
    for (std::size_t a = 0; a < h.size(); ++a)
      if (h[a] != 0.0) s.hamiltonian += h[a] * iz[a];
    sectors_.push_back(std::move(s));
  }
  diag_.sectors = sectors_.size();
  initial_ = total_operator(psys_, options_.initial);
  observable_ = total_operator(psys_, options_.observable);
}

std::size_t Engine::subspace_dimension() const { return psys_.dimension(); }

void Engine::diagonalise(Sector& s) {
  if (s.diagonalised) return;
  Eigen::SelfAdjointEigenSolver<Operator> es(s.hamiltonian);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  s.vectors = es.eigenvectors();
  s.values = es.eigenvalues();
  s.diagonalised = true;
}

Operator Engine::track(Operator u) {
  diag_.max_unitarity_error = std::max(diag_.max_unitarity_error, max_unitarity_error(u));
  return u;
}

Operator Engine::free_propagator(std::size_t sector, double t) {
  Sector& s = sectors_.at(sector);
  diagonalise(s);
  const Eigen::VectorXcd ph = (s.values.cast<cd>() * cd(0.0, -t)).array().exp();
  return track(s.vectors * ph.asDiagonal() * s.vectors.adjoint());
}

Operator Engine::subspace_rotation(double angle, double phase) const {
  return rotation(psys_, angle, phase, options_.dimension_cap);
}

Operator Engine::timeline_propagator(std::size_t sector, const pulseq::Timeline& events) {
  Sector& s = sectors_.at(sector);
  const auto dim = static_cast<Eigen::Index>(psys_.dimension());
  Operator u = Operator::Identity(dim, dim);
  for (const auto& ev : events) {
    if (ev.kind == pulseq::PulseEvent::Kind::Delay) {
      if (ev.duration > 0.0) u = free_propagator(sector, ev.duration) * u;
    } else if (!ev.finite) {
      u = track(subspace_rotation(ev.angle, ev.phase)) * u;
    } else {
      if (!(ev.omega1 > 0.0)) throw InvalidArgument("finite pulse needs omega1 > 0");
      const auto key = std::make_pair(ev.omega1, ev.phase);
      auto it = s.pulse_eigen.find(key);
      if (it == s.pulse_eigen.end()) {
        Eigen::SelfAdjointEigenSolver<Operator> es(s.hamiltonian -
                                                   ev.omega1 * phase_operator(psys_, ev.phase, options_.dimension_cap));
        if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
        it = s.pulse_eigen.emplace(key, std::make_pair(es.eigenvectors(), es.eigenvalues())).first;
      }
      const auto& [v, lam] = it->second;
      const Eigen::VectorXcd ph = (lam.cast<cd>() * cd(0.0, -ev.duration)).array().exp();
      u = track(v * ph.asDiagonal() * v.adjoint()) * u;
    }
  }
  return u;
}

DiscreteSignal Engine::run(const pulseq::ExpandedParts& parts, std::int64_t n_max) {
  std::vector<Operator> pro, blk, epi;
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    pro.push_back(timeline_propagator(s, parts.prologue));
    blk.push_back(timeline_propagator(s, parts.block));
    epi.push_back(timeline_propagator(s, parts.epilogue));
  }
  DiscreteSignal out = run_propagators(pro, blk, epi, n_max);
  out.period = pulseq::total_duration(parts.block);
  out.t_offset = pulseq::total_duration(parts.prologue) + pulseq::total_duration(parts.epilogue);
  return out;
}

DiscreteSignal Engine::run_sequence(const pulseq::SequenceProgram& program, const pulseq::Bindings& bindings,
                                    pulseq::PulseMode mode, std::int64_t n_max) {
  return run(pulseq::expand_parts(program, bindings, mode), n_max);
}

DiscreteSignal Engine::run_propagators(const std::vector<Operator>& prologue, const std::vector<Operator>& block,
                                       const std::vector<Operator>& epilogue, std::int64_t n_max) {
  if (prologue.size() != sectors_.size() || block.size() != sectors_.size() || epilogue.size() != sectors_.size()) {
    throw InvalidArgument("one propagator per sector expected");
  }
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  const std::int64_t first = options_.include_zero ? 0 : 1;
  DiscreteSignal out;
  out.first_n = first;
  if (n_max < first) return out;
  const auto count = static_cast<std::size_t>(n_max - first + 1);
  out.values.assign(count, 0.0);

  const bool schur = options_.method == Method::Schur ||
                     (options_.method == Method::Auto && n_max > options_.schur_threshold);
  diag_.used_schur = schur;
  diag_.schur_residual = 0.0;

  double norm = (observable_.cwiseProduct(initial_.transpose())).sum().real();
  if (std::abs(norm) < 1e-12) {
    norm = std::sqrt(observable_.cwiseAbs2().sum() * initial_.cwiseAbs2().sum());
  }
  double total_weight = 0.0;
  for (const auto& s : sectors_) total_weight += s.weight;
  norm *= total_weight;

  for (std::size_t si = 0; si < sectors_.size(); ++si) {
    const double w = sectors_[si].weight;
    const Operator rho0 = prologue[si] * initial_ * prologue[si].adjoint();
    const Operator obs = epilogue[si].adjoint() * observable_ * epilogue[si];
    const Operator& u = block[si];

    if (!schur) {
      Operator rho = rho0;
      for (std::int64_t n = 0; n <= n_max; ++n) {
        if (n >= first) {
          out.values[static_cast<std::size_t>(n - first)] += w * obs.transpose().cwiseProduct(rho).sum().real();
        }
        if (n < n_max) rho = u * rho * u.adjoint();
      }
      continue;
    }

    // U = Q T Q^dag with T diagonal for a unitary U (up to rounding), so
    // S(N) = sum_jk C_jk (d_j conj(d_k))^N with C_jk = O~_kj rho~_jk.
    Eigen::ComplexSchur<Operator> cs(u);
    if (cs.info() != Eigen::Success) throw std::runtime_error("Schur decomposition failed");
    const Operator& t = cs.matrixT();
    const Operator& q = cs.matrixU();
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = r + 1; c < t.cols(); ++c)
        diag_.schur_residual = std::max(diag_.schur_residual, std::abs(t(r, c)));
    const Operator rt = q.adjoint() * rho0 * q;
    const Operator ot = q.adjoint() * obs * q;
    const Operator cmat = ot.transpose().cwiseProduct(rt);
    const Eigen::VectorXd phase = t.diagonal().unaryExpr([](cd z) { return std::arg(z); }).real();
    Eigen::VectorXcd v(phase.size());
    for (std::int64_t n = first; n <= n_max; ++n) {
      const double nn = static_cast<double>(n);
      for (Eigen::Index j = 0; j < phase.size(); ++j) v(j) = std::polar(1.0, nn * phase(j));
      const Eigen::VectorXcd wv = cmat * v.conjugate();
      out.values[static_cast<std::size_t>(n - first)] += w * (v.transpose() * wv)(0).real();
    }
  }
  for (auto& x : out.values) x /= norm;
  return out;
}

}  // namespace adpdtc::quantum
