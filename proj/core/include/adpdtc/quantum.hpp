#pragma once

#include "adpdtc/constants.hpp"
#include "adpdtc/lattice.hpp"
#include "adpdtc/pulseq.hpp"
#include "adpdtc/signal.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace adpdtc::quantum {

using Operator = Eigen::MatrixXcd;

inline constexpr std::size_t kDefaultDimensionCap = 4096;

// ---- spin systems -----------------------------------------------------------

struct Spin {
  Species species;
  int twice_spin;
  lattice::Vec3 position;  // Angstrom, informational
};

struct PairCoupling {
  std::size_t i;
  std::size_t j;
  double b;  // rad/s
};

enum class CouplingClass { Homonuclear, Heteronuclear };

/// Spins, pairwise secular couplings and Zeeman offsets. Pairs of 31P are
/// coupled by the full secular dipolar form, every other pair by the Ising
/// form 2 b Iz Rz.
class SpinSystem {
 public:
  std::size_t add_spin(Species species, const lattice::Vec3& position = lattice::Vec3::Zero());
  /// Sets (or replaces) the coupling of an unordered pair.
  void set_coupling(std::size_t i, std::size_t j, double b);
  void set_offset(std::size_t i, double omega);

  const std::vector<Spin>& spins() const { return spins_; }
  const std::vector<PairCoupling>& couplings() const { return couplings_; }
  const std::vector<double>& offsets() const { return offsets_; }
  std::size_t size() const { return spins_.size(); }

  CouplingClass coupling_class(std::size_t i, std::size_t j) const;
  bool is_phosphorus(std::size_t i) const { return spins_.at(i).species == Species::P31; }
  std::vector<std::size_t> phosphorus_indices() const;

  /// prod (2 s_i + 1), saturating at SIZE_MAX.
  std::size_t dimension() const;
  /// Throws DimensionOverflow when dimension() > cap.
  void check_dimension(std::size_t cap = kDefaultDimensionCap) const;

 private:
  std::vector<Spin> spins_;
  std::vector<PairCoupling> couplings_;
  std::vector<double> offsets_;
};

struct ClusterSpec {
  int origin_index = 0;
  int phosphorus_neighbors = 7;  // k strongest |b| partners
  int protons = 0;               // strongest 1H partners as Ising spins
  int nitrogens = 0;             // strongest 14N partners as Ising spins
  double search_radius = 15.0;   // Angstrom
};

/// Central 31P plus its strongest-|b| partners chosen from the lattice.
/// Every pair involving at least one 31P is coupled with the value implied
/// by its own internuclear vector.
SpinSystem cluster_system(const lattice::UnitCell& cell, const lattice::Orientation& orientation,
                          const ClusterSpec& spec);

// ---- full-space operators ---------------------------------------------------

enum class Axis { X, Y, Z };

/// Single-spin operator I_axis of spin i in the product basis (spin 0 is the
/// most significant digit, m runs from +s down to -s).
Operator spin_operator(const SpinSystem& sys, std::size_t i, Axis axis,
                       std::size_t cap = kDefaultDimensionCap);
/// Sum of I_axis over the 31P spins.
Operator total_operator(const SpinSystem& sys, Axis axis, std::size_t cap = kDefaultDimensionCap);
/// cos(phase) I_xT + sin(phase) I_yT over the 31P spins.
Operator phase_operator(const SpinSystem& sys, double phase, std::size_t cap = kDefaultDimensionCap);

/// H_int = sum Omega_i I_zi + sum_PP b (3 I_zi I_zj - I_i.I_j) + sum_other 2 b I_zi R_zj.
Operator build_hamiltonian(const SpinSystem& sys, std::size_t cap = kDefaultDimensionCap);

/// sum_PP b (3 I_ai I_aj - I_i.I_j) for a = x, y, z.
Operator dipolar_form(const SpinSystem& sys, Axis axis, std::size_t cap = kDefaultDimensionCap);

/// exp(-i H t) via Hermitian eigendecomposition.
Operator propagator(const Operator& hamiltonian, double t);
/// exp(+i angle I_phase) on the 31P spins.
Operator rotation(const SpinSystem& sys, double angle, double phase, std::size_t cap = kDefaultDimensionCap);

Operator evolve_free(const Operator& rho, const Operator& hamiltonian, double tau);
/// Delta: R rho R^dag with R = exp(+i angle I_phase). Finite: evolution under
/// H - omega1 I_phase for the pulse duration.
Operator apply_pulse(const SpinSystem& sys, const Operator& rho, const Operator& hamiltonian,
                     const pulseq::PulseEvent& ev, std::size_t cap = kDefaultDimensionCap);

/// Tr[O rho(t)] / Tr[O rho(0)] with rho(0) = O = I_axis,T, free evolution.
TimeSeries free_induction_decay(const SpinSystem& sys, Axis axis, double dt, std::size_t n_samples,
                                std::size_t cap = kDefaultDimensionCap);

double max_unitarity_error(const Operator& u);

// ---- stroboscopic engine ----------------------------------------------------

enum class Method { Auto, Stepwise, Schur };

struct EngineOptions {
  Method method = Method::Auto;
  std::size_t dimension_cap = kDefaultDimensionCap;
  std::int64_t schur_threshold = 256;  // Auto switches to Schur above this N_max
  bool include_zero = false;           // record N = 0 as well
  Axis initial = Axis::Z;
  Axis observable = Axis::Z;
};

struct RunDiagnostics {
  double max_unitarity_error = 0.0;
  double schur_residual = 0.0;  // largest strictly-upper Schur entry
  std::size_t sectors = 0;
  bool used_schur = false;
};

/// Floquet engine for 31P clusters with static Ising partners. The 31P
/// subspace is simulated exactly; heteronuclear partners conserve their
/// R_z and split the dynamics into independent sectors, each seeing local
/// fields sum_j 2 b_ij m_j. Identical sectors are merged.
class Engine {
 public:
  explicit Engine(SpinSystem sys, EngineOptions options = {});

  const SpinSystem& system() const { return sys_; }
  std::size_t sector_count() const { return sectors_.size(); }
  std::size_t subspace_dimension() const;

  /// Propagator of a timeline within one sector (P subspace).
  Operator timeline_propagator(std::size_t sector, const pulseq::Timeline& events);
  /// exp(-i H_sector t) within one sector.
  Operator free_propagator(std::size_t sector, double t);
  /// exp(+i angle I_phase) on the P subspace.
  Operator subspace_rotation(double angle, double phase) const;

  /// S(N) for N in [first, n_max]: prologue, N blocks, epilogue.
  DiscreteSignal run(const pulseq::ExpandedParts& parts, std::int64_t n_max);
  /// Expands the program for its own block and scans N up to n_max.
  DiscreteSignal run_sequence(const pulseq::SequenceProgram& program, const pulseq::Bindings& bindings,
                              pulseq::PulseMode mode, std::int64_t n_max);

  /// Lower-level entry: per-sector prologue, block and epilogue propagators.
  DiscreteSignal run_propagators(const std::vector<Operator>& prologue, const std::vector<Operator>& block,
                                 const std::vector<Operator>& epilogue, std::int64_t n_max);

  const RunDiagnostics& diagnostics() const { return diag_; }

 private:
  struct Sector {
    double weight;
    Operator hamiltonian;  // P subspace
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;
    bool diagonalised = false;
    std::map<std::pair<double, double>, std::pair<Eigen::MatrixXcd, Eigen::VectorXd>> pulse_eigen;
  };

  void diagonalise(Sector& s);
  Operator track(Operator u);

  SpinSystem sys_;
  SpinSystem psys_;  // P spins only
  EngineOptions options_;
  std::vector<Sector> sectors_;
  Operator initial_;
  Operator observable_;
  RunDiagnostics diag_;
};

// ---- DTC echo ---------------------------------------------------------------

struct EchoOptions {
  double theta = 1.08 * kPi;
  double period = 200e-6;        // T of the forward DTC cycle
  std::int64_t n_forward = 6;    // N
  std::int64_t n_reverse_max = 12;
  double t_p = 7.5e-6;
  /// Short pulses: Delta keeps them instantaneous (long Y pulse still finite),
  /// Finite gives them duration t_p.
  bool finite_short_pulses = false;
  /// Amplitude of the long reversal pulse; default is theta / t_p.
  std::optional<double> omega1_long;
  /// Replace the long pulse by exact reversal of the free evolution.
  bool ideal_reversal = false;
};

struct EchoResult {
  DiscreteSignal signal;          // over N' from 0
  std::vector<double> envelope;   // cos^{N + N'}(theta - pi)
  pulseq::SequenceProgram program;
};

EchoResult run_dtc_echo(const SpinSystem& sys, const EchoOptions& options, EngineOptions engine = {});

// ---- average Hamiltonian ----------------------------------------------------

struct AverageHamiltonian {
  Operator mean;            // (1/T_c) integral of the toggling-frame Hamiltonian
  double cycle_time = 0.0;  // T_c

  Operator integrated() const { return mean * cycle_time; }
};

/// Zeroth-order average of H_int over one block in the toggling frame of the
/// rf. Finite pulses are integrated exactly in the eigenbasis of I_phase;
/// pulses of any angle are accepted.
AverageHamiltonian average_hamiltonian_0(const SpinSystem& sys, const pulseq::Timeline& block,
                                         std::size_t cap = kDefaultDimensionCap);

/// Decompose `op` against `basis`: returns (coefficient, ||op - c basis||_F).
std::pair<double, double> project_onto(const Operator& op, const Operator& basis);

}  // namespace adpdtc::quantum
