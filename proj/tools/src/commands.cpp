#include "commands.hpp"

#include "adpdtc/error.hpp"
#include "adpdtc/fft.hpp"
#include "adpdtc/lineshape.hpp"
#include "adpdtc/series_io.hpp"
#include "adpdtc_cli/cli.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace adpdtc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- run bookkeeping --------------------------------------------------------

Run::Run(std::string command, const Common& common, std::ostream& out) : dir_(common.out_dir), common_(common), out_(out) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  manifest_ = {{"tool", "adpdtc"},
               {"version", ADPDTC_VERSION},
               {"command", std::move(command)},
               {"seed", common.seed},
               {"libraries",
                {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                               std::to_string(EIGEN_MINOR_VERSION)},
                 {"fftw", fft::library_version()},
                 {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                       std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
               {"config", json::object()},
               {"derived", json::object()},
               {"outputs", json::array()}};
  if (!common.config_path.empty()) manifest_["config_file"] = common.config_path;
}

void Run::write(const std::string& name, const std::string& text) {
  io::write_text_file(dir_ / name, text);
  manifest_["outputs"].push_back(name);
}

void Run::write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

fs::path Run::output(const std::string& name) {
  manifest_["outputs"].push_back(name);
  return dir_ / name;
}

void Run::finish() { io::write_text_file(dir_ / "manifest.json", manifest_.dump(2) + "\n"); }

namespace {

std::string num(double x) { return io::format_number(x); }

json null_or(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Runs fn(i) for i in [0, n) on `jobs` threads. Workers only fill their own
// result slots; the caller collects and writes.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

lattice::UnitCell load_cell(const std::string& path) {
  return path.empty() ? lattice::UnitCell::adp() : lattice::load_unit_cell(path);
}

quantum::Method method_from(const std::string& s) {
  if (s == "auto") return quantum::Method::Auto;
  if (s == "stepwise") return quantum::Method::Stepwise;
  if (s == "schur") return quantum::Method::Schur;
  throw UsageError("method must be auto, stepwise or schur");
}

pulseq::PulseMode mode_from(const std::string& s) {
  if (s == "delta") return pulseq::PulseMode::Delta;
  if (s == "finite") return pulseq::PulseMode::Finite;
  if (s == "hybrid") return pulseq::PulseMode::Hybrid;
  throw UsageError("mode must be delta, finite or hybrid");
}

quantum::SpinSystem build_system(const SystemArgs& a, json& cfg) {
  if (a.spins < 1) throw UsageError("--spins must be >= 1");
  quantum::ClusterSpec spec;
  spec.origin_index = a.origin;
  spec.phosphorus_neighbors = a.spins - 1;
  spec.protons = a.protons;
  spec.nitrogens = a.nitrogens;
  spec.search_radius = a.search_radius;
  const auto orientation = parse_orientation(a.orientation);
  cfg["spins"] = a.spins;
  cfg["protons"] = a.protons;
  cfg["nitrogens"] = a.nitrogens;
  cfg["orientation"] = a.orientation;
  cfg["origin"] = a.origin;
  cfg["search_radius"] = a.search_radius;
  cfg["cap"] = a.cap;
  cfg["method"] = a.method;
  if (!a.cell_path.empty()) cfg["cell"] = a.cell_path;
  auto sys = quantum::cluster_system(load_cell(a.cell_path), orientation, spec);
  sys.check_dimension(a.cap);
  return sys;
}

json system_json(const quantum::SpinSystem& sys) {
  json spins = json::array();
  for (const auto& s : sys.spins())
    spins.push_back({{"species", std::string(to_string(s.species))},
                     {"position_A", {s.position.x(), s.position.y(), s.position.z()}}});
  json couplings = json::array();
  for (const auto& c : sys.couplings()) couplings.push_back({{"i", c.i}, {"j", c.j}, {"b_rad_per_s", c.b}});
  return {{"spins", spins}, {"couplings", couplings}, {"dimension", sys.dimension()}};
}

quantum::EngineOptions engine_options(const SystemArgs& a) {
  quantum::EngineOptions o;
  o.method = method_from(a.method);
  o.dimension_cap = a.cap;
  return o;
}

json diagnostics_json(const quantum::RunDiagnostics& d) {
  return {{"max_unitarity_error", d.max_unitarity_error},
          {"schur_residual", d.schur_residual},
          {"sectors", d.sectors},
          {"used_schur", d.used_schur}};
}

struct LoadedSequence {
  pulseq::SequenceProgram program;
  pulseq::Bindings bindings;
  pulseq::PulseMode mode;
};

LoadedSequence load_sequence(const SequenceArgs& a, json& cfg) {
  std::map<std::string, std::string> params;
  for (const auto& p : a.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + p + "'");
    params[p.substr(0, eq)] = p.substr(eq + 1);
  }
  // Named shortcuts; checked here so a typo is a usage error.
  auto shortcut = [&](const char* key, const std::string& v, double (*check)(const std::string&)) {
    if (v.empty()) return;
    check(v);
    params[key] = v;
  };
  shortcut("theta", a.theta, parse_angle);
  shortcut("tau", a.tau, parse_time);
  shortcut("t_p", a.t_p, parse_time);
  shortcut("omega1", a.omega1, parse_angle);
  if (!a.n.empty()) {
    const auto [lo, hi] = parse_count_range(a.n);
    if (lo != 0 || hi < 1) throw UsageError("--N expects a positive cycle count");
    params["N"] = std::to_string(hi);
  }

  LoadedSequence out;
  out.mode = mode_from(a.mode);
  if (!a.seq_path.empty()) {
    out.program = pulseq::parse(io::read_text_file(a.seq_path));
    for (const auto& [k, v] : params) out.bindings[k] = pulseq::parse_value(v, out.bindings);
    cfg["seq"] = a.seq_path;
  } else {
    out.program = pulseq::builtin(a.builtin, params);
    cfg["builtin"] = a.builtin;
  }
  cfg["params"] = params;
  cfg["mode"] = a.mode;
  return out;
}

void check_fit(const analysis::FitReport& r, const std::string& what) {
  if (!r.converged) throw NumericFailure(what + " did not converge (residual " + num(r.residual) + ")");
}

json fit_report_json(const analysis::FitReport& r) {
  return {{"converged", r.converged}, {"residual", r.residual}, {"evaluations", r.iterations}, {"starts", r.starts}};
}

// Gaussian then super-Gaussian (centre fixed) on an f(theta) curve.
struct CurveFits {
  analysis::GaussianFit gauss;
  analysis::SuperGaussianFit super;
  json to_json() const {
    return {{"gaussian",
             {{"model", "A exp(-(theta - theta0)^2 / (2 sigma^2))"},
              {"A", gauss.amplitude},
              {"theta0", gauss.center},
              {"sigma", gauss.sigma},
              {"report", fit_report_json(gauss.report)}}},
            {"super_gaussian",
             {{"model", "A exp(-(|theta - theta0| / sigma)^p / 2)"},
              {"A", super.amplitude},
              {"theta0", super.center},
              {"sigma", super.sigma},
              {"p", super.p},
              {"report", fit_report_json(super.report)}}}};
  }
};

CurveFits fit_curve(const std::vector<double>& theta, const std::vector<double>& f, std::uint64_t seed) {
  CurveFits fits;
  fits.gauss = analysis::fit_gaussian(theta, f, seed);
  fits.super = analysis::fit_super_gaussian(theta, f, fits.gauss.center, seed);
  return fits;
}

std::vector<io::BoundaryRow> boundaries(const CurveFits& fits, double tau, const std::vector<double>& cutoffs,
                                        json& missing) {
  std::vector<io::BoundaryRow> rows;
  for (double c : cutoffs) {
    if (auto b = analysis::boundary_extract(fits.gauss, c)) {
      rows.push_back({tau, b->left, b->right, c});
    } else {
      missing.push_back({{"tau_s", tau}, {"cutoff", c}, {"reason", "fitted amplitude does not exceed cutoff"}});
    }
  }
  return rows;
}

double parse_fraction(const std::string& s) {
  const double v = parse_angle(s);
  if (!(v > 0.0 && v < 1.0)) throw UsageError("cutoffs must lie in (0, 1)");
  return v;
}

std::string tau_tag(double tau) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6gus", tau * 1e6);
  return buf;
}

}  // namespace

// ---- lattice ----------------------------------------------------------------

int cmd_lattice(const LatticeArgs& a, Run& run) {
  const auto orientation = parse_orientation(a.orientation);
  if (!(a.radius > 0.0)) throw UsageError("--radius must be positive");
  if (a.origin < 0 || a.origin > 3) throw UsageError("--origin must be 0..3");
  const auto cell = load_cell(a.cell_path);
  auto& cfg = run.config();
  cfg["radius"] = a.radius;
  cfg["orientation"] = a.orientation;
  cfg["origin"] = a.origin;
  cfg["symmetry"] = a.symmetry;
  cfg["tolerance"] = a.tolerance;
  if (!a.cell_path.empty()) cfg["cell"] = a.cell_path;

  const auto cluster = lattice::build_cluster(cell, a.origin, a.radius);
  const auto table = lattice::coupling_table(cluster, orientation);
  lattice::write_coupling_csv(table, cluster, run.output("couplings.csv").string());
  const auto sidecar = lattice::coupling_sidecar(table, cluster);
  run.write_json("couplings.json", sidecar);
  run.write_json("counts.json", sidecar.at("counts"));
  const auto c = cluster.counts();
  run.out() << "31P " << c.phosphorus_total() << " (incl. centre), 14N " << c.nitrogen << ", 1H " << c.protons
            << " within " << a.radius << " A\n";
  run.derived()["counts"] = sidecar.at("counts");

  if (a.symmetry) {
    const auto report = lattice::symmetry_report(cell, a.radius, orientation, a.tolerance);
    run.write_json("symmetry.json", lattice::to_json(report));
    run.out() << "sublattice couplings " << (report.sublattice_invariant ? "identical" : "differ")
              << " across origins; acid 1H " << (report.acid_invariant ? "identical" : "split");
    if (!report.acid_invariant) {
      run.out() << " (agreeing origin pairs:";
      for (auto [i, j] : report.acid_agreeing_pairs()) run.out() << " " << i << "-" << j;
      run.out() << ")";
    }
    run.out() << "\n";
  }
  run.finish();
  return kOk;
}

// ---- lineshape --------------------------------------------------------------

int cmd_lineshape(const LineshapeArgs& a, Run& run) {
  using lineshape::Interaction;
  lineshape::LineshapeOptions o;
  o.orientation = parse_orientation(a.orientation);
  if (!(a.radius > 0.0)) throw UsageError("--radius must be positive");
  o.radius = a.radius;
  o.dt = parse_time(a.dt);
  if (!(o.dt > 0.0)) throw UsageError("--dt must be positive");
  if (a.samples < 2) throw UsageError("--samples must be >= 2");
  if (a.zero_fill < 1) throw UsageError("--zero-fill must be >= 1");
  if (!(a.broaden >= 0.0)) throw UsageError("--broaden must be >= 0");
  o.n_samples = a.samples;
  o.zero_fill = a.zero_fill;
  o.broaden_fwhm_hz = a.broaden;

  std::vector<Interaction> requested;
  {
    std::stringstream ss(a.interactions);
    for (std::string part; std::getline(ss, part, ',');) {
      try {
        const auto which = lineshape::interaction_from_string(part);
        if (std::find(requested.begin(), requested.end(), which) == requested.end()) requested.push_back(which);
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
    }
  }
  if (requested.empty()) throw UsageError("--interactions needs at least one of PP, PH, PN");
  json refocused = json::array();
  if (a.hahn) {
    // The echo pulse refocuses the heteronuclear Ising terms; only PP survives.
    for (auto w : requested)
      if (w != Interaction::PP) refocused.push_back(lineshape::to_string(w));
    requested = {Interaction::PP};
  }
  o.interactions = requested;

  auto& cfg = run.config();
  cfg["orientation"] = a.orientation;
  cfg["radius"] = a.radius;
  cfg["interactions"] = a.interactions;
  cfg["hahn"] = a.hahn;
  cfg["broaden"] = a.broaden;
  cfg["dt"] = a.dt;
  cfg["samples"] = a.samples;
  cfg["zero_fill"] = a.zero_fill;
  if (!a.cell_path.empty()) cfg["cell"] = a.cell_path;

  const auto cell = load_cell(a.cell_path);
  const auto result = lineshape::simulate(cell, o);

  std::string label = "P,";
  for (auto w : {Interaction::PH, Interaction::PP, Interaction::PN})
    if (std::find(requested.begin(), requested.end(), w) != requested.end())
      label += w == Interaction::PH ? "H" : w == Interaction::PP ? "P" : "N";

  json per = json::object();
  for (auto w : requested) {
    const double b = lineshape::rms_coupling(cell, o.radius, o.orientation, w);
    per[lineshape::to_string(w)] = {{"b_rms_rad_per_s", b}, {"predicted_width_hz", lineshape::predicted_width_hz(w, b)}};
  }

  std::ostringstream fid, spec;
  io::write_time_series_csv(fid, result.fid);
  io::write_spectrum_csv(spec, result.spectrum);
  run.write(a.hahn ? "pseudo_fid.csv" : "fid.csv", fid.str());
  run.write("spectrum.csv", spec.str());
  json widths{{"label", "W^{" + label + "}"},
              {"rms_width_hz", result.rms_width_hz},
              {"interactions", json::array()},
              {"per_interaction", per},
              {"broaden_fwhm_hz", a.broaden},
              {"hahn", a.hahn}};
  for (auto w : requested) widths["interactions"].push_back(lineshape::to_string(w));
  if (a.hahn) {
    widths["refocused"] = refocused;
    widths["time_axis"] = "total echo time 2 tau";
  }
  run.write_json("widths.json", widths);
  run.derived()["rms_width_hz"] = result.rms_width_hz;
  run.out() << "W^{" << label << "}/2pi = " << num(result.rms_width_hz) << " Hz\n";
  run.finish();
  return kOk;
}

// ---- dtc --------------------------------------------------------------------

int cmd_dtc(const DtcArgs& a, Run& run) {
  auto& cfg = run.config();
  const auto sys = build_system(a.system, cfg);
  const auto seq = load_sequence(a.sequence, cfg);
  const auto parts = pulseq::expand_parts(seq.program, seq.bindings, seq.mode);
  const std::int64_t n_max = parts.repetitions;
  if (n_max < 1) throw UsageError("the repeated block must run at least once");

  quantum::Engine engine(sys, engine_options(a.system));
  const auto signal = engine.run(parts, n_max);
  const analysis::Window window = a.window.empty() ? analysis::Window{1, n_max} : parse_window(a.window);
  if (window.end > n_max) throw UsageError("window extends past N");
  if (!a.window.empty() && window.length() % 2 != 0) throw UsageError("window length must be even");
  cfg["window"] = std::to_string(window.start) + ":" + std::to_string(window.end);

  json f = nullptr;
  if (window.length() % 2 == 0) f = analysis::crystalline_fraction(signal, window);

  std::ostringstream csv;
  io::write_discrete_csv(csv, signal);
  run.write("signal.csv", csv.str());
  json result{{"f", f},
              {"window", {window.start, window.end}},
              {"time_to_half_s", null_or(analysis::time_to_fraction(signal, 0.5))},
              {"period_s", signal.period},
              {"n_max", n_max},
              {"diagnostics", diagnostics_json(engine.diagnostics())},
              {"system", system_json(sys)},
              {"sequence", pulseq::print(seq.program)},
              {"mode", a.sequence.mode},
              {"tolerances", {{"unitarity", 1e-10}, {"schur_threshold", engine_options(a.system).schur_threshold}}}};
  run.write_json("result.json", result);
  run.derived()["f"] = f;
  run.derived()["period_s"] = signal.period;
  if (f.is_null()) {
    run.out() << "f undefined for odd window length\n";
  } else {
    run.out() << "f = " << num(f.get<double>()) << " (window " << window.start << ":" << window.end << ")\n";
  }
  run.finish();
  return kOk;
}

// ---- sweep ------------------------------------------------------------------

int cmd_sweep(const SweepArgs& a, Run& run) {
  auto& cfg = run.config();
  const auto sys = build_system(a.system, cfg);
  auto seq_args = a.sequence;
  seq_args.theta.clear();  // scanned below
  seq_args.tau.clear();
  const auto seq = load_sequence(seq_args, cfg);
  const auto thetas = parse_grid(a.thetas, parse_angle);
  const auto taus = parse_grid(a.taus, parse_time);
  const auto window = parse_window(a.window);
  if (window.length() % 2 != 0) throw UsageError("window length must be even");
  std::vector<double> cutoffs = parse_grid(a.cutoffs, parse_fraction);
  std::sort(cutoffs.begin(), cutoffs.end());
  cfg["theta"] = a.thetas;
  cfg["tau"] = a.taus;
  cfg["window"] = a.window;
  cfg["cutoff"] = a.cutoffs;
  const auto options = engine_options(a.system);

  const std::size_t n_theta = thetas.size();
  std::vector<double> f(n_theta * taus.size(), 0.0);
  parallel_for(f.size(), run.common().jobs, [&](std::size_t i) {
    pulseq::Bindings b = seq.bindings;
    b["theta"] = pulseq::Value::real(thetas[i % n_theta]);
    b["tau"] = pulseq::Value::real(taus[i / n_theta]);
    quantum::Engine engine(sys, options);  // engines cache per-sector state, one per task
    f[i] = analysis::crystalline_fraction(engine.run_sequence(seq.program, b, seq.mode, window.end), window);
  });

  // Single collector from here on.
  json fits = json::array();
  json missing = json::array();
  std::vector<io::BoundaryRow> rows;
  bool all_converged = true;
  std::string failure;
  for (std::size_t t = 0; t < taus.size(); ++t) {
    const std::vector<double> curve(f.begin() + static_cast<long>(t * n_theta), f.begin() + static_cast<long>((t + 1) * n_theta));
    std::ostringstream csv;
    io::write_f_curve_csv(csv, thetas, curve);
    const std::string name = "f_tau_" + tau_tag(taus[t]) + ".csv";
    run.write(name, csv.str());
    json entry{{"tau_s", taus[t]}, {"curve", name}};
    if (n_theta >= 4) {
      const auto cf = fit_curve(thetas, curve, run.common().seed);
      entry.update(cf.to_json());
      for (const auto& r : boundaries(cf, taus[t], cutoffs, missing)) rows.push_back(r);
      if (!cf.gauss.report.converged || !cf.super.report.converged) {
        all_converged = false;
        failure = "fit at tau = " + num(taus[t]) + " s did not converge";
      }
    } else {
      entry["fit"] = "skipped: fewer than four theta points";
    }
    fits.push_back(entry);
    run.out() << "tau = " << tau_tag(taus[t]) << ": max f = " << num(*std::max_element(curve.begin(), curve.end()))
              << "\n";
  }
  std::ostringstream bcsv;
  io::write_boundary_csv(bcsv, rows);
  run.write("boundaries.csv", bcsv.str());
  run.write_json("fits.json", {{"fits", fits}, {"no_boundary", missing}, {"sequence", pulseq::print(seq.program)}});
  run.derived()["points"] = f.size();
  run.finish();
  if (!all_converged) throw NumericFailure(failure);
  return kOk;
}

// ---- echo -------------------------------------------------------------------

int cmd_echo(const EchoArgs& a, Run& run) {
  auto& cfg = run.config();
  const auto sys = build_system(a.system, cfg);
  quantum::EchoOptions o;
  o.theta = parse_angle(a.theta);
  o.period = parse_time(a.period);
  o.t_p = parse_time(a.t_p);
  o.n_forward = a.n_forward;
  const auto [first, last] = parse_count_range(a.n_prime);
  o.n_reverse_max = last;
  o.finite_short_pulses = a.finite_short;
  if (!a.omega1_long.empty()) o.omega1_long = parse_angle(a.omega1_long);
  if (o.n_forward < 0) throw UsageError("--N must be >= 0");
  cfg["theta"] = a.theta;
  cfg["T"] = a.period;
  cfg["N"] = a.n_forward;
  cfg["Nprime"] = a.n_prime;
  cfg["tp"] = a.t_p;
  cfg["finite_short"] = a.finite_short;
  if (!a.omega1_long.empty()) cfg["omega1_long"] = a.omega1_long;

  const auto eo = engine_options(a.system);
  const auto r = quantum::run_dtc_echo(sys, o, eo);
  auto ideal_o = o;
  ideal_o.ideal_reversal = true;
  const auto ideal = quantum::run_dtc_echo(sys, ideal_o, eo);

  std::ostringstream csv;
  csv << "Nprime,t_s,S,S_ideal,envelope_upper,envelope_lower\n";
  for (std::size_t k = 0; k < r.signal.size(); ++k) {
    if (r.signal.n(k) < first) continue;
    csv << r.signal.n(k) << ',' << num(r.signal.time(k)) << ',' << num(r.signal.values[k]) << ','
        << num(ideal.signal.values[k]) << ',' << num(r.envelope[k]) << ',' << num(-r.envelope[k]) << '\n';
  }
  run.write("echo.csv", csv.str());
  const auto at_n = static_cast<std::size_t>(std::min<std::int64_t>(o.n_forward, last));
  json result{{"S_at_N", r.signal.values[at_n]},
              {"envelope_at_N", r.envelope[at_n]},
              {"ideal_at_N", ideal.signal.values[at_n]},
              {"system", system_json(sys)},
              {"sequence", pulseq::print(r.program)},
              {"long_pulse_omega1", o.omega1_long ? *o.omega1_long : o.theta / o.t_p},
              {"short_pulses", a.finite_short ? "finite" : "delta"}};
  run.write_json("result.json", result);
  run.out() << "|S(N'=" << at_n << ")| = " << num(std::abs(r.signal.values[at_n])) << ", envelope "
            << num(r.envelope[at_n]) << "\n";
  run.finish();
  return kOk;
}

// ---- analyze ----------------------------------------------------------------

int cmd_analyze(const AnalyzeArgs& a, Run& run) {
  auto& cfg = run.config();
  const int modes = !a.signal_path.empty() + !a.curve_path.empty() + !a.nutation_path.empty() + a.window_model;
  if (modes != 1) throw UsageError("choose exactly one of --signal, --curve, --nutation, --window-model");

  if (!a.signal_path.empty()) {
    std::ifstream in(a.signal_path);
    if (!in) throw IoError("cannot open " + a.signal_path);
    const auto sig = io::read_discrete_csv(in);
    const analysis::Window w = a.window.empty()
                                   ? analysis::Window{sig.first_n, sig.first_n + static_cast<std::int64_t>(sig.size()) - 1}
                                   : parse_window(a.window);
    cfg["signal"] = a.signal_path;
    cfg["window"] = std::to_string(w.start) + ":" + std::to_string(w.end);
    const double f = analysis::crystalline_fraction(sig, w);
    const auto spec = analysis::dft(sig, w);
    const auto nu = analysis::normalized_frequencies(spec.size());
    std::ostringstream csv;
    csv << "nu,re,im\n";
    for (std::size_t k = 0; k < spec.size(); ++k)
      csv << num(nu[k]) << ',' << num(spec[k].real()) << ',' << num(spec[k].imag()) << '\n';
    run.write("dft.csv", csv.str());
    run.write_json("fraction.json", {{"f", f}, {"window", {w.start, w.end}}});
    run.out() << "f = " << num(f) << "\n";
  } else if (!a.curve_path.empty()) {
    std::ifstream in(a.curve_path);
    if (!in) throw IoError("cannot open " + a.curve_path);
    auto [theta, f] = io::read_f_curve_csv(in);
    const double shift = parse_angle(a.theta_shift);
    for (auto& t : theta) t += shift;
    const double tau = a.tau.empty() ? std::nan("") : parse_time(a.tau);
    auto cutoffs = parse_grid(a.cutoffs, parse_fraction);
    cfg["curve"] = a.curve_path;
    cfg["theta_shift"] = a.theta_shift;
    cfg["tau"] = a.tau;
    cfg["cutoff"] = a.cutoffs;
    if (theta.size() < 4) throw UsageError("curve needs at least four points");
    const auto cf = fit_curve(theta, f, run.common().seed);
    json missing = json::array();
    const auto rows = boundaries(cf, tau, cutoffs, missing);
    std::ostringstream csv;
    io::write_boundary_csv(csv, rows);
    run.write("boundaries.csv", csv.str());
    auto fit = cf.to_json();
    fit["no_boundary"] = missing;
    run.write_json("fit.json", fit);
    run.out() << "theta0 = " << num(cf.gauss.center) << " rad, p = " << num(cf.super.p) << "\n";
    run.finish();
    check_fit(cf.gauss.report, "Gaussian fit");
    check_fit(cf.super.report, "super-Gaussian fit");
    return kOk;
  } else if (!a.nutation_path.empty()) {
    if (a.hahn_path.empty()) throw UsageError("--nutation needs --hahn");
    std::ifstream nin(a.nutation_path), hin(a.hahn_path);
    if (!nin) throw IoError("cannot open " + a.nutation_path);
    if (!hin) throw IoError("cannot open " + a.hahn_path);
    const auto nut = io::read_time_series_csv(nin);
    const auto hahn = io::read_time_series_csv(hin);
    cfg["nutation"] = a.nutation_path;
    cfg["hahn"] = a.hahn_path;
    cfg["floor"] = a.floor;
    cfg["bins"] = a.bins;
    const auto corrected = analysis::nutation_correct(nut, hahn, a.floor);
    const auto fit = analysis::fit_h1_distribution(corrected, a.bins, run.common().seed);
    std::ostringstream cc, ec;
    cc << "t_s,value\n";
    for (std::size_t k = 0; k < corrected.size(); ++k) cc << num(corrected.times[k]) << ',' << num(corrected.values[k]) << '\n';
    ec << "epsilon_rad,p\n";
    for (const auto& [eps, p] : fit.epsilon.points) ec << num(eps) << ',' << num(p) << '\n';
    run.write("corrected.csv", cc.str());
    run.write("epsilon.csv", ec.str());
    json comps = json::array();
    for (const auto& c : fit.components) comps.push_back({{"A", c.amplitude}, {"nu_hz", c.nu}, {"sigma_hz", c.sigma}});
    run.write_json("h1_fit.json", {{"model", "sum_k A_k cos(2 pi nu_k t) exp(-2 pi^2 sigma_k^2 t^2)"},
                                   {"components", comps},
                                   {"nu_peak_hz", fit.nu_peak},
                                   {"report", fit_report_json(fit.report)}});
    run.out() << "nu_peak = " << num(fit.nu_peak) << " Hz\n";
    run.finish();
    check_fit(fit.report, "two-Gaussian fit");
    return kOk;
  } else {
    const auto thetas = parse_grid(a.thetas, parse_angle);
    cfg["window_model"] = true;
    cfg["theta"] = a.thetas;
    cfg["windows"] = a.windows;
    std::vector<analysis::Window> windows;
    std::stringstream ss(a.windows);
    for (std::string part; std::getline(ss, part, ',');) windows.push_back(parse_window(part));
    json out = json::array();
    bool ok = true;
    for (const auto& w : windows) {
      const auto f = analysis::window_effect_model(thetas, w);
      std::ostringstream csv;
      io::write_f_curve_csv(csv, thetas, f);
      const std::string name = "f_window_" + std::to_string(w.start) + "_" + std::to_string(w.end) + ".csv";
      run.write(name, csv.str());
      json entry{{"window", {w.start, w.end}}, {"curve", name}};
      if (thetas.size() >= 4) {
        const auto cf = fit_curve(thetas, f, run.common().seed);
        entry.update(cf.to_json());
        ok = ok && cf.gauss.report.converged && cf.super.report.converged;
        run.out() << "window " << w.start << ":" << w.end << ": p = " << num(cf.super.p) << "\n";
      }
      out.push_back(entry);
    }
    run.write_json("window_model.json", {{"nstar_at_pi", analysis::lorentzian_nstar(kPi)}, {"windows", out}});
    run.finish();
    if (!ok) throw NumericFailure("window-model fit did not converge");
    return kOk;
  }
  run.finish();
  return kOk;
}

}  // namespace adpdtc::cli
