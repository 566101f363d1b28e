#include "adpdtc_cli/cli.hpp"

#include "adpdtc/error.hpp"
#include "adpdtc/series_io.hpp"
#include "commands.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <ostream>

namespace adpdtc::cli {

namespace {

void add_common(CLI::App& app, Common& c) {
  app.add_option("--out", c.out_dir, "output directory");
  app.add_option("--config", c.config_path, "flat JSON file of flag values; command-line flags win");
  app.add_option("--seed", c.seed, "seed for fit multi-starts");
  app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

void add_system(CLI::App& app, SystemArgs& s) {
  app.add_option("--spins", s.spins, "31P spins in the cluster (centre included)");
  app.add_option("--protons", s.protons, "strongest 1H partners kept as Ising spins");
  app.add_option("--nitrogens", s.nitrogens, "strongest 14N partners kept as Ising spins");
  app.add_option("--orientation", s.orientation, "field direction THETA,PHI in degrees");
  app.add_option("--origin", s.origin, "central 31P site 0..3");
  app.add_option("--search-radius", s.search_radius, "partner search radius in Angstrom");
  app.add_option("--cell", s.cell_path, "unit cell JSON (default: built-in ADP cell)");
  app.add_option("--cap", s.cap, "Hilbert-space dimension cap");
  app.add_option("--method", s.method, "auto, stepwise or schur");
}

void add_sequence(CLI::App& app, SequenceArgs& s, bool scanned) {
  app.add_option("--builtin", s.builtin, "dtc, xx, yy, xy, burst_xyxy, dtc_echo");
  app.add_option("--seq", s.seq_path, "sequence file");
  app.add_option("--param", s.params, "key=value binding, repeatable")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--mode", s.mode, "delta, finite or hybrid");
  if (!scanned) {
    app.add_option("--theta", s.theta, "pulse angle, e.g. 1.04pi");
    app.add_option("--tau", s.tau, "free evolution, e.g. 392.5us");
  }
  app.add_option("--tp", s.t_p, "pulse duration");
  app.add_option("--omega1", s.omega1, "rf amplitude in rad/s");
  app.add_option("--N", s.n, "number of cycles");
}

// Splices config-file tokens in right after the subcommand so later
// command-line values take precedence (options keep the last value).
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    }
    if (consumed == 0) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(io::read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config " + path + ": " + e.what());
    }
    auto tokens = config_tokens(j);
    for (const auto& t : tokens)
      if (t.rfind("--config=", 0) == 0) throw UsageError("config files cannot nest");
    args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    return args;
  }
  return args;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete time crystal simulations for ADP 31P spin lattices", "adpdtc"};
  app.set_version_flag("--version", ADPDTC_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  LatticeArgs lattice_a;
  LineshapeArgs lineshape_a;
  DtcArgs dtc_a;
  SweepArgs sweep_a;
  EchoArgs echo_a;
  AnalyzeArgs analyze_a;

  auto* lat = app.add_subcommand("lattice", "coupling tables, shell counts and symmetry report");
  add_common(*lat, common);
  lat->add_option("--radius", lattice_a.radius, "shell radius in Angstrom");
  lat->add_option("--orientation", lattice_a.orientation, "THETA,PHI in degrees");
  lat->add_option("--origin", lattice_a.origin, "central 31P site 0..3");
  lat->add_flag("--symmetry", lattice_a.symmetry, "compare couplings across the four origins");
  lat->add_option("--tolerance", lattice_a.tolerance, "relative tolerance of the symmetry comparison");
  lat->add_option("--cell", lattice_a.cell_path, "unit cell JSON");

  auto* ls = app.add_subcommand("lineshape", "Ising FID, spectrum and rms width");
  add_common(*ls, common);
  ls->add_option("--orientation", lineshape_a.orientation, "THETA,PHI in degrees");
  ls->add_option("--radius", lineshape_a.radius, "shell radius in Angstrom");
  ls->add_option("--interactions", lineshape_a.interactions, "subset of PP,PH,PN");
  ls->add_flag("--hahn", lineshape_a.hahn, "Hahn-echo pseudo-FID (heteronuclear terms refocused)");
  ls->add_option("--broaden", lineshape_a.broaden, "Gaussian FWHM in Hz");
  ls->add_option("--dt", lineshape_a.dt, "sample spacing");
  ls->add_option("--samples", lineshape_a.samples, "number of samples");
  ls->add_option("--zero-fill", lineshape_a.zero_fill, "zero-fill factor");
  ls->add_option("--cell", lineshape_a.cell_path, "unit cell JSON");

  auto* dtc = app.add_subcommand("dtc", "stroboscopic S(N) and crystalline fraction");
  add_common(*dtc, common);
  add_system(*dtc, dtc_a.system);
  add_sequence(*dtc, dtc_a.sequence, false);
  dtc->add_option("--window", dtc_a.window, "DFT window a:b (default 1:N)");

  auto* sw = app.add_subcommand("sweep", "f(theta) curves over a theta/tau grid with fits and boundaries");
  add_common(*sw, common);
  add_system(*sw, sweep_a.system);
  add_sequence(*sw, sweep_a.sequence, true);
  sw->add_option("--theta", sweep_a.thetas, "grid a:b:n or list");
  sw->add_option("--tau", sweep_a.taus, "grid a:b:n or list");
  sw->add_option("--window", sweep_a.window, "DFT window a:b");
  sw->add_option("--cutoff", sweep_a.cutoffs, "boundary cutoffs f_c, comma list");

  auto* ec = app.add_subcommand("echo", "forward DTC cycles followed by the long-pulse reversal");
  add_common(*ec, common);
  add_system(*ec, echo_a.system);
  ec->add_option("--theta", echo_a.theta, "pulse angle");
  ec->add_option("--T", echo_a.period, "forward cycle period");
  ec->add_option("--N", echo_a.n_forward, "forward cycles");
  ec->add_option("--Nprime", echo_a.n_prime, "reverse cycle range a:b");
  ec->add_option("--tp", echo_a.t_p, "short pulse duration");
  ec->add_option("--omega1-long", echo_a.omega1_long, "long pulse amplitude in rad/s");
  ec->add_flag("--finite-short", echo_a.finite_short, "give the short pulses duration tp");

  auto* an = app.add_subcommand("analyze", "post-process signals, f curves and nutation data");
  add_common(*an, common);
  an->add_option("--signal", analyze_a.signal_path, "N,t_s,S CSV");
  an->add_option("--window", analyze_a.window, "DFT window a:b");
  an->add_option("--curve", analyze_a.curve_path, "theta_rad,f CSV");
  an->add_option("--tau", analyze_a.tau, "tau recorded with the boundaries");
  an->add_option("--cutoff", analyze_a.cutoffs, "boundary cutoffs");
  an->add_option("--theta-shift", analyze_a.theta_shift, "offset added to theta before fitting");
  an->add_option("--nutation", analyze_a.nutation_path, "t_s,value nutation CSV");
  an->add_option("--hahn", analyze_a.hahn_path, "t_s,value Hahn-echo CSV");
  an->add_option("--floor", analyze_a.floor, "drop samples whose divisor is below this fraction");
  an->add_option("--bins", analyze_a.bins, "histogram bins of the angle distribution");
  an->add_flag("--window-model", analyze_a.window_model, "f(theta) of the Lorentzian N* model");
  an->add_option("--thetas", analyze_a.thetas, "theta grid for --window-model");
  an->add_option("--windows", analyze_a.windows, "windows for --window-model, comma list of a:b");

  try {
    args = expand_config(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    std::string command;
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();
    Run run(command, common, out);
    if (lat->parsed()) return cmd_lattice(lattice_a, run);
    if (ls->parsed()) return cmd_lineshape(lineshape_a, run);
    if (dtc->parsed()) return cmd_dtc(dtc_a, run);
    if (sw->parsed()) return cmd_sweep(sweep_a, run);
    if (ec->parsed()) return cmd_echo(echo_a, run);
    return cmd_analyze(analyze_a, run);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "sequence error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnboundSymbol& e) {
    err << "sequence error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace adpdtc::cli
