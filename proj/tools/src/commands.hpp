#pragma once

#include "adpdtc/analysis.hpp"
#include "adpdtc/quantum.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace adpdtc::cli {

struct Common {
  std::string out_dir = "adpdtc-out";
  std::string config_path;
  std::uint64_t seed = analysis::kDefaultSeed;
  int jobs = 1;
};

struct SystemArgs {
  int spins = 8;
  int protons = 0;
  int nitrogens = 0;
  std::string orientation = "60,0";
  int origin = 0;
  double search_radius = 15.0;
  std::string cell_path;
  std::size_t cap = quantum::kDefaultDimensionCap;
  std::string method = "auto";
};

struct SequenceArgs {
  std::string builtin = "dtc";
  std::string seq_path;
  std::vector<std::string> params;
  std::string mode = "finite";
  std::string theta, tau, t_p, omega1, n;
};

struct LatticeArgs {
  double radius = 20.25;
  std::string orientation = "60,0";
  int origin = 0;
  bool symmetry = false;
  double tolerance = 1e-9;
  std::string cell_path;
};

struct LineshapeArgs {
  std::string orientation = "60,0";
  double radius = 20.25;
  std::string interactions = "PP,PH,PN";
  bool hahn = false;
  double broaden = 0.0;
  std::string dt = "5us";
  std::size_t samples = 4096;
  std::size_t zero_fill = 1;
  std::string cell_path;
};

struct DtcArgs {
  SystemArgs system;
  SequenceArgs sequence;
  std::string window;
};

struct SweepArgs {
  SystemArgs system;
  SequenceArgs sequence;
  std::string thetas = "0.9pi:1.1pi:41";
  std::string taus = "20us,400us";
  std::string window = "1:128";
  std::string cutoffs = "0.05,0.1,0.15";
};

struct EchoArgs {
  SystemArgs system;
  std::string theta = "1.08pi";
  std::string period = "200us";
  std::int64_t n_forward = 6;
  std::string n_prime = "0:12";
  std::string t_p = "7.5us";
  std::string omega1_long;
  bool finite_short = false;
};

struct AnalyzeArgs {
  std::string signal_path;
  std::string window;
  std::string curve_path;
  std::string tau;
  std::string cutoffs = "0.05,0.1,0.15";
  std::string theta_shift = "0";
  std::string nutation_path;
  std::string hahn_path;
  double floor = 0.02;
  std::size_t bins = 41;
  bool window_model = false;
  std::string thetas = "0.95pi:1.05pi:41";
  std::string windows = "1:128,1:20";
};

/// Output directory plus the manifest collected while a command runs.
class Run {
 public:
  Run(std::string command, const Common& common, std::ostream& out);

  std::ostream& out() { return out_; }
  const Common& common() const { return common_; }
  nlohmann::json& config() { return manifest_["config"]; }
  nlohmann::json& derived() { return manifest_["derived"]; }

  /// Writes `text` to out_dir/name and records it.
  void write(const std::string& name, const std::string& text);
  void write_json(const std::string& name, const nlohmann::json& j);
  /// Path for a file written by other code; recorded like write().
  std::filesystem::path output(const std::string& name);
  /// Writes manifest.json last.
  void finish();

 private:
  std::filesystem::path dir_;
  Common common_;
  std::ostream& out_;
  nlohmann::json manifest_;
};

int cmd_lattice(const LatticeArgs& a, Run& run);
int cmd_lineshape(const LineshapeArgs& a, Run& run);
int cmd_dtc(const DtcArgs& a, Run& run);
int cmd_sweep(const SweepArgs& a, Run& run);
int cmd_echo(const EchoArgs& a, Run& run);
int cmd_analyze(const AnalyzeArgs& a, Run& run);

}  // namespace adpdtc::cli
