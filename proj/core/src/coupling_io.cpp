#include "adpdtc/error.hpp"
#include "adpdtc/lattice.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>

namespace adpdtc::lattice {

void write_coupling_csv(const CouplingTable& table, const SpinCluster& cluster, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "partner_index,species,x_A,y_A,z_A,b_rad_per_s\n";
  char line[256];
  for (const auto& e : table.entries) {
    if (e.partner_index >= cluster.sites.size()) throw InvalidArgument("coupling table does not match cluster");
    std::snprintf(line, sizeof line, "%zu,%s,%.10f,%.10f,%.10f,%.12e\n", e.partner_index,
                  std::string(to_string(species_of(e.kind))).c_str(), e.position.x(), e.position.y(),
                  e.position.z(), e.b);
    out << line;
  }
  if (!out) throw IoError("write failed for " + path);
}

nlohmann::json coupling_sidecar(const CouplingTable& table, const SpinCluster& cluster) {
  const ClusterCounts c = cluster.counts();
  nlohmann::json kinds = nlohmann::json::array();
  for (const auto& e : table.entries) kinds.push_back(std::string(to_string(e.kind)));
  return {{"orientation", {{"theta_deg", table.orientation.theta_deg}, {"phi_deg", table.orientation.phi_deg}}},
          {"origin_index", table.origin_index},
          {"radius_A", cluster.radius},
          {"counts",
           {{"phosphorus_partners", c.phosphorus},
            {"phosphorus_total", c.phosphorus_total()},
            {"nitrogen", c.nitrogen},
            {"protons", c.protons},
            {"ammonium_protons", c.ammonium_protons},
            {"acid_protons", c.acid_protons}}},
          {"site_kinds", kinds},
          {"units", {{"position", "angstrom"}, {"b", "rad/s"}}}};
}

nlohmann::json to_json(const SymmetryReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [i, j] : report.acid_agreeing_pairs()) pairs.push_back({i, j});
  nlohmann::json dev;
  for (std::size_t k = 0; k < kAllSiteKinds.size(); ++k) {
    dev[std::string(to_string(kAllSiteKinds[k]))] = report.max_deviation[k];
  }
  return {{"orientation", {{"theta_deg", report.orientation.theta_deg}, {"phi_deg", report.orientation.phi_deg}}},
          {"radius_A", report.radius},
          {"tolerance", report.tolerance},
          {"sublattice_invariant", report.sublattice_invariant},
          {"acid_invariant", report.acid_invariant},
          {"acid_agreeing_pairs", pairs},
          {"max_relative_deviation", dev}};
}

}  // namespace adpdtc::lattice
