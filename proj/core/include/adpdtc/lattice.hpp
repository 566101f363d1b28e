#pragma once

#include "adpdtc/constants.hpp"

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace adpdtc::lattice {

using Vec3 = Eigen::Vector3d;

/// Crystallographic role of a site. Ammonium protons sit (time-averaged) on
/// the nitrogen sites; acid protons between neighbouring PO4 groups.
enum class SiteKind { Phosphorus, Nitrogen, AmmoniumProton, AcidProton };

inline constexpr std::array<SiteKind, 4> kAllSiteKinds{
    SiteKind::Phosphorus, SiteKind::Nitrogen, SiteKind::AmmoniumProton, SiteKind::AcidProton};

Species species_of(SiteKind kind);
std::string_view to_string(SiteKind kind);

/// Tetragonal cell with fractional site lists. Lengths in Angstrom.
struct UnitCell {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::vector<Vec3> phosphorus;   // fractional
  std::vector<Vec3> nitrogen;     // fractional
  std::vector<Vec3> acid_protons; // fractional
  int ammonium_multiplicity = 4;

  /// Ammonium dihydrogen phosphate at room temperature.
  static UnitCell adp();

  Vec3 to_cartesian(const Vec3& fractional) const {
    return {fractional.x() * a, fractional.y() * b, fractional.z() * c};
  }

  /// Throws InvalidArgument on non-positive lengths or an empty P list.
  void validate() const;
};

/// Parse an override cell: {"a":..,"b":..,"c":..,"phosphorus":[[x,y,z],..],
/// "nitrogen":[..],"acid_protons":[..],"ammonium_multiplicity":4}.
UnitCell unit_cell_from_json(const nlohmann::json& j);
nlohmann::json to_json(const UnitCell& cell);
UnitCell load_unit_cell(const std::string& path);

/// Direction of the static field relative to the crystal axes, degrees.
struct Orientation {
  double theta_deg = 0.0;
  double phi_deg = 0.0;

  /// Unit vector (sin t cos p, sin t sin p, cos t) in (a,b,c) = (x,y,z).
  Vec3 field_direction() const;
  void validate() const;
};

struct Site {
  Vec3 position;  // Cartesian, Angstrom
  SiteKind kind;

  Species species() const { return species_of(kind); }
};

/// All sites of an extent^3 block of cells starting at the origin cell.
std::vector<Site> build_supercell(const UnitCell& cell, int extent);

struct ClusterCounts {
  std::size_t phosphorus = 0;  // partners, central spin excluded
  std::size_t nitrogen = 0;
  std::size_t protons = 0;     // ammonium + acid
  std::size_t ammonium_protons = 0;
  std::size_t acid_protons = 0;

  std::size_t phosphorus_total() const { return phosphorus + 1; }
};

/// Central 31P at the origin plus every site with 0 < d <= radius.
/// sites[0] is always the central spin.
struct SpinCluster {
  int origin_index = 0;
  double radius = 0.0;
  std::vector<Site> sites;

  const Site& center() const { return sites.front(); }
  std::size_t partner_count() const { return sites.size() - 1; }
  ClusterCounts counts() const;
};

SpinCluster build_cluster(const UnitCell& cell, int origin_index, double radius);

/// Secular dipolar coupling b = B/hbar (rad/s) between a central 31P and a
/// partner of `partner` species displaced by r_vec (Angstrom).
double coupling_constant(const Vec3& r_vec, Species partner, const Orientation& orientation);

/// Same, with the field given directly as a unit vector.
double coupling_constant(const Vec3& r_vec, Species partner, const Vec3& field_unit);

struct CouplingEntry {
  std::size_t partner_index;  // index into SpinCluster::sites
  SiteKind kind;
  Vec3 position;              // relative to the central spin
  double b;                   // rad/s
};

struct CouplingTable {
  std::vector<CouplingEntry> entries;
  Orientation orientation;
  int origin_index = 0;

  std::vector<double> values(SiteKind kind) const;
  std::vector<double> values(Species species) const;
};

CouplingTable coupling_table(const SpinCluster& cluster, const Orientation& orientation);

/// Comparison of sorted coupling multisets across the four 31P origins.
struct SymmetryReport {
  Orientation orientation;
  double radius = 0.0;
  double tolerance = 0.0;
  /// P, N and ammonium-H multisets identical across all four origins.
  bool sublattice_invariant = false;
  /// Acid-H multisets identical across all four origins.
  bool acid_invariant = false;
  /// agree[i][j]: acid-H multisets of origins i and j agree.
  std::array<std::array<bool, 4>, 4> acid_agree{};
  /// Largest scaled deviation seen per site kind, over all origin pairs.
  std::array<double, 4> max_deviation{};

  std::vector<std::pair<int, int>> acid_agreeing_pairs() const;
};

/// Multisets are compared element-wise after sorting, with absolute
/// tolerance `tolerance * max|b|`.
SymmetryReport symmetry_report(const UnitCell& cell, double radius, const Orientation& orientation,
                               double tolerance = 1e-9);

bool multisets_agree(std::vector<double> lhs, std::vector<double> rhs, double tolerance);

// CSV header: partner_index,species,x_A,y_A,z_A,b_rad_per_s
void write_coupling_csv(const CouplingTable& table, const SpinCluster& cluster,
                        const std::string& path);
nlohmann::json coupling_sidecar(const CouplingTable& table, const SpinCluster& cluster);
nlohmann::json to_json(const SymmetryReport& report);

}  // namespace adpdtc::lattice
