#include "adpdtc/lattice.hpp"

#include "adpdtc/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace adpdtc::lattice {

Species species_of(SiteKind kind) {
  switch (kind) {
    case SiteKind::Phosphorus:
      return Species::P31;
    case SiteKind::Nitrogen:
      return Species::N14;
    case SiteKind::AmmoniumProton:
    case SiteKind::AcidProton:
      return Species::H1;
  }
  return Species::H1;
}

std::string_view to_string(SiteKind kind) {
  switch (kind) {
    case SiteKind::Phosphorus:
      return "phosphorus";
    case SiteKind::Nitrogen:
      return "nitrogen";
    case SiteKind::AmmoniumProton:
      return "ammonium_proton";
    case SiteKind::AcidProton:
      return "acid_proton";
  }
  return "?";
}

UnitCell UnitCell::adp() {
  UnitCell cell;
  cell.a = 7.4997;
  cell.b = 7.4997;
  cell.c = 7.5494;
  cell.phosphorus = {
      {0.0, 0.0, 0.0},
      {0.5, 0.5, 0.5},
      {0.5, 0.0, 0.25},
      {0.0, 0.5, 0.75},
  };
  for (const auto& p : cell.phosphorus) cell.nitrogen.push_back(p + Vec3{0.0, 0.0, 0.5});

  // Acid protons midway between PO4 oxygens, written in the same setting as
  // the P list above (a and b exchanged relative to the usual 8d listing, so
  // that each proton sits 2.37 A from two P neighbours).
  constexpr double x = 0.147;
  const std::array<Vec3, 4> acid{{
      {0.25, x, 0.125},
      {0.75, -x, 0.125},
      {x, 0.75, 0.875},
      {-x, 0.25, 0.875},
  }};
  for (const Vec3& centering : {Vec3{0.0, 0.0, 0.0}, Vec3{0.5, 0.5, 0.5}}) {
    for (const auto& h : acid) cell.acid_protons.push_back(h + centering);
  }
  cell.ammonium_multiplicity = 4;
  return cell;
}

void UnitCell::validate() const {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw InvalidArgument("unit cell lengths must be positive");
  if (phosphorus.empty()) throw InvalidArgument("unit cell needs at least one phosphorus site");
  if (ammonium_multiplicity < 0) throw InvalidArgument("ammonium multiplicity must be >= 0");
}

namespace {

std::vector<Vec3> read_sites(const nlohmann::json& j, const char* key) {
  std::vector<Vec3> out;
  if (!j.contains(key)) return out;
  for (const auto& row : j.at(key)) {
    if (!row.is_array() || row.size() != 3) {
      throw InvalidArgument(std::string("site lists must hold [x,y,z] triples: ") + key);
    }
    out.emplace_back(row[0].get<double>(), row[1].get<double>(), row[2].get<double>());
  }
  return out;
}

nlohmann::json write_sites(const std::vector<Vec3>& sites) {
  auto arr = nlohmann::json::array();
  for (const auto& s : sites) arr.push_back({s.x(), s.y(), s.z()});
  return arr;
}

}  // namespace

UnitCell unit_cell_from_json(const nlohmann::json& j) {
  UnitCell cell;
  try {
    cell.a = j.at("a").get<double>();
    cell.b = j.at("b").get<double>();
    cell.c = j.at("c").get<double>();
    cell.phosphorus = read_sites(j, "phosphorus");
    cell.nitrogen = read_sites(j, "nitrogen");
    cell.acid_protons = read_sites(j, "acid_protons");
    cell.ammonium_multiplicity = j.value("ammonium_multiplicity", 4);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed unit cell: ") + e.what());
  }
  cell.validate();
  return cell;
}

nlohmann::json to_json(const UnitCell& cell) {
  return {{"a", cell.a},
          {"b", cell.b},
          {"c", cell.c},
          {"phosphorus", write_sites(cell.phosphorus)},
          {"nitrogen", write_sites(cell.nitrogen)},
          {"acid_protons", write_sites(cell.acid_protons)},
          {"ammonium_multiplicity", cell.ammonium_multiplicity}};
}

UnitCell load_unit_cell(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open unit cell file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("unit cell file " + path + ": " + e.what());
  }
  return unit_cell_from_json(j);
}

Vec3 Orientation::field_direction() const {
  const double t = theta_deg * kPi / 180.0;
  const double p = phi_deg * kPi / 180.0;
  return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
}

void Orientation::validate() const {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
    throw InvalidArgument("orientation theta must lie in [0, 180] degrees");
  }
  if (!(phi_deg >= 0.0 && phi_deg < 360.0)) {
    throw InvalidArgument("orientation phi must lie in [0, 360) degrees");
  }
}

namespace {

// Sites of one cell translated by integer offset (i,j,k).
void append_cell(const UnitCell& cell, const Vec3& shift, std::vector<Site>& out) {
  for (const auto& f : cell.phosphorus) out.push_back({cell.to_cartesian(f + shift), SiteKind::Phosphorus});
  for (const auto& f : cell.nitrogen) {
    const Vec3 pos = cell.to_cartesian(f + shift);
    out.push_back({pos, SiteKind::Nitrogen});
    for (int m = 0; m < cell.ammonium_multiplicity; ++m) out.push_back({pos, SiteKind::AmmoniumProton});
  }
  for (const auto& f : cell.acid_protons) out.push_back({cell.to_cartesian(f + shift), SiteKind::AcidProton});
}

}  // namespace

std::vector<Site> build_supercell(const UnitCell& cell, int extent) {
  if (extent <= 0) throw InvalidArgument("supercell extent must be >= 1");
  cell.validate();
  std::vector<Site> out;
  for (int i = 0; i < extent; ++i)
    for (int j = 0; j < extent; ++j)
      for (int k = 0; k < extent; ++k) append_cell(cell, Vec3(i, j, k), out);
  return out;
}

ClusterCounts SpinCluster::counts() const {
  ClusterCounts c;
  for (std::size_t i = 1; i < sites.size(); ++i) {
    switch (sites[i].kind) {
      case SiteKind::Phosphorus:
        ++c.phosphorus;
        break;
      case SiteKind::Nitrogen:
        ++c.nitrogen;
        break;
      case SiteKind::AmmoniumProton:
        ++c.ammonium_protons;
        break;
      case SiteKind::AcidProton:
        ++c.acid_protons;
        break;
    }
  }
  c.protons = c.ammonium_protons + c.acid_protons;
  return c;
}

SpinCluster build_cluster(const UnitCell& cell, int origin_index, double radius) {
  cell.validate();
  if (!(radius > 0.0)) throw InvalidArgument("cluster radius must be positive");
  if (origin_index < 0 || origin_index >= static_cast<int>(cell.phosphorus.size())) {
    throw InvalidArgument("origin index out of range");
  }

  const Vec3 center = cell.to_cartesian(cell.phosphorus[origin_index]);
  // Fractional coordinates lie in [-1, 2) in practice, so one extra shell on
  // each side guarantees the ball is covered.
  const double shortest = std::min({cell.a, cell.b, cell.c});
  const int reach = static_cast<int>(std::ceil(radius / shortest)) + 2;

  // Tiny slack keeps sites sitting exactly on the sphere (up to rounding)
  // inside; the boundary rule is d <= R.
  const double r2 = radius * radius * (1.0 + 1e-12);
  constexpr double kCoincident = 1e-9;

  SpinCluster cluster;
  cluster.origin_index = origin_index;
  cluster.radius = radius;
  cluster.sites.push_back({Vec3::Zero(), SiteKind::Phosphorus});

  std::vector<Site> block;
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) {
      for (int k = -reach; k <= reach; ++k) {
        block.clear();
        append_cell(cell, Vec3(i, j, k), block);
        for (auto& s : block) {
          const Vec3 rel = s.position - center;
          const double d2 = rel.squaredNorm();
          if (d2 <= kCoincident * kCoincident || d2 > r2) continue;
          cluster.sites.push_back({rel, s.kind});
        }
      }
    }
  }

  // Deterministic order: by distance, then kind, then coordinates.
  std::stable_sort(cluster.sites.begin() + 1, cluster.sites.end(), [](const Site& l, const Site& r) {
    const double dl = l.position.squaredNorm();
    const double dr = r.position.squaredNorm();
    if (dl != dr) return dl < dr;
    if (l.kind != r.kind) return l.kind < r.kind;
    return std::lexicographical_compare(l.position.data(), l.position.data() + 3, r.position.data(),
                                        r.position.data() + 3);
  });
  return cluster;
}

double coupling_constant(const Vec3& r_vec, Species partner, const Vec3& field_unit) {
  const double r = r_vec.norm();
  if (!(r > 0.0)) throw InvalidArgument("internuclear vector must be non-zero");
  const double r_m = r * 1e-10;
  const double cos_theta = r_vec.dot(field_unit) / r;
  const double prefactor =
      kMu0Over4Pi * species_info(Species::P31).gamma * species_info(partner).gamma * kHbar /
      (r_m * r_m * r_m);
  return prefactor * (1.0 - 3.0 * cos_theta * cos_theta) / 2.0;
}

double coupling_constant(const Vec3& r_vec, Species partner, const Orientation& orientation) {
  return coupling_constant(r_vec, partner, orientation.field_direction());
}

std::vector<double> CouplingTable::values(SiteKind kind) const {
  std::vector<double> out;
  for (const auto& e : entries)
    if (e.kind == kind) out.push_back(e.b);
  return out;
}

std::vector<double> CouplingTable::values(Species species) const {
  std::vector<double> out;
  for (const auto& e : entries)
    if (species_of(e.kind) == species) out.push_back(e.b);
  return out;
}

CouplingTable coupling_table(const SpinCluster& cluster, const Orientation& orientation) {
  orientation.validate();
  const Vec3 field = orientation.field_direction();
  CouplingTable table;
  table.orientation = orientation;
  table.origin_index = cluster.origin_index;
  table.entries.reserve(cluster.partner_count());
  for (std::size_t i = 1; i < cluster.sites.size(); ++i) {
    const Site& s = cluster.sites[i];
    table.entries.push_back({i, s.kind, s.position, coupling_constant(s.position, s.species(), field)});
  }
  return table;
}

bool multisets_agree(std::vector<double> lhs, std::vector<double> rhs, double tolerance) {
  if (lhs.size() != rhs.size()) return false;
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  double scale = 0.0;
  for (double v : lhs) scale = std::max(scale, std::abs(v));
  for (double v : rhs) scale = std::max(scale, std::abs(v));
  const double atol = tolerance * scale;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (std::abs(lhs[i] - rhs[i]) > atol) return false;
  }
  return true;
}

namespace {

double multiset_deviation(std::vector<double> lhs, std::vector<double> rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  double scale = 0.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    scale = std::max({scale, std::abs(lhs[i]), std::abs(rhs[i])});
    dev = std::max(dev, std::abs(lhs[i] - rhs[i]));
  }
  return scale > 0.0 ? dev / scale : dev;
}

}  // namespace

std::vector<std::pair<int, int>> SymmetryReport::acid_agreeing_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (acid_agree[i][j]) out.emplace_back(i, j);
  return out;
}

SymmetryReport symmetry_report(const UnitCell& cell, double radius, const Orientation& orientation,
                               double tolerance) {
  if (cell.phosphorus.size() != 4) throw InvalidArgument("symmetry report expects four 31P origins");
  SymmetryReport report;
  report.orientation = orientation;
  report.radius = radius;
  report.tolerance = tolerance;

  std::array<CouplingTable, 4> tables;
  for (int o = 0; o < 4; ++o) tables[o] = coupling_table(build_cluster(cell, o, radius), orientation);

  report.sublattice_invariant = true;
  report.acid_invariant = true;
  for (std::size_t k = 0; k < kAllSiteKinds.size(); ++k) {
    const SiteKind kind = kAllSiteKinds[k];
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const auto lhs = tables[i].values(kind);
        const auto rhs = tables[j].values(kind);
        report.max_deviation[k] = std::max(report.max_deviation[k], multiset_deviation(lhs, rhs));
        const bool agree = multisets_agree(lhs, rhs, tolerance);
        if (kind == SiteKind::AcidProton) {
          report.acid_agree[i][j] = report.acid_agree[j][i] = agree;
          report.acid_invariant = report.acid_invariant && agree;
        } else {
          report.sublattice_invariant = report.sublattice_invariant && agree;
        }
      }
    }
  }
  for (int i = 0; i < 4; ++i) report.acid_agree[i][i] = true;
  return report;
}

}  // namespace adpdtc::lattice
