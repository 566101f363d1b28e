#include "adpdtc/error.hpp"
#include "adpdtc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace adpdtc::quantum {

std::size_t SpinSystem::add_spin(Species species, const lattice::Vec3& position) {
  spins_.push_back({species, species_info(species).twice_spin, position});
  offsets_.push_back(0.0);
  return spins_.size() - 1;
}

void SpinSystem::set_coupling(std::size_t i, std::size_t j, double b) {
  if (i >= spins_.size() || j >= spins_.size()) throw InvalidArgument("coupling index out of range");
  if (i == j) throw InvalidArgument("a spin cannot couple to itself");
  if (!std::isfinite(b)) throw InvalidArgument("coupling must be finite");
  if (i > j) std::swap(i, j);
  for (auto& c : couplings_) {
    if (c.i == i && c.j == j) {
      c.b = b;
      return;
    }
  }
  couplings_.push_back({i, j, b});
}

void SpinSystem::set_offset(std::size_t i, double omega) {
  if (i >= spins_.size()) throw InvalidArgument("offset index out of range");
  if (!std::isfinite(omega)) throw InvalidArgument("offset must be finite");
  offsets_[i] = omega;
}

CouplingClass SpinSystem::coupling_class(std::size_t i, std::size_t j) const {
  return is_phosphorus(i) && is_phosphorus(j) ? CouplingClass::Homonuclear : CouplingClass::Heteronuclear;
}

std::vector<std::size_t> SpinSystem::phosphorus_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < spins_.size(); ++i)
    if (is_phosphorus(i)) out.push_back(i);
  return out;
}

std::size_t SpinSystem::dimension() const {
  std::size_t d = 1;
  for (const auto& s : spins_) {
    const std::size_t m = static_cast<std::size_t>(s.twice_spin + 1);
    if (d > std::numeric_limits<std::size_t>::max() / m) return std::numeric_limits<std::size_t>::max();
    d *= m;
  }
  return d;
}

void SpinSystem::check_dimension(std::size_t cap) const {
  if (dimension() > cap) {
    throw DimensionOverflow("Hilbert-space dimension " + std::to_string(dimension()) + " exceeds cap " +
                            std::to_string(cap));
  }
}

SpinSystem cluster_system(const lattice::UnitCell& cell, const lattice::Orientation& orientation,
                          const ClusterSpec& spec) {
  using lattice::SiteKind;
  if (spec.phosphorus_neighbors < 0 || spec.protons < 0 || spec.nitrogens < 0) {
    throw InvalidArgument("cluster sizes must be >= 0");
  }
  orientation.validate();
  const auto cluster = lattice::build_cluster(cell, spec.origin_index, spec.search_radius);
  const auto table = lattice::coupling_table(cluster, orientation);

  auto strongest = [&](auto match, int k) {
    std::vector<std::size_t> idx;
    for (std::size_t e = 0; e < table.entries.size(); ++e)
      if (match(table.entries[e].kind)) idx.push_back(e);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(table.entries[a].b) > std::abs(table.entries[b].b);
    });
    if (static_cast<int>(idx.size()) < k) throw InvalidArgument("search radius too small for requested cluster");
    idx.resize(static_cast<std::size_t>(k));
    return idx;
  };

  SpinSystem sys;
  sys.add_spin(Species::P31, lattice::Vec3::Zero());
  for (auto e : strongest([](SiteKind k) { return k == SiteKind::Phosphorus; }, spec.phosphorus_neighbors)) {
    sys.add_spin(Species::P31, table.entries[e].position);
  }
  for (auto e : strongest([](SiteKind k) { return k == SiteKind::AmmoniumProton || k == SiteKind::AcidProton; },
                          spec.protons)) {
    sys.add_spin(Species::H1, table.entries[e].position);
  }
  for (auto e : strongest([](SiteKind k) { return k == SiteKind::Nitrogen; }, spec.nitrogens)) {
    sys.add_spin(Species::N14, table.entries[e].position);
  }

  const lattice::Vec3 field = orientation.field_direction();
  const auto& spins = sys.spins();
  for (std::size_t i = 0; i < spins.size(); ++i) {
    for (std::size_t j = i + 1; j < spins.size(); ++j) {
      const bool pi = spins[i].species == Species::P31;
      const bool pj = spins[j].species == Species::P31;
      if (!pi && !pj) continue;  // partner-partner terms commute with all 31P dynamics
      const std::size_t p = pi ? i : j;
      const std::size_t q = pi ? j : i;
      const lattice::Vec3 r = spins[q].position - spins[p].position;
      if (r.norm() < 1e-9) continue;
      sys.set_coupling(i, j, lattice::coupling_constant(r, spins[q].species, field));
    }
  }
  return sys;
}

}  // namespace adpdtc::quantum
