#include "adpdtc/constants.hpp"

#include "adpdtc/error.hpp"

#include <string>

namespace adpdtc {

namespace {

constexpr double gamma_from_larmor(double mhz) {
  return kTwoPi * mhz * 1.0e6 / kReferenceFieldTesla;
}

constexpr std::array<SpinSpecies, 3> kTable{{
    {Species::P31, "P31", 1, 68.940, gamma_from_larmor(68.940)},
    {Species::H1, "H1", 1, 170.304, gamma_from_larmor(170.304)},
    {Species::N14, "N14", 2, 12.307, gamma_from_larmor(12.307)},
}};

}  // namespace

const SpinSpecies& species_info(Species s) {
  return kTable[static_cast<std::size_t>(s)];
}

std::string_view to_string(Species s) { return species_info(s).name; }

Species species_from_string(std::string_view name) {
  for (const auto& entry : kTable) {
    if (entry.name == name) return entry.id;
  }
  if (name == "P") return Species::P31;
  if (name == "H") return Species::H1;
  if (name == "N") return Species::N14;
  throw InvalidArgument("unknown species '" + std::string(name) + "'");
}

}  // namespace adpdtc
