#pragma once

#include <array>
#include <numbers>
#include <string_view>

namespace adpdtc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// CODATA 2018.
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kMu0Over4Pi = 1.00000000055e-7;   // T^2 m^3 / J

/// Static field at which the tabulated Larmor frequencies were quoted.
inline constexpr double kReferenceFieldTesla = 4.0;

enum class Species { P31, H1, N14 };

inline constexpr std::array<Species, 3> kAllSpecies{Species::P31, Species::H1, Species::N14};

struct SpinSpecies {
  Species id;
  std::string_view name;
  int twice_spin;          // 1 for spin-1/2, 2 for spin-1
  double larmor_mhz_at_4t;
  double gamma;            // rad s^-1 T^-1, derived from larmor_mhz_at_4t

  double spin() const { return 0.5 * twice_spin; }
  int multiplicity() const { return twice_spin + 1; }
  double larmor_hz(double field_tesla) const { return gamma * field_tesla / kTwoPi; }
};

const SpinSpecies& species_info(Species s);
std::string_view to_string(Species s);
Species species_from_string(std::string_view name);

}  // namespace adpdtc
