#pragma once

#include <cstddef>
#include <string>

#include "insitu/grid.hpp"

namespace insitu {

struct BandpassConfig {
  std::string mesh_name;
  std::string array_name;
  /// Per-axis retention radius as a fraction of the axis length.
  double keep_fraction = 0.0075;
};

/// round(keep_fraction * n), halves rounded away from zero.
std::size_t retention_radius(double keep_fraction, std::size_t n);

/**
 * Whether coefficient (k0, k1) of an unshifted ny0 x ny1 spectrum lies within
 * radius r0 (r1) of a corner along both axes.
 */
bool in_corner_band(std::size_t k0, std::size_t k1, std::size_t ny0,
                    std::size_t ny1, std::size_t r0, std::size_t r1) noexcept;

/**
 * Corner-retention filter on an unshifted spectrum. Low frequencies sit at
 * the four corners; every coefficient outside the per-axis radius
 * round(keep_fraction * n) is zeroed. DC always survives.
 */
Mesh bandpass(Mesh mesh, const BandpassConfig& config);

/// log(1 + |z|) of each value; the result is named `<name>_mag`.
Field display_magnitude(const Field& field);

} // namespace insitu
