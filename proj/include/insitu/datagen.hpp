#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "insitu/grid.hpp"

namespace insitu {

/**
 * Synthetic "simulation" settings: a radiating distance field plus sparse
 * additive white noise.
 *
 * Randomness comes from std::mt19937_64 seeded with `seed`. Its output
 * sequence is fixed by the C++ standard, and uniforms are formed from the top
 * 53 bits of each draw by hand, so a given seed yields the same field on every
 * platform.
 */
struct GenConfig {
  std::string mesh_name = "mesh";
  std::string array_name = "dataArray";
  std::size_t ny0 = 200;
  std::size_t ny1 = 200;
  /// Defaults to the grid centre ((ny0 - 1) / 2, (ny1 - 1) / 2).
  std::optional<double> c0;
  std::optional<double> c1;
  double noise_fraction = 0.5;
  /// Defaults to half the maximum of the clean field.
  std::optional<double> noise_amplitude;
  std::uint64_t seed = 42;
  /// When set, values are mapped through sin(2*pi*v / wavelength).
  std::optional<double> wavelength;
};

/// Throws ValueError / DimensionError for out-of-domain settings.
void validate(const GenConfig& config);

/// sqrt((i - c0)^2 + (j - c1)^2) at every grid point (i, j).
Field radial_field(const GenConfig& config);

/**
 * Each cell is selected independently with probability noise_fraction; a
 * selected cell gets a uniform sample from [-A, A] added to it.
 */
Field add_noise(const Field& field, const GenConfig& config);

/// Mesh holding the noisy field under config.array_name.
Mesh generate_mesh(const GenConfig& config);

} // namespace insitu
