#include "insitu/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace insitu {

namespace {

// Uniform on [0, 1) from the top 53 bits of one 64-bit draw.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double resolve_amplitude(const Field& field, const GenConfig& config) {
  if (config.noise_amplitude) {
    return *config.noise_amplitude;
  }
  auto values = field.real_values();
  return 0.5 * *std::max_element(values.begin(), values.end());
}

} // namespace

void validate(const GenConfig& config) {
  if (config.ny0 == 0 || config.ny1 == 0) {
    throw DimensionError("datagen grid dimensions must be positive");
  }
  if (!(config.noise_fraction >= 0.0 && config.noise_fraction <= 1.0)) {
    throw ValueError("noise_fraction must lie in [0, 1]");
  }
  if (config.noise_amplitude &&
      !(*config.noise_amplitude >= 0.0 && std::isfinite(*config.noise_amplitude))) {
    throw ValueError("noise_amplitude must be finite and non-negative");
  }
  if (config.wavelength &&
      !(*config.wavelength > 0.0 && std::isfinite(*config.wavelength))) {
    throw ValueError("wavelength must be finite and positive");
  }
}

Field radial_field(const GenConfig& config) {
  validate(config);
  const double c0 = config.c0.value_or((static_cast<double>(config.ny0) - 1) / 2);
  const double c1 = config.c1.value_or((static_cast<double>(config.ny1) - 1) / 2);
  std::vector<double> values(config.ny0 * config.ny1);
  for (std::size_t i = 0; i < config.ny0; ++i) {
    for (std::size_t j = 0; j < config.ny1; ++j) {
      const double r = std::hypot(static_cast<double>(i) - c0,
                                  static_cast<double>(j) - c1);
      values[i * config.ny1 + j] =
          config.wavelength
              ? std::sin(2 * std::numbers::pi * r / *config.wavelength)
              : r;
    }
  }
  return Field(config.array_name, config.ny0, config.ny1, std::move(values));
}

Field add_noise(const Field& field, const GenConfig& config) {
  validate(config);
  const double amplitude = resolve_amplitude(field, config);
  std::mt19937_64 rng(config.seed);
  auto clean = field.real_values();
  std::vector<double> noisy(clean.begin(), clean.end());
  for (double& v : noisy) {
    // Both draws happen for every cell so the stream position never depends
    // on which cells were selected.
    const double select = unit_uniform(rng);
    const double sample = unit_uniform(rng);
    if (select < config.noise_fraction) {
      v += amplitude * (2.0 * sample - 1.0);
    }
  }
  return Field(field.name(), field.ny0(), field.ny1(), std::move(noisy));
}

Mesh generate_mesh(const GenConfig& config) {
  Mesh mesh(config.mesh_name, config.ny0, config.ny1);
  mesh.add_field(add_noise(radial_field(config), config));
  return mesh;
}

} // namespace insitu
