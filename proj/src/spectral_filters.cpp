#include "insitu/spectral_filters.hpp"

#include <algorithm>
#include <cmath>

namespace insitu {

std::size_t retention_radius(double keep_fraction, std::size_t n) {
  if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) {
    throw ValueError("keep_fraction must lie in [0, 1]");
  }
  return static_cast<std::size_t>(
      std::round(keep_fraction * static_cast<double>(n)));
}

bool in_corner_band(std::size_t k0, std::size_t k1, std::size_t ny0,
                    std::size_t ny1, std::size_t r0, std::size_t r1) noexcept {
  return std::min(k0, ny0 - k0) <= r0 && std::min(k1, ny1 - k1) <= r1;
}

Mesh bandpass(Mesh mesh, const BandpassConfig& config) {
  if (config.mesh_name != mesh.name()) {
    throw ConfigError("bandpass configured for mesh '" + config.mesh_name +
                      "' but received mesh '" + mesh.name() + "'");
  }
  const std::size_t ny0 = mesh.ny0();
  const std::size_t ny1 = mesh.ny1();
  const std::size_t r0 = retention_radius(config.keep_fraction, ny0);
  const std::size_t r1 = retention_radius(config.keep_fraction, ny1);

  auto spectrum = mesh.field(config.array_name).complex_values();
  std::vector<Complex> filtered(spectrum.begin(), spectrum.end());
  for (std::size_t k0 = 0; k0 < ny0; ++k0) {
    for (std::size_t k1 = 0; k1 < ny1; ++k1) {
      if (!in_corner_band(k0, k1, ny0, ny1, r0, r1)) {
        filtered[k0 * ny1 + k1] = Complex{};
      }
    }
  }
  mesh.replace_field(Field(config.array_name, ny0, ny1, std::move(filtered)));
  return mesh;
}

Field display_magnitude(const Field& field) {
  auto values = field.complex_values();
  std::vector<double> magnitude(values.size());
  std::transform(values.begin(), values.end(), magnitude.begin(),
                 [](const Complex& z) { return std::log1p(std::abs(z)); });
  return Field(field.name() + "_mag", field.ny0(), field.ny1(),
               std::move(magnitude));
}

} // namespace insitu
