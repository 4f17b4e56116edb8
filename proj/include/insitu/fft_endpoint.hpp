#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "insitu/fft.hpp"
#include "insitu/grid.hpp"

namespace insitu {

struct FftConfig {
  std::string mesh_name;
  std::string array_name;
  Direction direction = Direction::Forward;
  std::size_t ranks = 1;
  /// Downstream configuration file chained after this stage (`python_xml`).
  std::optional<std::string> downstream_config;
};

/**
 * Slab-decomposed 2D transform over `ranks` in-process workers.
 *
 * Rows are scattered by local_slab, each rank transforms its rows, a global
 * transpose hands every rank a slab of columns, those are transformed, and a
 * second transpose restores the original layout before the gather. The
 * result matches the serial plan for every rank count.
 */
std::vector<Complex> distributed_fft_2d(std::span<const Complex> data,
                                        std::size_t ny0, std::size_t ny1,
                                        Direction direction, std::size_t ranks);

/**
 * Transforms `config.array_name` of `mesh` and stores the complex result
 * under the same name. Real fields are promoted to complex first; every other
 * field passes through untouched.
 */
Mesh fft_execute(Mesh mesh, const FftConfig& config);

} // namespace insitu
