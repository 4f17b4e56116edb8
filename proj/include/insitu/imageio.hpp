#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "insitu/grid.hpp"

namespace insitu {

enum class ImageScaling {
  Linear,       ///< real field, min-max scaled
  LogMagnitude, ///< complex field rendered through display_magnitude
  RealPart,     ///< complex field, real parts min-max scaled
};

const char* to_string(ImageScaling scaling) noexcept;

struct ImageConfig {
  std::string mesh_name;
  std::string array_name;
  std::filesystem::path path;
  ImageScaling scaling = ImageScaling::Linear;
};

/// Maps values onto 0..255 by round(255 * (v - min) / (max - min)); all zero
/// when max == min.
std::vector<std::uint8_t> to_gray(std::span<const double> values);

/// Binary PGM: "P5\n<ny1> <ny0>\n255\n" then one byte per cell, top row first.
std::string encode_pgm(std::span<const std::uint8_t> pixels, std::size_t ny0,
                       std::size_t ny1);

/// Renders the field selected by `config` and writes it to config.path.
std::filesystem::path write_image(const Mesh& mesh, const ImageConfig& config);

/// Reads a binary 8-bit PGM into a real field (pixel values 0..maxval).
Field read_pgm(const std::filesystem::path& path, const std::string& name);

} // namespace insitu
