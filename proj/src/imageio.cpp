#include "insitu/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "insitu/spectral_filters.hpp"

namespace insitu {

const char* to_string(ImageScaling scaling) noexcept {
  switch (scaling) {
  case ImageScaling::Linear:
    return "linear";
  case ImageScaling::LogMagnitude:
    return "log_magnitude";
  case ImageScaling::RealPart:
    return "real_part";
  }
  return "unknown";
}

std::vector<std::uint8_t> to_gray(std::span<const double> values) {
  std::vector<std::uint8_t> pixels(values.size(), 0);
  if (values.empty()) {
    return pixels;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - min;
  if (range <= 0.0) {
    return pixels;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double level = std::round(255.0 * (values[i] - min) / range);
    pixels[i] = static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
  }
  return pixels;
}

std::string encode_pgm(std::span<const std::uint8_t> pixels, std::size_t ny0,
                       std::size_t ny1) {
  if (pixels.size() != ny0 * ny1) {
    throw DimensionError("pixel buffer does not match image dimensions");
  }
  std::string out = "P5\n" + std::to_string(ny1) + " " + std::to_string(ny0) +
                    "\n255\n";
  out.append(pixels.begin(), pixels.end());
  return out;
}

std::filesystem::path write_image(const Mesh& mesh, const ImageConfig& config) {
  if (config.path.empty()) {
    throw ConfigError("image: output path must be non-empty");
  }
  if (config.mesh_name != mesh.name()) {
    throw ConfigError("image configured for mesh '" + config.mesh_name +
                      "' but received mesh '" + mesh.name() + "'");
  }
  const Field& field = mesh.field(config.array_name);
  std::vector<std::uint8_t> pixels;
  switch (config.scaling) {
  case ImageScaling::Linear:
    pixels = to_gray(field.real_values());
    break;
  case ImageScaling::LogMagnitude:
    pixels = to_gray(display_magnitude(field).real_values());
    break;
  case ImageScaling::RealPart:
    pixels = to_gray(real_part(field).real_values());
    break;
  }
  const std::string bytes = encode_pgm(pixels, field.ny0(), field.ny1());

  std::ofstream out(config.path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + config.path.string() + "' for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("failed writing '" + config.path.string() + "'");
  }
  return config.path;
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) {
        return token;
      }
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

std::size_t header_number(std::istream& in, const std::filesystem::path& path) {
  const std::string token = header_token(in);
  if (token.empty() ||
      !std::all_of(token.begin(), token.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw FileError("'" + path.string() + "': malformed PGM header");
  }
  return std::stoul(token);
}

} // namespace

Field read_pgm(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError("cannot open '" + path.string() + "'");
  }
  if (header_token(in) != "P5") {
    throw FileError("'" + path.string() + "' is not a binary PGM (P5)");
  }
  const std::size_t width = header_number(in, path);
  const std::size_t height = header_number(in, path);
  const std::size_t maxval = header_number(in, path);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 255) {
    throw FileError("'" + path.string() + "': unsupported PGM dimensions or depth");
  }
  std::vector<char> raw(width * height);
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw FileError("'" + path.string() + "': truncated PGM payload");
  }
  std::vector<double> values(raw.size());
  std::transform(raw.begin(), raw.end(), values.begin(), [](char c) {
    return static_cast<double>(static_cast<unsigned char>(c));
  });
  return Field(name, height, width, std::move(values));
}

} // namespace insitu
