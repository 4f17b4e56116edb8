#include "insitu/grid.hpp"

#include <algorithm>
#include <cmath>

namespace insitu {

namespace {

void check_shape(const std::string& name, std::size_t ny0, std::size_t ny1,
                 std::size_t length) {
  if (name.empty()) {
    throw ValueError("field name must be non-empty");
  }
  if (ny0 == 0 || ny1 == 0) {
    throw DimensionError("field '" + name + "' has a zero dimension");
  }
  if (length != ny0 * ny1) {
    throw DimensionError("field '" + name + "' expects " +
                         std::to_string(ny0 * ny1) + " values, got " +
                         std::to_string(length));
  }
}

void check_finite(const std::string& name, std::span<const double> values) {
  auto bad = std::find_if(values.begin(), values.end(),
                          [](double v) { return !std::isfinite(v); });
  if (bad != values.end()) {
    throw ValueError("field '" + name + "' has a non-finite entry at index " +
                     std::to_string(bad - values.begin()));
  }
}

} // namespace

const char* to_string(FieldKind kind) noexcept {
  return kind == FieldKind::Real ? "real" : "complex";
}

Field::Field(std::string name, std::size_t ny0, std::size_t ny1,
             std::vector<double> values)
    : name_(std::move(name)), ny0_(ny0), ny1_(ny1) {
  check_shape(name_, ny0, ny1, values.size());
  check_finite(name_, values);
  values_ = std::move(values);
}

Field::Field(std::string name, std::size_t ny0, std::size_t ny1,
             std::vector<Complex> values)
    : name_(std::move(name)), ny0_(ny0), ny1_(ny1) {
  check_shape(name_, ny0, ny1, values.size());
  // std::complex<double> is layout-compatible with double[2].
  check_finite(name_, {reinterpret_cast<const double*>(values.data()),
                       2 * values.size()});
  values_ = std::move(values);
}

Field Field::zeros(std::string name, std::size_t ny0, std::size_t ny1,
                   FieldKind kind) {
  if (kind == FieldKind::Real) {
    return Field(std::move(name), ny0, ny1, std::vector<double>(ny0 * ny1));
  }
  return Field(std::move(name), ny0, ny1, std::vector<Complex>(ny0 * ny1));
}

FieldKind Field::kind() const noexcept {
  return values_.index() == 0 ? FieldKind::Real : FieldKind::Complex;
}

std::span<const double> Field::real_values() const {
  if (const auto* v = std::get_if<std::vector<double>>(&values_)) {
    return *v;
  }
  throw KindError("field '" + name_ + "' is complex, expected real");
}

std::span<const Complex> Field::complex_values() const {
  if (const auto* v = std::get_if<std::vector<Complex>>(&values_)) {
    return *v;
  }
  throw KindError("field '" + name_ + "' is real, expected complex");
}

Field Field::renamed(std::string name) const {
  Field copy = *this;
  if (name.empty()) {
    throw ValueError("field name must be non-empty");
  }
  copy.name_ = std::move(name);
  return copy;
}

Mesh::Mesh(std::string name, std::size_t ny0, std::size_t ny1)
    : name_(std::move(name)), ny0_(ny0), ny1_(ny1) {
  if (ny0 == 0 || ny1 == 0) {
    throw DimensionError("mesh '" + name_ + "' has a zero dimension");
  }
}

void Mesh::check_dims(const Field& field) const {
  if (field.ny0() != ny0_ || field.ny1() != ny1_) {
    throw DimensionError("field '" + field.name() + "' is " +
                         std::to_string(field.ny0()) + "x" +
                         std::to_string(field.ny1()) + " but mesh '" + name_ +
                         "' is " + std::to_string(ny0_) + "x" +
                         std::to_string(ny1_));
  }
}

void Mesh::add_field(Field field) {
  check_dims(field);
  if (fields_.contains(field.name())) {
    throw NameCollisionError("mesh '" + name_ + "' already has a field named '" +
                             field.name() + "'");
  }
  std::string key = field.name();
  fields_.emplace(std::move(key), std::move(field));
}

void Mesh::replace_field(Field field) {
  check_dims(field);
  auto it = fields_.find(field.name());
  if (it == fields_.end()) {
    throw MissingArrayError(name_, field.name());
  }
  it->second = std::move(field);
}

bool Mesh::has_field(const std::string& name) const noexcept {
  return fields_.contains(name);
}

const Field& Mesh::field(const std::string& name) const {
  auto it = fields_.find(name);
  if (it == fields_.end()) {
    throw MissingArrayError(name_, name);
  }
  return it->second;
}

Mesh make_mesh(std::string name, long long ny0, long long ny1) {
  if (ny0 < 1 || ny1 < 1) {
    throw DimensionError("mesh dimensions must be positive, got " +
                         std::to_string(ny0) + "x" + std::to_string(ny1));
  }
  return Mesh(std::move(name), static_cast<std::size_t>(ny0),
              static_cast<std::size_t>(ny1));
}

Mesh add_field(Mesh mesh, Field field) {
  mesh.add_field(std::move(field));
  return mesh;
}

const Field& get_field(const Mesh& mesh, const std::string& name) {
  return mesh.field(name);
}

Field to_complex(const Field& field) {
  auto real = field.real_values();
  std::vector<Complex> values(real.begin(), real.end());
  return Field(field.name(), field.ny0(), field.ny1(), std::move(values));
}

Field real_part(const Field& field) {
  auto values = field.complex_values();
  std::vector<double> real(values.size());
  std::transform(values.begin(), values.end(), real.begin(),
                 [](const Complex& z) { return z.real(); });
  return Field(field.name(), field.ny0(), field.ny1(), std::move(real));
}

Slab local_slab(std::size_t ny0, std::size_t ranks, std::size_t rank) {
  if (ranks == 0) {
    throw RankError("rank count must be at least 1");
  }
  if (rank >= ranks) {
    throw RankError("rank " + std::to_string(rank) + " out of range for " +
                    std::to_string(ranks) + " ranks");
  }
  const std::size_t base = ny0 / ranks;
  const std::size_t extra = ny0 % ranks;
  Slab slab;
  slab.local_n0 = base + (rank < extra ? 1 : 0);
  slab.local_0_start = rank * base + std::min(rank, extra);
  return slab;
}

} // namespace insitu
