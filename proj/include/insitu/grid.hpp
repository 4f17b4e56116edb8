#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "insitu/errors.hpp"

namespace insitu {

using Complex = std::complex<double>;

enum class FieldKind { Real, Complex };

const char* to_string(FieldKind kind) noexcept;

/**
 * A named 2D structured-grid array, row-major with index i * ny1 + j.
 *
 * Fields hold either real scalars or complex values. Construction checks
 * the length against the grid dimensions and rejects non-finite entries,
 * so every Field in existence satisfies those invariants.
 */
class Field {
public:
  Field(std::string name, std::size_t ny0, std::size_t ny1,
        std::vector<double> values);
  Field(std::string name, std::size_t ny0, std::size_t ny1,
        std::vector<Complex> values);

  /// Zero-filled field of the requested kind.
  static Field zeros(std::string name, std::size_t ny0, std::size_t ny1,
                     FieldKind kind);

  const std::string& name() const noexcept { return name_; }
  std::size_t ny0() const noexcept { return ny0_; }
  std::size_t ny1() const noexcept { return ny1_; }
  std::size_t size() const noexcept { return ny0_ * ny1_; }
  FieldKind kind() const noexcept;

  /// Throws KindError when the field is complex.
  std::span<const double> real_values() const;
  /// Throws KindError when the field is real.
  std::span<const Complex> complex_values() const;

  /// Returns a copy carrying a different name.
  Field renamed(std::string name) const;

  friend bool operator==(const Field&, const Field&) = default;

private:
  std::string name_;
  std::size_t ny0_;
  std::size_t ny1_;
  std::variant<std::vector<double>, std::vector<Complex>> values_;
};

/// Contiguous block of global rows owned by one rank.
struct Slab {
  std::size_t local_n0 = 0;
  std::size_t local_0_start = 0;

  friend bool operator==(const Slab&, const Slab&) = default;
};

/**
 * Single-block structured mesh: grid dimensions plus named fields that all
 * share those dimensions. This is the object passed between pipeline stages.
 */
class Mesh {
public:
  Mesh(std::string name, std::size_t ny0, std::size_t ny1);

  const std::string& name() const noexcept { return name_; }
  std::size_t ny0() const noexcept { return ny0_; }
  std::size_t ny1() const noexcept { return ny1_; }

  void add_field(Field field);
  /// Replaces an existing field of the same name; the field must exist.
  void replace_field(Field field);

  bool has_field(const std::string& name) const noexcept;
  const Field& field(const std::string& name) const;
  const std::map<std::string, Field>& fields() const noexcept { return fields_; }

  friend bool operator==(const Mesh&, const Mesh&) = default;

private:
  void check_dims(const Field& field) const;

  std::string name_;
  std::size_t ny0_;
  std::size_t ny1_;
  std::map<std::string, Field> fields_;
};

Mesh make_mesh(std::string name, long long ny0, long long ny1);
Mesh add_field(Mesh mesh, Field field);
const Field& get_field(const Mesh& mesh, const std::string& name);

/// Promotes a real field to complex with zero imaginary parts.
Field to_complex(const Field& field);

/// Real parts of a complex field.
Field real_part(const Field& field);

/**
 * Block row distribution of ny0 rows across `ranks`: the first ny0 % ranks
 * ranks get one extra row.
 */
Slab local_slab(std::size_t ny0, std::size_t ranks, std::size_t rank);

} // namespace insitu
