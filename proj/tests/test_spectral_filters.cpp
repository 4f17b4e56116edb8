#include <doctest.h>

#include <numbers>
#include <set>

#include "insitu/fft_endpoint.hpp"
#include "insitu/spectral_filters.hpp"
#include "test_support.hpp"

using namespace insitu;

namespace {

Mesh spectrum_mesh(std::size_t ny0, std::size_t ny1, std::vector<Complex> values) {
  Mesh mesh("mesh", ny0, ny1);
  mesh.add_field(Field("dataArray", ny0, ny1, std::move(values)));
  return mesh;
}

std::vector<Complex> filtered(const Mesh& mesh, double keep) {
  Mesh result = bandpass(mesh, {"mesh", "dataArray", keep});
  auto out = result.field("dataArray").complex_values();
  return {out.begin(), out.end()};
}

} // namespace

TEST_CASE("retention radius rounds halves away from zero") {
  CHECK(retention_radius(0.0075, 200) == 2);
  CHECK(retention_radius(0.0, 200) == 0);
  CHECK(retention_radius(1.0, 7) == 7);
  CHECK(retention_radius(0.25, 10) == 3); // 2.5
  CHECK_THROWS_AS(retention_radius(1.5, 10), ValueError);
  CHECK_THROWS_AS(retention_radius(-0.1, 10), ValueError);
}

TEST_CASE("bandpass at 0.75% keeps 25 of 40000 coefficients") {
  Mesh mesh = spectrum_mesh(200, 200, std::vector<Complex>(40000, Complex(1, 1)));
  auto out = filtered(mesh, 0.0075);
  std::set<std::size_t> rows, cols;
  std::size_t kept = 0;
  for (std::size_t k0 = 0; k0 < 200; ++k0) {
    for (std::size_t k1 = 0; k1 < 200; ++k1) {
      if (out[k0 * 200 + k1] != Complex{}) {
        ++kept;
        rows.insert(k0);
        cols.insert(k1);
      }
    }
  }
  CHECK(kept == 25);
  const std::set<std::size_t> corners{0, 1, 2, 198, 199};
  CHECK(rows == corners);
  CHECK(cols == corners);
}

TEST_CASE("bandpass extremes") {
  auto values = testing::random_complex(9 * 14, 4);
  Mesh mesh = spectrum_mesh(9, 14, values);
  CHECK(filtered(mesh, 1.0) == values);

  auto dc_only = filtered(mesh, 0.0);
  CHECK(dc_only[0] == values[0]);
  for (std::size_t i = 1; i < dc_only.size(); ++i) {
    CHECK(dc_only[i] == Complex{});
  }
}

TEST_CASE("bandpass errors") {
  Mesh real("mesh", 4, 4);
  real.add_field(Field::zeros("dataArray", 4, 4, FieldKind::Real));
  CHECK_THROWS_AS(bandpass(real, {"mesh", "dataArray", 0.1}), KindError);
  CHECK_THROWS_AS(bandpass(real, {"mesh", "absent", 0.1}), MissingArrayError);
}

TEST_CASE("bandpass properties") {
  const std::vector<double> fractions{0.0, 0.01, 0.05, 0.1, 0.2, 0.35, 0.5, 1.0};
  for (auto [ny0, ny1] : {std::pair<std::size_t, std::size_t>{1, 1}, {7, 10},
                          {16, 16}, {25, 9}}) {
    auto values = testing::random_complex(ny0 * ny1, ny0 + ny1);
    Mesh mesh = spectrum_mesh(ny0, ny1, values);
    double energy_in = 0.0;
    for (const auto& z : values) {
      energy_in += std::norm(z);
    }
    std::vector<Complex> previous;
    for (double f : fractions) {
      auto once = filtered(mesh, f);
      // idempotent
      CHECK(filtered(spectrum_mesh(ny0, ny1, once), f) == once);
      // energy never grows
      double energy = 0.0;
      for (const auto& z : once) {
        energy += std::norm(z);
      }
      CHECK(energy <= energy_in);
      // kept set is monotone in the fraction
      if (!previous.empty()) {
        for (std::size_t i = 0; i < once.size(); ++i) {
          if (previous[i] != Complex{}) {
            CHECK(once[i] != Complex{});
          }
        }
      }
      previous = once;
      // kept set is symmetric under k -> -k
      const std::size_t r0 = retention_radius(f, ny0), r1 = retention_radius(f, ny1);
      for (std::size_t k0 = 0; k0 < ny0; ++k0) {
        for (std::size_t k1 = 0; k1 < ny1; ++k1) {
          CHECK(in_corner_band(k0, k1, ny0, ny1, r0, r1) ==
                in_corner_band((ny0 - k0) % ny0, (ny1 - k1) % ny1, ny0, ny1, r0, r1));
        }
      }
    }
  }
}

TEST_CASE("filtering a real-origin spectrum keeps the inverse real") {
  const std::size_t ny0 = 30, ny1 = 24;
  auto real = testing::random_real(ny0 * ny1, 77);
  Mesh mesh("mesh", ny0, ny1);
  mesh.add_field(Field("dataArray", ny0, ny1, real));
  mesh = fft_execute(mesh, {"mesh", "dataArray", Direction::Forward, 2, std::nullopt});
  mesh = bandpass(mesh, {"mesh", "dataArray", 0.2});
  mesh = fft_execute(mesh, {"mesh", "dataArray", Direction::Backward, 3, std::nullopt});
  double max_re = 0.0, max_im = 0.0;
  for (const auto& z : mesh.field("dataArray").complex_values()) {
    max_re = std::max(max_re, std::abs(z.real()));
    max_im = std::max(max_im, std::abs(z.imag()));
  }
  CHECK(max_re > 0.0);
  CHECK(max_im <= 1e-9 * max_re);
}

TEST_CASE("display_magnitude") {
  Field zero = Field::zeros("s", 3, 2, FieldKind::Complex);
  Field mag = display_magnitude(zero);
  CHECK(mag.name() == "s_mag");
  CHECK(mag.kind() == FieldKind::Real);
  for (double v : mag.real_values()) {
    CHECK(v == 0.0);
  }

  const double e2 = std::exp(2.0);
  Field single("s", 1, 1, std::vector<Complex>{{e2, 0.0}});
  CHECK(display_magnitude(single).real_values()[0] ==
        doctest::Approx(2.1269280110429722).epsilon(1e-14));

  auto values = testing::random_complex(20, 3);
  std::vector<Complex> conjugated(values.size());
  std::transform(values.begin(), values.end(), conjugated.begin(),
                 [](Complex z) { return std::conj(z); });
  CHECK(display_magnitude(Field("s", 4, 5, values)).real_values()[7] ==
        display_magnitude(Field("s", 4, 5, conjugated)).real_values()[7]);

  CHECK_THROWS_AS(display_magnitude(Field::zeros("r", 1, 1, FieldKind::Real)), KindError);
}
