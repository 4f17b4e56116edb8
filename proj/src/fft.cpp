#include "insitu/fft.hpp"

#include <algorithm>
#include <array>
#include <numbers>

namespace insitu {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Radices handled by the Stockham passes. Lengths with a larger prime factor
// go through Bluestein.
constexpr std::size_t kMaxRadix = 13;

double sign_of(Direction direction) {
  return direction == Direction::Forward ? -1.0 : 1.0;
}

/// exp(sign * 2*pi*i * k / n) with k reduced modulo n first.
Complex root_of_unity(std::size_t k, std::size_t n, double sign) {
  k %= n;
  return std::polar(1.0, sign * kTwoPi * static_cast<double>(k) /
                             static_cast<double>(n));
}

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> factors;
  while (n % 4 == 0) {
    factors.push_back(4);
    n /= 4;
  }
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      factors.push_back(p);
      n /= p;
    }
  }
  if (n > 1) {
    factors.push_back(n);
  }
  return factors;
}

} // namespace

const char* to_string(Direction direction) noexcept {
  return direction == Direction::Forward ? "forward" : "backward";
}

namespace detail {

/// Unnormalized 1D transform of one fixed length.
class Kernel {
public:
  Kernel(std::size_t n, Direction direction) : n_(n), sign_(sign_of(direction)) {
    auto factors = factorize(n);
    if (!factors.empty() && factors.back() > kMaxRadix) {
      init_bluestein();
    } else {
      init_stockham(factors);
    }
  }

  std::size_t size() const noexcept { return n_; }

  std::size_t scratch_size() const noexcept {
    if (inner_forward_) {
      return 2 * inner_forward_->size();
    }
    return stages_.empty() ? 0 : n_;
  }

  void transform(std::span<Complex> data, std::span<Complex> scratch) const {
    if (inner_forward_) {
      bluestein(data, scratch);
    } else {
      stockham(data, scratch);
    }
  }

private:
  struct Stage {
    std::size_t radix;
    std::size_t length; // sub-transform length entering this pass
    std::size_t stride;
    std::vector<Complex> twiddles; // [p * radix + u] = w_length^(p*u)
    std::vector<Complex> roots;    // [k] = w_radix^k
  };

  void init_stockham(const std::vector<std::size_t>& factors) {
    std::size_t length = n_;
    std::size_t stride = 1;
    for (std::size_t radix : factors) {
      Stage stage{radix, length, stride, {}, {}};
      const std::size_t m = length / radix;
      stage.twiddles.resize(m * radix);
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t u = 0; u < radix; ++u) {
          stage.twiddles[p * radix + u] = root_of_unity(p * u, length, sign_);
        }
      }
      stage.roots.resize(radix);
      for (std::size_t k = 0; k < radix; ++k) {
        stage.roots[k] = root_of_unity(k, radix, sign_);
      }
      stages_.push_back(std::move(stage));
      length = m;
      stride *= radix;
    }
  }

  void init_bluestein() {
    std::size_t padded = 1;
    while (padded < 2 * n_ - 1) {
      padded <<= 1;
    }
    // chirp[k] = exp(sign * pi*i * k^2 / n); k^2 is reduced modulo 2n.
    chirp_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      chirp_[k] = root_of_unity((k * k) % (2 * n_), 2 * n_, sign_);
    }
    std::vector<Complex> filter(padded);
    filter[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      filter[k] = filter[padded - k] = std::conj(chirp_[k]);
    }
    inner_forward_ = std::make_unique<Kernel>(padded, Direction::Forward);
    inner_backward_ = std::make_unique<Kernel>(padded, Direction::Backward);
    std::vector<Complex> scratch(inner_forward_->scratch_size());
    inner_forward_->transform(filter, scratch);
    const double inv = 1.0 / static_cast<double>(padded);
    for (auto& z : filter) {
      z *= inv;
    }
    filter_spectrum_ = std::move(filter);
  }

  void stockham(std::span<Complex> data, std::span<Complex> scratch) const {
    if (stages_.empty()) {
      return;
    }
    Complex* src = data.data();
    Complex* dst = scratch.data();
    for (const Stage& stage : stages_) {
      switch (stage.radix) {
      case 2:
        pass_radix2(stage, src, dst);
        break;
      case 4:
        pass_radix4(stage, src, dst);
        break;
      default:
        pass_generic(stage, src, dst);
        break;
      }
      std::swap(src, dst);
    }
    if (src != data.data()) {
      std::copy_n(src, n_, data.data());
    }
  }

  static void pass_radix2(const Stage& stage, const Complex* x, Complex* y) {
    const std::size_t m = stage.length / 2;
    const std::size_t s = stage.stride;
    for (std::size_t p = 0; p < m; ++p) {
      const Complex w = stage.twiddles[p * 2 + 1];
      for (std::size_t q = 0; q < s; ++q) {
        const Complex a = x[q + s * p];
        const Complex b = x[q + s * (p + m)];
        y[q + s * (2 * p)] = a + b;
        y[q + s * (2 * p + 1)] = (a - b) * w;
      }
    }
  }

  void pass_radix4(const Stage& stage, const Complex* x, Complex* y) const {
    const std::size_t m = stage.length / 4;
    const std::size_t s = stage.stride;
    for (std::size_t p = 0; p < m; ++p) {
      const Complex w1 = stage.twiddles[p * 4 + 1];
      const Complex w2 = stage.twiddles[p * 4 + 2];
      const Complex w3 = stage.twiddles[p * 4 + 3];
      for (std::size_t q = 0; q < s; ++q) {
        const Complex a0 = x[q + s * p];
        const Complex a1 = x[q + s * (p + m)];
        const Complex a2 = x[q + s * (p + 2 * m)];
        const Complex a3 = x[q + s * (p + 3 * m)];
        const Complex sum02 = a0 + a2;
        const Complex dif02 = a0 - a2;
        const Complex sum13 = a1 + a3;
        const Complex d13 = a1 - a3;
        // d13 times w_4 = sign * i
        const Complex rot(-sign_ * d13.imag(), sign_ * d13.real());
        Complex* out = y + q + s * (4 * p);
        out[0] = sum02 + sum13;
        out[s] = (dif02 + rot) * w1;
        out[2 * s] = (sum02 - sum13) * w2;
        out[3 * s] = (dif02 - rot) * w3;
      }
    }
  }

  static void pass_generic(const Stage& stage, const Complex* x, Complex* y) {
    const std::size_t r = stage.radix;
    const std::size_t m = stage.length / r;
    const std::size_t s = stage.stride;
    std::array<Complex, kMaxRadix> a;
    for (std::size_t p = 0; p < m; ++p) {
      const Complex* tw = stage.twiddles.data() + p * r;
      for (std::size_t q = 0; q < s; ++q) {
        for (std::size_t t = 0; t < r; ++t) {
          a[t] = x[q + s * (p + t * m)];
        }
        for (std::size_t u = 0; u < r; ++u) {
          Complex acc = a[0];
          std::size_t k = 0;
          for (std::size_t t = 1; t < r; ++t) {
            k += u;
            if (k >= r) {
              k -= r;
            }
            acc += a[t] * stage.roots[k];
          }
          y[q + s * (r * p + u)] = acc * tw[u];
        }
      }
    }
  }

  void bluestein(std::span<Complex> data, std::span<Complex> scratch) const {
    const std::size_t padded = inner_forward_->size();
    std::span<Complex> work = scratch.first(padded);
    std::span<Complex> inner_scratch = scratch.subspan(padded, padded);
    for (std::size_t k = 0; k < n_; ++k) {
      work[k] = data[k] * chirp_[k];
    }
    std::fill(work.begin() + static_cast<std::ptrdiff_t>(n_), work.end(),
              Complex{});
    inner_forward_->transform(work, inner_scratch);
    for (std::size_t k = 0; k < padded; ++k) {
      work[k] *= filter_spectrum_[k];
    }
    inner_backward_->transform(work, inner_scratch);
    for (std::size_t k = 0; k < n_; ++k) {
      data[k] = work[k] * chirp_[k];
    }
  }

  std::size_t n_;
  double sign_;
  std::vector<Stage> stages_;

  std::vector<Complex> chirp_;
  std::vector<Complex> filter_spectrum_; // pre-divided by the padded length
  std::unique_ptr<Kernel> inner_forward_;
  std::unique_ptr<Kernel> inner_backward_;
};

} // namespace detail

std::vector<Complex> dft_naive(std::span<const Complex> values,
                               Direction direction) {
  const std::size_t n = values.size();
  if (n == 0) {
    throw DimensionError("dft_naive: empty input");
  }
  const double sign = sign_of(direction);
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) {
      acc += values[j] * root_of_unity((k * j) % n, n, sign);
    }
    out[k] = acc;
  }
  return out;
}

std::vector<Complex> fft_1d(std::span<const Complex> values,
                            Direction direction) {
  if (values.empty()) {
    throw DimensionError("fft_1d: empty input");
  }
  detail::Kernel kernel(values.size(), direction);
  std::vector<Complex> out(values.begin(), values.end());
  std::vector<Complex> scratch(kernel.scratch_size());
  kernel.transform(out, scratch);
  return out;
}

Plan::Plan(std::size_t ny0, std::size_t ny1, Direction direction)
    : ny0_(ny0), ny1_(ny1), direction_(direction) {
  if (ny0 == 0 || ny1 == 0) {
    throw DimensionError("plan dimensions must be positive");
  }
  rows_ = std::make_shared<const detail::Kernel>(ny1, direction);
  if (ny0 == ny1) {
    cols_ = rows_;
  } else if (ny0 > 1) {
    cols_ = std::make_shared<const detail::Kernel>(ny0, direction);
  }
}

std::size_t Plan::workspace_size() const {
  if (!valid()) {
    throw UsageError("plan has been destroyed");
  }
  std::size_t need = rows_->scratch_size();
  if (ny0_ > 1) {
    need = std::max(need, ny0_ + cols_->scratch_size());
  }
  return need;
}

void Plan::execute(std::span<Complex> data) const {
  thread_local std::vector<Complex> workspace;
  const std::size_t need = workspace_size();
  if (workspace.size() < need) {
    workspace.resize(need);
  }
  execute(data, workspace);
}

void Plan::execute(std::span<Complex> data, std::span<Complex> workspace) const {
  if (!valid()) {
    throw UsageError("plan has been destroyed");
  }
  if (data.size() != size()) {
    throw DimensionError("plan expects " + std::to_string(size()) +
                         " values, got " + std::to_string(data.size()));
  }
  if (workspace.size() < workspace_size()) {
    throw DimensionError("workspace too small for plan");
  }
  for (std::size_t i = 0; i < ny0_; ++i) {
    rows_->transform(data.subspan(i * ny1_, ny1_), workspace);
  }
  if (ny0_ == 1) {
    return;
  }
  std::span<Complex> column = workspace.first(ny0_);
  std::span<Complex> scratch = workspace.subspan(ny0_);
  for (std::size_t j = 0; j < ny1_; ++j) {
    for (std::size_t i = 0; i < ny0_; ++i) {
      column[i] = data[i * ny1_ + j];
    }
    cols_->transform(column, scratch);
    for (std::size_t i = 0; i < ny0_; ++i) {
      data[i * ny1_ + j] = column[i];
    }
  }
}

void Plan::destroy() {
  if (!valid()) {
    throw UsageError("plan destroyed twice");
  }
  rows_.reset();
  cols_.reset();
}

Plan plan_dft_1d(long long n, Direction direction) {
  if (n < 1) {
    throw DimensionError("1D plan length must be positive");
  }
  return Plan(1, static_cast<std::size_t>(n), direction);
}

Plan plan_dft_2d(long long ny0, long long ny1, Direction direction) {
  if (ny0 < 1 || ny1 < 1) {
    throw DimensionError("plan dimensions must be positive, got " +
                         std::to_string(ny0) + "x" + std::to_string(ny1));
  }
  return Plan(static_cast<std::size_t>(ny0), static_cast<std::size_t>(ny1),
              direction);
}

void execute(const Plan& plan, std::span<Complex> data) { plan.execute(data); }

void destroy(Plan& plan) { plan.destroy(); }

} // namespace insitu
