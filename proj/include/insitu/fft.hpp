#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "insitu/grid.hpp"

namespace insitu {

/// Forward uses exponent sign -1, Backward +1. Neither normalizes.
enum class Direction { Forward, Backward };

const char* to_string(Direction direction) noexcept;

/// Direct O(N^2) evaluation of the unnormalized DFT. Used as a test oracle.
std::vector<Complex> dft_naive(std::span<const Complex> values,
                               Direction direction);

/// One-shot 1D transform of any length >= 1.
std::vector<Complex> fft_1d(std::span<const Complex> values,
                            Direction direction);

namespace detail {
class Kernel;
}

/**
 * Prepared 2D complex transform of fixed size and direction.
 *
 * Creation does all factorization and twiddle/chirp precomputation, so
 * execution only touches the caller's buffer and a workspace. A plan is
 * immutable apart from destroy(); copies share state and can execute
 * concurrently from different threads.
 *
 * The row-major buffer is transformed in place: length-ny1 transforms over
 * every row, then length-ny0 transforms over every column. A 1D plan is a
 * plan with ny0 == 1.
 */
class Plan {
public:
  Plan(std::size_t ny0, std::size_t ny1, Direction direction);

  std::size_t ny0() const noexcept { return ny0_; }
  std::size_t ny1() const noexcept { return ny1_; }
  std::size_t size() const noexcept { return ny0_ * ny1_; }
  Direction direction() const noexcept { return direction_; }
  bool valid() const noexcept { return static_cast<bool>(rows_); }

  /// Number of Complex scratch elements execute() needs.
  std::size_t workspace_size() const;

  /// Transforms `data` in place using a thread-local workspace.
  void execute(std::span<Complex> data) const;
  /// Transforms `data` in place using a caller-owned workspace of at least
  /// workspace_size() elements. Does not allocate.
  void execute(std::span<Complex> data, std::span<Complex> workspace) const;

  /// Releases the precomputed state. Executing or destroying again afterwards
  /// throws UsageError.
  void destroy();

private:
  std::size_t ny0_;
  std::size_t ny1_;
  Direction direction_;
  std::shared_ptr<const detail::Kernel> rows_;
  std::shared_ptr<const detail::Kernel> cols_;
};

Plan plan_dft_1d(long long n, Direction direction);
Plan plan_dft_2d(long long ny0, long long ny1, Direction direction);
void execute(const Plan& plan, std::span<Complex> data);
void destroy(Plan& plan);

} // namespace insitu
