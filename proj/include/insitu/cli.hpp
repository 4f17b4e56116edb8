#pragma once

#include <cstdint>
#include <iosfwd>

#include "insitu/bridge.hpp"

namespace insitu {

struct DemoOptions {
  std::size_t ny0 = 200;
  std::size_t ny1 = 200;
  std::uint64_t seed = 42;
  double keep_fraction = 0.0075;
  std::size_t ranks = 1;
};

/**
 * The denoising workflow: noisy source, forward FFT, corner bandpass, inverse
 * FFT, 1/(ny0*ny1) normalization, with an image sink after each stage
 * (01_noisy, 02_spectrum, 03_filtered, 04_denoised).
 */
PipelineSpec demo_spec(const DemoOptions& options);

/// Entry point behind the `insitu` executable. Returns the process exit code:
/// 0 on success, 1 on a pipeline failure, 2 on bad usage.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace insitu
