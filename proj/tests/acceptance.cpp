// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "insitu/bridge.hpp"
#include "insitu/cli.hpp"
#include "insitu/fft_endpoint.hpp"
#include "test_support.hpp"

using namespace insitu;
namespace fs = std::filesystem;
using insitu::testing::random_complex;
using insitu::testing::read_file;
using insitu::testing::sup_diff;
using insitu::testing::sup_norm;
using insitu::testing::temp_dir;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const char* const kDemoImages[] = {"01_noisy.pgm", "02_spectrum.pgm",
                                   "03_filtered.pgm", "04_denoised.pgm"};

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"insitu"};
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out, err;
  return run_cli(int(argv.size()), argv.data(), out, err);
}

/// Passes the mesh through and keeps a copy of what it saw.
class CaptureStage final : public AnalysisAdaptor {
public:
  explicit CaptureStage(std::optional<Mesh>& slot) : slot_(slot) {}
  std::string kind() const override { return "capture"; }

protected:
  Mesh on_execute(Mesh mesh, const StepContext&) override {
    slot_ = mesh;
    return mesh;
  }

private:
  std::optional<Mesh>& slot_;
};

class RecordingStage final : public AnalysisAdaptor {
public:
  explicit RecordingStage(std::vector<std::string>& log) : log_(log) {}
  std::string kind() const override { return "recording"; }

protected:
  void on_initialize() override { log_.push_back("Initialize"); }
  Mesh on_execute(Mesh mesh, const StepContext&) override {
    log_.push_back("Execute");
    return mesh;
  }
  void on_finalize() override { log_.push_back("Finalize"); }

private:
  std::vector<std::string>& log_;
};

// 1. execute vs row/column dft_naive, 1e-9 relative sup-norm, < 10 s.
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::vector<std::size_t> sizes;
  for (std::size_t n = 1; n <= 16; ++n) {
    sizes.push_back(n);
  }
  sizes.insert(sizes.end(), {20, 25, 32});
  double worst = 0.0;
  std::uint64_t seed = 0;
  for (std::size_t n0 : sizes) {
    for (std::size_t n1 : sizes) {
      const Plan plan = plan_dft_2d(long(n0), long(n1), Direction::Forward);
      for (int trial = 0; trial < 5; ++trial) {
        auto data = random_complex(n0 * n1, ++seed);
        const auto want = testing::naive_2d(data, n0, n1, Direction::Forward);
        execute(plan, data);
        worst = std::max(worst, sup_diff(data, want) / sup_norm(want));
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-9 && elapsed < 10.0,
          fmt("max rel err %.2e (tol 1e-9), %.2f s (budget 10 s)", worst, elapsed)};
}

// 2. 200x200 real field, forward/backward/scale, 1e-10 relative, < 1 s.
Outcome round_trip() {
  const auto start = Clock::now();
  Mesh mesh("mesh", 200, 200);
  mesh.add_field(Field("dataArray", 200, 200, testing::random_real(40000, 2024)));
  Mesh out = fft_execute(mesh, {"mesh", "dataArray", Direction::Forward, 1, std::nullopt});
  out = fft_execute(out, {"mesh", "dataArray", Direction::Backward, 1, std::nullopt});
  out = scale_field(out, {"mesh", "dataArray", 1.0 / 40000.0});
  const double elapsed = seconds_since(start);
  auto want = mesh.field("dataArray").real_values();
  auto got = out.field("dataArray").complex_values();
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    err = std::max(err, std::abs(got[i] - want[i]));
    norm = std::max(norm, std::abs(want[i]));
  }
  const double rel = err / norm;
  return {rel <= 1e-10 && elapsed < 1.0,
          fmt("rel err %.2e (tol 1e-10), %.3f s (budget 1 s)", rel, elapsed)};
}

// 3. Parseval on 50 random fields up to 64x64, 1e-10 relative.
Outcome parseval() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t ny0 = dim(rng), ny1 = dim(rng);
    auto data = random_complex(ny0 * ny1, rng());
    double before = 0.0;
    for (const auto& z : data) {
      before += std::norm(z);
    }
    execute(plan_dft_2d(long(ny0), long(ny1), Direction::Forward), data);
    double after = 0.0;
    for (const auto& z : data) {
      after += std::norm(z);
    }
    const double want = double(ny0 * ny1) * before;
    worst = std::max(worst, std::abs(after - want) / want);
  }
  return {worst <= 1e-10, fmt("max rel err %.2e over 50 fields (tol 1e-10)", worst)};
}

// 4. distributed_fft_2d agrees across rank counts within 1e-12 absolute.
Outcome rank_invariance() {
  double worst = 0.0;
  std::size_t cases = 0, zero_row_cases = 0;
  auto check = [&](std::size_t ny0, std::size_t ny1, std::size_t ranks) {
    auto data = random_complex(ny0 * ny1, ny0 * 1000 + ny1);
    auto serial = data;
    execute(plan_dft_2d(long(ny0), long(ny1), Direction::Forward), serial);
    auto got = distributed_fft_2d(data, ny0, ny1, Direction::Forward, ranks);
    worst = std::max(worst, sup_diff(got, serial));
    ++cases;
    zero_row_cases += ranks > ny0 ? 1 : 0;
  };
  for (std::size_t ny0 = 1; ny0 <= 12; ++ny0) {
    for (std::size_t ny1 = 1; ny1 <= 12; ++ny1) {
      for (std::size_t ranks : {1, 2, 3, 4, 7}) {
        check(ny0, ny1, ranks);
      }
    }
  }
  check(200, 200, 1);
  check(200, 200, 4);
  return {worst <= 1e-12 && zero_row_cases > 0,
          fmt("max abs diff %.2e over %zu cases, %zu with zero-row slabs (tol 1e-12)",
              worst, cases, zero_row_cases)};
}

// 5. Demo denoises and keeps exactly 25 coefficients, < 2 s.
Outcome demo_reproduction() {
  const auto dir = temp_dir("acceptance_demo");
  const DemoOptions options; // 200x200, seed 42, keep 0.0075
  const PipelineSpec spec = demo_spec(options);

  std::optional<Mesh> noisy, filtered;
  std::vector<std::unique_ptr<AnalysisAdaptor>> stages;
  stages.push_back(std::make_unique<CaptureStage>(noisy));
  for (const auto& config : spec.stages) {
    stages.push_back(make_stage(config));
    if (kind_of(config) == StageKind::Bandpass) {
      stages.push_back(std::make_unique<CaptureStage>(filtered));
    }
  }

  const auto start = Clock::now();
  RunReport report = run_pipeline(spec.source, stages, 1, dir);
  const double elapsed = seconds_since(start);

  const Field clean = radial_field(spec.source);
  auto rmse = [&](auto values) {
    auto ref = clean.real_values();
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double d = std::real(values[i]) - ref[i];
      sum += d * d;
    }
    return std::sqrt(sum / double(ref.size()));
  };
  const double noisy_rmse = rmse(noisy->field("dataArray").real_values());
  const double denoised_rmse =
      rmse(report.final_mesh->field("dataArray").complex_values());

  std::size_t survivors = 0;
  for (const auto& z : filtered->field("dataArray").complex_values()) {
    survivors += z != Complex{} ? 1 : 0;
  }
  return {denoised_rmse < noisy_rmse && survivors == 25 && elapsed < 2.0,
          fmt("RMSE noisy %.3f -> denoised %.3f, %zu coefficients kept (want 25), "
              "%.3f s (budget 2 s)",
              noisy_rmse, denoised_rmse, survivors, elapsed)};
}

// 6. Sample configuration parses; dropping required attributes is named.
Outcome config_fidelity() {
  const std::string listing = R"(<sensei>
  <analysis type="fft" mesh="mesh" array="dataArray" direction="FFTW_FORWARD"  python_xml="python_spectral_config.xml"/>
</sensei>
)";
  const auto dir = temp_dir("acceptance_config");
  std::ofstream(dir / "python_spectral_config.xml") << "<sensei></sensei>\n";

  const PipelineSpec spec = parse_config(listing, dir);
  const auto* fft = spec.stages.empty() ? nullptr : std::get_if<FftConfig>(&spec.stages[0]);
  const bool parsed = spec.stages.size() == 1 && fft && fft->mesh_name == "mesh" &&
                      fft->array_name == "dataArray" &&
                      fft->direction == Direction::Forward &&
                      fft->downstream_config == "python_spectral_config.xml";

  std::size_t named = 0;
  const std::vector<std::string> attrs{"type", "mesh", "array", "direction"};
  for (const auto& attr : attrs) {
    const std::string needle = " " + attr + "=\"";
    std::string mutated = listing;
    const auto at = mutated.find(needle);
    const auto end = mutated.find('"', at + needle.size());
    mutated.erase(at, end + 1 - at);
    try {
      parse_config(mutated, dir);
    } catch (const ConfigError& e) {
      if (std::string(e.what()).find("'" + attr + "'") != std::string::npos) {
        ++named;
      }
    }
  }
  return {parsed && named == attrs.size(),
          fmt("sample parsed: %s; %zu/%zu dropped attributes named in config errors",
              parsed ? "yes" : "no", named, attrs.size())};
}

// 7. Instrumented stage sees Initialize, Execute x3, Finalize.
Outcome lifecycle() {
  std::vector<std::string> log;
  std::vector<std::unique_ptr<AnalysisAdaptor>> stages;
  stages.push_back(std::make_unique<RecordingStage>(log));
  GenConfig source;
  source.ny0 = source.ny1 = 16;
  run_pipeline(source, stages, 3, temp_dir("acceptance_lifecycle"));
  const std::vector<std::string> want{"Initialize", "Execute", "Execute", "Execute",
                                      "Finalize"};
  std::string seen;
  for (const auto& call : log) {
    seen += (seen.empty() ? "" : ",") + call;
  }
  return {log == want, "observed " + seen};
}

// 8. Identical flags -> identical files; ranks 1 and 4 -> identical files.
Outcome determinism() {
  const auto a = temp_dir("acceptance_det_a");
  const auto b = temp_dir("acceptance_det_b");
  const auto c = temp_dir("acceptance_det_c");
  const std::vector<std::string> flags{"--grid", "200x200", "--seed", "42", "--keep", "0.0075"};
  auto run = [&](const fs::path& out, const char* ranks) {
    std::vector<std::string> args{"demo"};
    args.insert(args.end(), flags.begin(), flags.end());
    args.insert(args.end(), {"--ranks", ranks, "--out", out.string()});
    return cli(args);
  };
  const bool ran = run(a, "4") == 0 && run(b, "4") == 0 && run(c, "1") == 0;
  std::size_t same_repeat = 0, same_ranks = 0;
  for (const char* name : kDemoImages) {
    const std::string first = read_file(a / name);
    same_repeat += !first.empty() && first == read_file(b / name) ? 1 : 0;
    same_ranks += !first.empty() && first == read_file(c / name) ? 1 : 0;
  }
  return {ran && same_repeat == 4 && same_ranks == 4,
          fmt("repeat runs identical %zu/4, ranks 1 vs 4 identical %zu/4", same_repeat,
              same_ranks)};
}

// 9. Demo images are P5 200x200 with 40000 payload bytes.
Outcome image_format() {
  const auto dir = temp_dir("acceptance_images");
  const int code = cli({"demo", "--out", dir.string()});
  const std::string header = "P5\n200 200\n255\n";
  std::size_t valid = 0;
  for (const char* name : kDemoImages) {
    const std::string bytes = read_file(dir / name);
    valid += bytes.compare(0, header.size(), header) == 0 &&
                     bytes.size() - header.size() == 40000
                 ? 1
                 : 0;
  }
  return {code == 0 && valid == 4, fmt("%zu/4 images valid", valid)};
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 oracle equivalence", oracle_equivalence},
      {"AC2 round trip at 200x200", round_trip},
      {"AC3 Parseval", parseval},
      {"AC4 rank invariance", rank_invariance},
      {"AC5 demo denoising", demo_reproduction},
      {"AC6 config fidelity", config_fidelity},
      {"AC7 lifecycle", lifecycle},
      {"AC8 determinism", determinism},
      {"AC9 image format", image_format},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    failures += outcome.pass ? 0 : 1;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << ": "
              << outcome.detail << '\n';
  }
  std::cout << (failures == 0 ? "all criteria passed" : "some criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
