#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "insitu/datagen.hpp"
#include "insitu/fft_endpoint.hpp"
#include "insitu/grid.hpp"
#include "insitu/imageio.hpp"
#include "insitu/spectral_filters.hpp"

namespace insitu {

enum class StageKind { Fft, Bandpass, Image, Scale };

const char* to_string(StageKind kind) noexcept;

struct ScaleConfig {
  std::string mesh_name;
  std::string array_name;
  double factor = 1.0;
};

using StageConfig =
    std::variant<FftConfig, BandpassConfig, ImageConfig, ScaleConfig>;

StageKind kind_of(const StageConfig& config) noexcept;

/// Source settings plus the stages to run on its output, in execution order.
struct PipelineSpec {
  GenConfig source;
  std::vector<StageConfig> stages;
};

/**
 * Parses a `<sensei>` document of `<analysis type="..." .../>` elements.
 *
 * Stage types are fft, bandpass, image and scale; an optional `datagen`
 * element configures the source. A `python_xml` attribute names another
 * configuration file, resolved against `base_dir`, whose stages are spliced in
 * directly after the stage carrying it.
 */
PipelineSpec parse_config(const std::string& xml_text,
                          const std::filesystem::path& base_dir = {});

/// parse_config on a file, resolving includes relative to its directory.
PipelineSpec parse_config_file(const std::filesystem::path& path);

/// Every value of the array multiplied by `factor` (componentwise for complex).
Mesh scale_field(Mesh mesh, const ScaleConfig& config);

enum class LifecycleState { Created, Initialized, Finalized };

struct StepContext {
  std::size_t step = 0;
  std::size_t steps = 1;
  std::filesystem::path out_dir;
};

/**
 * A pipeline endpoint with the Initialize / Execute / Finalize lifecycle.
 *
 * The public methods enforce the ordering (execute only while initialized,
 * each transition once) and forward to the protected hooks.
 */
class AnalysisAdaptor {
public:
  virtual ~AnalysisAdaptor() = default;

  virtual std::string kind() const = 0;

  void initialize();
  Mesh execute(Mesh mesh, const StepContext& ctx);
  void finalize();

  LifecycleState state() const noexcept { return state_; }
  /// File written by the most recent execute, if the stage writes one.
  const std::optional<std::filesystem::path>& last_output() const noexcept {
    return last_output_;
  }

protected:
  virtual void on_initialize() {}
  virtual Mesh on_execute(Mesh mesh, const StepContext& ctx) = 0;
  virtual void on_finalize() {}

  void set_output(std::filesystem::path path) { last_output_ = std::move(path); }

private:
  LifecycleState state_ = LifecycleState::Created;
  std::optional<std::filesystem::path> last_output_;
};

std::unique_ptr<AnalysisAdaptor> make_stage(const StageConfig& config);

/// Where an image stage writes for a given step: relative paths land in
/// out_dir, and multi-step runs get a `_step<i>` suffix.
std::filesystem::path image_output_path(const std::filesystem::path& path,
                                        const StepContext& ctx);

struct StageTiming {
  std::size_t step = 0;
  std::size_t stage = 0;
  std::string kind;
  double ms = 0.0;
  std::optional<std::filesystem::path> output;
};

struct RunReport {
  std::vector<StageTiming> timings;
  /// Output of the last stage on the last step.
  std::optional<Mesh> final_mesh;

  /// One `step=<i> stage=<k> kind=<kind> ms=<float> out=<path|->` line per entry.
  void print(std::ostream& out) const;
};

RunReport run_pipeline(const PipelineSpec& spec, std::size_t steps,
                       const std::filesystem::path& out_dir);

/**
 * Drives already-built stages: every stage is initialized before the first
 * step and finalized after the last. A failure finalizes the stages that were
 * initialized, then surfaces as a StageError naming the failing stage.
 */
RunReport run_pipeline(const GenConfig& source,
                       std::span<const std::unique_ptr<AnalysisAdaptor>> stages,
                       std::size_t steps, const std::filesystem::path& out_dir);

} // namespace insitu
