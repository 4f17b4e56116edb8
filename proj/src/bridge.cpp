#include "insitu/bridge.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace insitu {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

const char* to_string(StageKind kind) noexcept {
  switch (kind) {
  case StageKind::Fft:
    return "fft";
  case StageKind::Bandpass:
    return "bandpass";
  case StageKind::Image:
    return "image";
  case StageKind::Scale:
    return "scale";
  }
  return "unknown";
}

StageKind kind_of(const StageConfig& config) noexcept {
  return static_cast<StageKind>(config.index());
}

// ---------------------------------------------------------------------------
// Configuration parsing

namespace {

class ElementReader {
public:
  ElementReader(const pt::ptree& element, std::string where)
      : attrs_(element.get_child_optional("<xmlattr>")),
        where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

  std::optional<std::string> optional(const std::string& name) {
    seen_.insert(name);
    if (!attrs_) {
      return std::nullopt;
    }
    if (auto value = attrs_->get_optional<std::string>(name)) {
      return *value;
    }
    return std::nullopt;
  }

  std::string required(const std::string& name) {
    auto value = optional(name);
    if (!value) {
      throw ConfigError(where_ + ": missing required attribute '" + name + "'");
    }
    if (value->empty()) {
      throw ConfigError(where_ + ": attribute '" + name + "' is empty");
    }
    return *value;
  }

  template <typename T>
  std::optional<T> optional_number(const std::string& name) {
    auto text = optional(name);
    if (!text) {
      return std::nullopt;
    }
    return to_number<T>(name, *text);
  }

  template <typename T>
  T required_number(const std::string& name) {
    return to_number<T>(name, required(name));
  }

  /// Rejects attributes no reader call asked about.
  void finish() const {
    if (!attrs_) {
      return;
    }
    for (const auto& [name, value] : *attrs_) {
      if (!seen_.contains(name)) {
        throw ConfigError(where_ + ": unknown attribute '" + name + "'");
      }
    }
  }

private:
  template <typename T>
  T to_number(const std::string& name, const std::string& text) const {
    T value{};
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
      throw ConfigError(where_ + ": attribute '" + name + "' has invalid value '" +
                        text + "'");
    }
    return value;
  }

  boost::optional<const pt::ptree&> attrs_;
  std::string where_;
  std::set<std::string> seen_;
};

Direction parse_direction(ElementReader& reader) {
  const std::string text = reader.required("direction");
  if (text == "FFTW_FORWARD") {
    return Direction::Forward;
  }
  if (text == "FFTW_BACKWARD") {
    return Direction::Backward;
  }
  throw ConfigError(reader.where() + ": attribute 'direction' must be "
                                     "FFTW_FORWARD or FFTW_BACKWARD, got '" +
                    text + "'");
}

ImageScaling parse_scaling(ElementReader& reader) {
  const auto text = reader.optional("scaling");
  if (!text || *text == "linear") {
    return ImageScaling::Linear;
  }
  if (*text == "log_magnitude") {
    return ImageScaling::LogMagnitude;
  }
  if (*text == "real_part") {
    return ImageScaling::RealPart;
  }
  throw ConfigError(reader.where() + ": attribute 'scaling' must be linear, "
                                     "log_magnitude or real_part, got '" +
                    *text + "'");
}

GenConfig parse_datagen(ElementReader& reader) {
  GenConfig gen;
  if (auto v = reader.optional("mesh")) {
    gen.mesh_name = *v;
  }
  if (auto v = reader.optional("array")) {
    gen.array_name = *v;
  }
  if (auto v = reader.optional_number<std::size_t>("ny0")) {
    gen.ny0 = *v;
  }
  if (auto v = reader.optional_number<std::size_t>("ny1")) {
    gen.ny1 = *v;
  }
  gen.c0 = reader.optional_number<double>("c0");
  gen.c1 = reader.optional_number<double>("c1");
  if (auto v = reader.optional_number<double>("noise_fraction")) {
    gen.noise_fraction = *v;
  }
  gen.noise_amplitude = reader.optional_number<double>("noise_amplitude");
  if (auto v = reader.optional_number<std::uint64_t>("seed")) {
    gen.seed = *v;
  }
  gen.wavelength = reader.optional_number<double>("wavelength");
  try {
    validate(gen);
  } catch (const Error& e) {
    throw ConfigError(reader.where() + ": " + e.what());
  }
  return gen;
}

StageConfig parse_stage(const std::string& type, ElementReader& reader) {
  if (type == "fft") {
    FftConfig fft;
    fft.mesh_name = reader.required("mesh");
    fft.array_name = reader.required("array");
    fft.direction = parse_direction(reader);
    if (auto ranks = reader.optional_number<std::size_t>("ranks")) {
      if (*ranks == 0) {
        throw ConfigError(reader.where() + ": attribute 'ranks' must be >= 1");
      }
      fft.ranks = *ranks;
    }
    fft.downstream_config = reader.optional("python_xml");
    return fft;
  }
  if (type == "bandpass") {
    BandpassConfig band;
    band.mesh_name = reader.required("mesh");
    band.array_name = reader.required("array");
    if (auto keep = reader.optional_number<double>("keep_fraction")) {
      if (!(*keep >= 0.0 && *keep <= 1.0)) {
        throw ConfigError(reader.where() +
                          ": attribute 'keep_fraction' must lie in [0, 1]");
      }
      band.keep_fraction = *keep;
    }
    return band;
  }
  if (type == "image") {
    ImageConfig image;
    image.mesh_name = reader.required("mesh");
    image.array_name = reader.required("array");
    image.path = reader.required("path");
    image.scaling = parse_scaling(reader);
    return image;
  }
  if (type == "scale") {
    ScaleConfig scale;
    scale.mesh_name = reader.required("mesh");
    scale.array_name = reader.required("array");
    scale.factor = reader.required_number<double>("factor");
    if (!std::isfinite(scale.factor)) {
      throw ConfigError(reader.where() + ": attribute 'factor' must be finite");
    }
    return scale;
  }
  throw ConfigError(reader.where() + ": unknown analysis type '" + type + "'");
}

struct ParseState {
  PipelineSpec spec;
  bool have_source = false;
  std::vector<fs::path> include_stack;
};

void parse_document(const std::string& xml_text, const fs::path& base_dir,
                    const std::string& source_name, ParseState& state);

void parse_include(const std::string& reference, const fs::path& base_dir,
                   const std::string& where, ParseState& state) {
  fs::path path = fs::path(reference).is_absolute() ? fs::path(reference)
                                                    : base_dir / reference;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError(where + ": cannot read python_xml file '" + path.string() +
                    "'");
  }
  std::error_code ec;
  fs::path canonical = fs::weakly_canonical(path, ec);
  if (ec) {
    canonical = path;
  }
  if (std::find(state.include_stack.begin(), state.include_stack.end(),
                canonical) != state.include_stack.end()) {
    throw ConfigError(where + ": python_xml include cycle through '" +
                      path.string() + "'");
  }
  std::stringstream text;
  text << in.rdbuf();
  state.include_stack.push_back(canonical);
  parse_document(text.str(), path.parent_path(), path.filename().string(), state);
  state.include_stack.pop_back();
}

void parse_document(const std::string& xml_text, const fs::path& base_dir,
                    const std::string& source_name, ParseState& state) {
  pt::ptree tree;
  try {
    std::istringstream in(xml_text);
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(source_name + ":" + std::to_string(e.line()) +
                     ": malformed XML: " + e.message());
  }

  auto root = tree.get_child_optional("sensei");
  if (!root) {
    throw ConfigError(source_name + ": root element must be <sensei>");
  }
  for (const auto& [name, child] : tree) {
    if (name != "sensei" && name != "<xmlcomment>") {
      throw ConfigError(source_name + ": unexpected top-level element <" +
                        name + ">");
    }
  }

  std::size_t index = 0;
  for (const auto& [name, element] : *root) {
    if (name == "<xmlcomment>" || name == "<xmlattr>") {
      continue;
    }
    if (name != "analysis") {
      throw ConfigError(source_name + ": unexpected element <" + name +
                        "> inside <sensei>");
    }
    ElementReader reader(element,
                         source_name + ": analysis #" + std::to_string(index));
    ++index;
    const std::string type = reader.required("type");
    const std::string where = reader.where() + " (type '" + type + "')";
    ElementReader typed(element, where);
    typed.optional("type");

    if (type == "datagen") {
      if (state.have_source) {
        throw ConfigError(where + ": more than one datagen source");
      }
      state.spec.source = parse_datagen(typed);
      state.have_source = true;
      typed.finish();
      continue;
    }
    StageConfig stage = parse_stage(type, typed);
    // python_xml is accepted on every stage kind; fft already consumed it.
    std::optional<std::string> include =
        std::holds_alternative<FftConfig>(stage)
            ? std::get<FftConfig>(stage).downstream_config
            : typed.optional("python_xml");
    typed.finish();
    state.spec.stages.push_back(std::move(stage));
    if (include) {
      parse_include(*include, base_dir, where, state);
    }
  }
}

} // namespace

PipelineSpec parse_config(const std::string& xml_text,
                          const fs::path& base_dir) {
  ParseState state;
  parse_document(xml_text, base_dir, "<config>", state);
  if (state.spec.stages.empty()) {
    throw ConfigError("configuration defines no analysis stages");
  }
  return std::move(state.spec);
}

PipelineSpec parse_config_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError("cannot read configuration file '" + path.string() + "'");
  }
  std::stringstream text;
  text << in.rdbuf();
  ParseState state;
  std::error_code ec;
  fs::path canonical = fs::weakly_canonical(path, ec);
  state.include_stack.push_back(ec ? path : canonical);
  parse_document(text.str(), path.parent_path(), path.filename().string(), state);
  if (state.spec.stages.empty()) {
    throw ConfigError(path.string() + ": configuration defines no analysis stages");
  }
  return std::move(state.spec);
}

// ---------------------------------------------------------------------------
// Stages

Mesh scale_field(Mesh mesh, const ScaleConfig& config) {
  if (config.mesh_name != mesh.name()) {
    throw ConfigError("scale configured for mesh '" + config.mesh_name +
                      "' but received mesh '" + mesh.name() + "'");
  }
  const Field& field = mesh.field(config.array_name);
  if (field.kind() == FieldKind::Real) {
    auto values = field.real_values();
    std::vector<double> scaled(values.size());
    std::transform(values.begin(), values.end(), scaled.begin(),
                   [&](double v) { return v * config.factor; });
    mesh.replace_field(Field(field.name(), field.ny0(), field.ny1(), std::move(scaled)));
  } else {
    auto values = field.complex_values();
    std::vector<Complex> scaled(values.size());
    std::transform(values.begin(), values.end(), scaled.begin(),
                   [&](const Complex& z) { return z * config.factor; });
    mesh.replace_field(Field(field.name(), field.ny0(), field.ny1(), std::move(scaled)));
  }
  return mesh;
}

void AnalysisAdaptor::initialize() {
  if (state_ != LifecycleState::Created) {
    throw UsageError(kind() + ": initialize called twice");
  }
  on_initialize();
  state_ = LifecycleState::Initialized;
}

Mesh AnalysisAdaptor::execute(Mesh mesh, const StepContext& ctx) {
  if (state_ != LifecycleState::Initialized) {
    throw UsageError(kind() + ": execute outside initialize/finalize");
  }
  last_output_.reset();
  return on_execute(std::move(mesh), ctx);
}

void AnalysisAdaptor::finalize() {
  if (state_ != LifecycleState::Initialized) {
    throw UsageError(kind() + ": finalize without initialize, or twice");
  }
  state_ = LifecycleState::Finalized;
  on_finalize();
}

fs::path image_output_path(const fs::path& path, const StepContext& ctx) {
  fs::path out = path.is_absolute() ? path : ctx.out_dir / path;
  if (ctx.steps > 1) {
    out.replace_filename(out.stem().string() + "_step" +
                         std::to_string(ctx.step) + out.extension().string());
  }
  return out;
}

namespace {

class FftStage final : public AnalysisAdaptor {
public:
  explicit FftStage(FftConfig config) : config_(std::move(config)) {}
  std::string kind() const override { return "fft"; }

protected:
  Mesh on_execute(Mesh mesh, const StepContext&) override {
    return fft_execute(std::move(mesh), config_);
  }

private:
  FftConfig config_;
};

class BandpassStage final : public AnalysisAdaptor {
public:
  explicit BandpassStage(BandpassConfig config) : config_(std::move(config)) {}
  std::string kind() const override { return "bandpass"; }

protected:
  Mesh on_execute(Mesh mesh, const StepContext&) override {
    return bandpass(std::move(mesh), config_);
  }

private:
  BandpassConfig config_;
};

class ImageStage final : public AnalysisAdaptor {
public:
  explicit ImageStage(ImageConfig config) : config_(std::move(config)) {}
  std::string kind() const override { return "image"; }

protected:
  Mesh on_execute(Mesh mesh, const StepContext& ctx) override {
    ImageConfig resolved = config_;
    resolved.path = image_output_path(config_.path, ctx);
    set_output(write_image(mesh, resolved));
    return mesh;
  }

private:
  ImageConfig config_;
};

class ScaleStage final : public AnalysisAdaptor {
public:
  explicit ScaleStage(ScaleConfig config) : config_(std::move(config)) {}
  std::string kind() const override { return "scale"; }

protected:
  Mesh on_execute(Mesh mesh, const StepContext&) override {
    return scale_field(std::move(mesh), config_);
  }

private:
  ScaleConfig config_;
};

} // namespace

std::unique_ptr<AnalysisAdaptor> make_stage(const StageConfig& config) {
  return std::visit(
      [](const auto& c) -> std::unique_ptr<AnalysisAdaptor> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, FftConfig>) {
          return std::make_unique<FftStage>(c);
        } else if constexpr (std::is_same_v<T, BandpassConfig>) {
          return std::make_unique<BandpassStage>(c);
        } else if constexpr (std::is_same_v<T, ImageConfig>) {
          return std::make_unique<ImageStage>(c);
        } else {
          return std::make_unique<ScaleStage>(c);
        }
      },
      config);
}

// ---------------------------------------------------------------------------
// Driver

void RunReport::print(std::ostream& out) const {
  for (const auto& t : timings) {
    std::ostringstream ms;
    ms << std::fixed << std::setprecision(3) << t.ms;
    out << "step=" << t.step << " stage=" << t.stage << " kind=" << t.kind
        << " ms=" << ms.str() << " out=" << (t.output ? t.output->string() : "-")
        << '\n';
  }
}

RunReport run_pipeline(const PipelineSpec& spec, std::size_t steps,
                       const fs::path& out_dir) {
  std::vector<std::unique_ptr<AnalysisAdaptor>> stages;
  stages.reserve(spec.stages.size());
  for (const auto& config : spec.stages) {
    stages.push_back(make_stage(config));
  }
  return run_pipeline(spec.source, stages, steps, out_dir);
}

RunReport run_pipeline(const GenConfig& source,
                       std::span<const std::unique_ptr<AnalysisAdaptor>> stages,
                       std::size_t steps, const fs::path& out_dir) {
  if (steps == 0) {
    throw ValueError("run_pipeline: steps must be at least 1");
  }
  if (stages.empty()) {
    throw ConfigError("run_pipeline: no stages");
  }
  validate(source);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir.string() +
                  "': " + ec.message());
  }

  std::size_t initialized = 0;
  auto finalize_initialized = [&] {
    for (std::size_t k = 0; k < initialized; ++k) {
      if (stages[k]->state() == LifecycleState::Initialized) {
        try {
          stages[k]->finalize();
        } catch (...) {
          // the original failure is the one reported
        }
      }
    }
  };
  auto fail = [&](std::size_t k) {
    std::exception_ptr cause = std::current_exception();
    std::string what = "unknown error";
    try {
      std::rethrow_exception(cause);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    finalize_initialized();
    throw StageError(k, stages[k]->kind(), what, cause);
  };

  for (std::size_t k = 0; k < stages.size(); ++k) {
    try {
      stages[k]->initialize();
    } catch (...) {
      fail(k);
    }
    ++initialized;
  }

  RunReport report;
  for (std::size_t step = 0; step < steps; ++step) {
    const StepContext ctx{step, steps, out_dir};
    Mesh mesh = [&] {
      try {
        return generate_mesh(source);
      } catch (...) {
        finalize_initialized();
        throw;
      }
    }();
    for (std::size_t k = 0; k < stages.size(); ++k) {
      const auto start = std::chrono::steady_clock::now();
      try {
        mesh = stages[k]->execute(std::move(mesh), ctx);
      } catch (...) {
        fail(k);
      }
      const std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      report.timings.push_back(
          {step, k, stages[k]->kind(), elapsed.count(), stages[k]->last_output()});
    }
    if (step + 1 == steps) {
      report.final_mesh = std::move(mesh);
    }
  }

  for (std::size_t k = 0; k < stages.size(); ++k) {
    try {
      stages[k]->finalize();
    } catch (...) {
      fail(k);
    }
  }
  return report;
}

} // namespace insitu
