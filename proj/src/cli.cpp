#include "insitu/cli.hpp"

#include <algorithm>
#include <ostream>
#include <regex>

#include <CLI11.hpp>

#include "insitu/fft_endpoint.hpp"
#include "insitu/imageio.hpp"

namespace insitu {

namespace fs = std::filesystem;

PipelineSpec demo_spec(const DemoOptions& options) {
  PipelineSpec spec;
  spec.source.ny0 = options.ny0;
  spec.source.ny1 = options.ny1;
  spec.source.seed = options.seed;
  const std::string mesh = spec.source.mesh_name;
  const std::string array = spec.source.array_name;

  auto image = [&](const char* file, ImageScaling scaling) {
    return ImageConfig{mesh, array, file, scaling};
  };
  spec.stages = {
      image("01_noisy.pgm", ImageScaling::Linear),
      FftConfig{mesh, array, Direction::Forward, options.ranks, std::nullopt},
      image("02_spectrum.pgm", ImageScaling::LogMagnitude),
      BandpassConfig{mesh, array, options.keep_fraction},
      image("03_filtered.pgm", ImageScaling::LogMagnitude),
      FftConfig{mesh, array, Direction::Backward, options.ranks, std::nullopt},
      ScaleConfig{mesh, array,
                  1.0 / static_cast<double>(options.ny0 * options.ny1)},
      image("04_denoised.pgm", ImageScaling::RealPart),
  };
  return spec;
}

namespace {

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

struct GridSize {
  std::size_t ny0 = 200;
  std::size_t ny1 = 200;
};

GridSize parse_grid(const std::string& text) {
  static const std::regex pattern(R"(([1-9][0-9]{0,5})x([1-9][0-9]{0,5}))");
  std::smatch match;
  if (!std::regex_match(text, match, pattern)) {
    throw CLI::ValidationError("--grid", "expected <ny0>x<ny1>, got '" + text + "'");
  }
  return {std::stoul(match[1]), std::stoul(match[2])};
}

int run_demo(const DemoOptions& options, std::size_t steps,
             const fs::path& out_dir, std::ostream& out) {
  run_pipeline(demo_spec(options), steps, out_dir).print(out);
  return 0;
}

int run_config(const fs::path& config, std::size_t steps,
               std::optional<std::size_t> ranks, const fs::path& out_dir,
               std::ostream& out) {
  PipelineSpec spec = parse_config_file(config);
  if (ranks) {
    for (auto& stage : spec.stages) {
      if (auto* fft = std::get_if<FftConfig>(&stage)) {
        fft->ranks = *ranks;
      }
    }
  }
  run_pipeline(spec, steps, out_dir).print(out);
  return 0;
}

int run_fft(const fs::path& input, Direction direction, std::size_t ranks,
            const fs::path& out_dir, std::ostream& out) {
  const std::string array = "dataArray";
  Field field = read_pgm(input, array);
  Mesh mesh("mesh", field.ny0(), field.ny1());
  mesh.add_field(std::move(field));
  mesh = fft_execute(std::move(mesh), {"mesh", array, direction, ranks, std::nullopt});

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  }
  const fs::path path = out_dir / (input.stem().string() + "_" +
                                   to_string(direction) + ".pgm");
  write_image(mesh, {"mesh", array, path, ImageScaling::LogMagnitude});
  out << path.string() << '\n';
  return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"In situ FFT analysis pipeline", "insitu"};
  app.require_subcommand(1);

  std::size_t steps = 1;
  std::string out_dir = "./out";
  std::size_t ranks = 1;
  auto add_common = [&](CLI::App* sub, bool with_steps) {
    if (with_steps) {
      sub->add_option("--steps", steps, "Number of pipeline steps")
          ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    }
    sub->add_option("--out", out_dir, "Output directory");
    return sub->add_option("--ranks", ranks, "Logical FFT ranks")
        ->check(CLI::Range(std::size_t{1}, std::size_t{4096}));
  };

  auto* run = app.add_subcommand("run", "Run a pipeline from an XML configuration");
  std::string config_path;
  run->add_option("--config", config_path, "Configuration file")->required();
  auto* run_ranks_opt = add_common(run, true);

  auto* demo = app.add_subcommand("demo", "Run the built-in denoising workflow");
  std::string grid = "200x200";
  DemoOptions demo_options;
  demo->add_option("--grid", grid, "Grid size as <ny0>x<ny1>");
  demo->add_option("--seed", demo_options.seed, "Noise seed");
  demo->add_option("--keep", demo_options.keep_fraction,
                   "Bandpass keep fraction in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  add_common(demo, true);

  auto* fft = app.add_subcommand("fft", "Transform a PGM image and write its log-magnitude");
  std::string input;
  std::string direction = "forward";
  fft->add_option("--input", input, "Input binary PGM")->required();
  fft->add_option("--direction", direction, "forward or backward")
      ->check(CLI::IsMember({"forward", "backward"}));
  add_common(fft, false);

  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
    if (demo->parsed()) {
      const GridSize size = parse_grid(grid);
      demo_options.ny0 = size.ny0;
      demo_options.ny1 = size.ny1;
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (demo->parsed()) {
      demo_options.ranks = ranks;
      return run_demo(demo_options, steps, out_dir, out);
    }
    if (run->parsed()) {
      std::optional<std::size_t> override_ranks;
      if (run_ranks_opt->count() > 0) {
        override_ranks = ranks;
      }
      return run_config(config_path, steps, override_ranks, out_dir, out);
    }
    return run_fft(input,
                   direction == "forward" ? Direction::Forward : Direction::Backward,
                   ranks, out_dir, out);
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
}

} // namespace insitu
