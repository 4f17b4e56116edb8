#include "insitu/fft_endpoint.hpp"

#include <algorithm>

#include "insitu/rank_mailbox.hpp"

namespace insitu {

namespace {

void transform_rows(const Plan& plan, std::span<Complex> rows,
                    std::size_t length, std::span<Complex> workspace) {
  for (std::size_t offset = 0; offset < rows.size(); offset += length) {
    plan.execute(rows.subspan(offset, length), workspace);
  }
}

} // namespace

std::vector<Complex> distributed_fft_2d(std::span<const Complex> data,
                                        std::size_t ny0, std::size_t ny1,
                                        Direction direction,
                                        std::size_t ranks) {
  if (ny0 == 0 || ny1 == 0) {
    throw DimensionError("distributed_fft_2d: dimensions must be positive");
  }
  if (data.size() != ny0 * ny1) {
    throw DimensionError("distributed_fft_2d expects " +
                         std::to_string(ny0 * ny1) + " values, got " +
                         std::to_string(data.size()));
  }
  if (ranks == 0) {
    throw RankError("distributed_fft_2d needs at least one rank");
  }

  const Plan row_plan(1, ny1, direction);
  const Plan col_plan(1, ny0, direction);

  std::vector<std::vector<Complex>> slabs(ranks);
  for (std::size_t r = 0; r < ranks; ++r) {
    const Slab slab = local_slab(ny0, ranks, r);
    auto first = data.begin() + static_cast<std::ptrdiff_t>(slab.local_0_start * ny1);
    slabs[r].assign(first, first + static_cast<std::ptrdiff_t>(slab.local_n0 * ny1));
  }

  // Each worker reads and writes only slabs[its rank].
  run_ranks(ranks, [&](RankContext& ctx) {
    std::vector<Complex> workspace(
        std::max(row_plan.workspace_size(), col_plan.workspace_size()));
    std::vector<Complex> local = std::move(slabs[ctx.rank()]);

    transform_rows(row_plan, local, ny1, workspace);
    std::vector<Complex> transposed = transpose_slab(ctx, local, ny0, ny1);
    transform_rows(col_plan, transposed, ny0, workspace);
    slabs[ctx.rank()] = transpose_slab(ctx, transposed, ny1, ny0);
  });

  std::vector<Complex> out;
  out.reserve(data.size());
  for (const auto& slab : slabs) {
    out.insert(out.end(), slab.begin(), slab.end());
  }
  return out;
}

Mesh fft_execute(Mesh mesh, const FftConfig& config) {
  if (config.ranks == 0) {
    throw ConfigError("fft: ranks must be at least 1");
  }
  if (config.mesh_name != mesh.name()) {
    throw ConfigError("fft configured for mesh '" + config.mesh_name +
                      "' but received mesh '" + mesh.name() + "'");
  }
  const Field& source = mesh.field(config.array_name);
  const Field input =
      source.kind() == FieldKind::Real ? to_complex(source) : source;
  std::vector<Complex> result =
      distributed_fft_2d(input.complex_values(), mesh.ny0(), mesh.ny1(),
                         config.direction, config.ranks);
  mesh.replace_field(
      Field(config.array_name, mesh.ny0(), mesh.ny1(), std::move(result)));
  return mesh;
}

} // namespace insitu
