#pragma once

#include "maba/config.hpp"
#include "maba/report.hpp"

namespace maba {

// Verification suites behind the CLI commands. Each returns a Report whose
// records carry pinned tolerances; reports are deterministic for a fixed
// seed and thread count (and seed-only deterministic for single-thread runs).

Report suite_verify_izergin(const Model& m, const RunConfig& cfg);
Report suite_verify_appendices(const Model& m, const RunConfig& cfg);
Report suite_solve_bethe(const Model& m, const RunConfig& cfg);
Report suite_scalar_product(const Model& m, const RunConfig& cfg, std::span<const cx> v,
                            std::span<const cx> u);
Report suite_norm(const Model& m, const RunConfig& cfg, std::span<const cx> u);
Report suite_spectrum_check(const Model& m, const RunConfig& cfg, int z_samples);

}  // namespace maba
