#pragma once

#include "anisoflow/grid.hpp"
#include "cli/config.hpp"

namespace anisoflow::cli {

/// Value of one named basis function at (theta, lon); throws
/// std::invalid_argument for a name that does not fit the dimension.
double basis_value(int dim, const std::string& name, double theta, double lon);

/// Samples the initial data on the grid. Checks that r is finite and positive
/// at every node; failures are reported as ConfigError.
RadialGraph make_initial_graph(const SphericalGrid& grid, const InitialData& initial,
                               const std::filesystem::path& base_dir = {});

}  // namespace anisoflow::cli
