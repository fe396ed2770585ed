#pragma once

#include <cstdint>
#include <string>

#include "serf/nn.hpp"

namespace serf {

struct GridSpec {
    double x_lo = -10.0;
    double x_hi = 10.0;
    double y_lo = -10.0;
    double y_hi = 10.0;
    std::size_t res_x = 256;
    std::size_t res_y = 256;
};

// values(i, j) = network output at (x_j, y_i); both axes sampled inclusive
// of their endpoints.
struct ScalarField {
    GridSpec grid;
    Tensor2 values;
};

// The stock rendering architecture: `depth` dense layers of `width` units,
// glorot-normal weights, no BN or dropout, scalar head.
NetworkSpec landscape_network_spec(ActivationTag tag, std::uint64_t seed = 0,
                                   std::size_t depth = 6, std::size_t width = 16);

// Evaluates a 2-in 1-out network over the grid. Rejects other shapes.
ScalarField landscape_render(const NetworkSpec& spec, const GridSpec& grid);

// Mean absolute 5-point Laplacian over interior points, spacing-aware.
// Grids with no interior (resolution 2) give 0.
double mean_abs_laplacian(const ScalarField& field);

// P5, 16-bit big-endian samples, min-max normalized; row 0 is y_lo.
void write_pgm16(const ScalarField& field, const std::string& path);

// Header x,y,value; one row per grid point, row-major, %.17g values.
void write_field_csv(const ScalarField& field, const std::string& path);

}  // namespace serf
