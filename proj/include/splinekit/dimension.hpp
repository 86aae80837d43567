#pragma once

#include <optional>
#include <vector>

#include "splinekit/constraints.hpp"

namespace splinekit {

struct DimensionReport {
    int D = 0;
    std::vector<int> interior_vertices;  // vertex ids, in processing order
    std::vector<int> sigma;              // per interior vertex
    std::vector<int> sigma_tilde;
    int lower = 0;
    int upper = 0;
    std::optional<int> rank_dim;
};

/// Schumaker lower/upper dimension bounds. Slopes are compared as angles
/// mod pi with tolerance slope_tol (radians).
DimensionReport schumaker_bounds(const SplineSpace& space, double slope_tol = 1e-9);

/// Exact dimension as #coeffs - rank(H), rank-revealing QR with relative
/// tolerance 1e-9. Guarded at 20000 columns.
int dim_via_rank(const SplineSpace& space);

}  // namespace splinekit
