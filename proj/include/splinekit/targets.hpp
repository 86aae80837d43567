#pragma once

#include <functional>
#include <string>
#include <vector>

namespace splinekit::targets {

using Field = std::function<double(double, double)>;

/// A named reference solution with enough derivatives for PDE error studies.
struct Target {
    std::string name;
    Field u;
    Field ux, uy;        // gradient
    Field laplacian;
};

const Target& lookup(const std::string& name);
const std::vector<Target>& all_targets();

/// The ten benchmark fitting functions f1..f10.
const std::vector<std::pair<std::string, Field>>& benchmark_functions();

}  // namespace splinekit::targets
