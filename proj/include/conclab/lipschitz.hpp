#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conclab/geometry.hpp"
#include "conclab/model.hpp"

namespace conclab {

/// Real function on model points with a claimed Lipschitz constant (with
/// respect to geodesic distance) and declared family compatibility. Catalog
/// entries adapt anchors to the model's dimension at evaluation time, so one
/// entry serves every compatible model.
struct LipschitzFunction {
    std::string label;
    double claimed_constant = 1.0;
    std::vector<Family> compatible_families;
    std::function<double(const ManifoldModel&, const AmbientPoint&)> evaluate;

    bool compatible(const ManifoldModel& model) const;
};

/// Built-in functions:
///   coord    <x, e1>                       sphere only (odd in x)
///   abscoord |<x, e1>|                     all families (phase-invariant)
///   dist     d(x, e1)                      all families
///   mindist  min over 3 anchors of d(x, .) all families
///   mix      seeded convex combination of abscoord and dist
///   const    constant 0.7                  all families (degenerate control)
const std::vector<LipschitzFunction>& catalog();

/// Catalog lookup by label; unknown labels are a usage error.
const LipschitzFunction& find_function(const std::string& label);

}  // namespace conclab
