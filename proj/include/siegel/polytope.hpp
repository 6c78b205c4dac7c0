#pragma once

#include <array>
#include <vector>

#include "siegel/common.hpp"

namespace siegel {

// Exact integer 3D convex hulls, sized for monomial-staircase point sets.

using IPoint = std::array<i64, 3>;

struct HullTriangle {
    std::array<std::size_t, 3> v;  // indexes into the input points
    IPoint inward;                 // inward normal: inward . x >= offset on the hull
    i64 offset;
};

// Triangulated facets of the hull of a full-dimensional point set.  Uses an
// incremental construction with exact predicates, certifies the result
// (watertight, consistently oriented, all points inside), and falls back to
// exhaustive plane enumeration if the certificate fails.
std::vector<HullTriangle> convex_hull_3d(const std::vector<IPoint>& pts);

// 2D convex hull (monotone chain) of exact integer points; returns indexes in
// counterclockwise order
std::vector<std::size_t> convex_hull_2d(const std::vector<std::array<i64, 2>>& pts);

// rank of the affine span (0..3)
int affine_rank(const std::vector<IPoint>& pts);

}  // namespace siegel
