#pragma once

#include <vector>

#include "ttorsion/model.hpp"

namespace ttorsion {

// Lowest `count` eigenvalues (ascending, with multiplicity where the path
// resolves it) of the order-2 covariant finite-difference discretization of
// the squared twisted operator, on a periodic grid with `grid` points per
// real dimension. Requires integral per-plane flux p a_l s^2 / 2pi.
//
// Paths: n = 1 reduces to a dense scalar plane problem plus constant spinor
// shifts; n = 2 with vanishing three-form uses the tensor-product structure
// of the two planes; n = 2 with a twist runs restarted Krylov iteration on
// the full grid operator. Discretization error is O(h^2).
std::vector<double> fd_low_spectrum(const TorusModel& model, int p, int grid, int count);

// Collapse a sorted eigenvalue list into distinct levels using a merge
// tolerance; returns cluster means.
std::vector<double> distinct_levels(const std::vector<double>& values, double merge_tol);

}  // namespace ttorsion
