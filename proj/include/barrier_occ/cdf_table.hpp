#pragma once

#include <vector>

namespace barrier_occ::numerics {

enum class Interpolation { step, linear };

// Tabulated distribution function of a non-negative random variable.
//
// Step tables are right-continuous and read values[k] on [grid[k], grid[k+1]).
// Linear tables interpolate between grid points and between (0, atom_at_zero)
// and the first grid point. Both read 0 left of zero.
struct CdfTable {
  double atom_at_zero = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
  Interpolation interpolation = Interpolation::linear;

  // Throws DomainError when any of the stated invariants fails.
  void validate() const;

  double operator()(double x) const;
  // Left limit F(x-).
  double left_limit(double x) const;
};

}  // namespace barrier_occ::numerics
