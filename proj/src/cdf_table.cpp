#include "barrier_occ/cdf_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "barrier_occ/errors.hpp"

namespace barrier_occ::numerics {

void CdfTable::validate() const {
  if (grid.empty() || grid.size() != values.size()) {
    throw DomainError("CdfTable needs a nonempty grid with one value per point");
  }
  if (!(atom_at_zero >= 0.0 && atom_at_zero <= 1.0)) {
    throw DomainError("CdfTable atom_at_zero outside [0, 1]");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || grid[k] < 0.0) {
      throw DomainError("CdfTable grid point " + std::to_string(k) + " is negative or not finite");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw DomainError("CdfTable grid not strictly increasing at " + std::to_string(k));
    }
    if (!(values[k] >= 0.0 && values[k] <= 1.0)) {
      throw DomainError("CdfTable value " + std::to_string(k) + " outside [0, 1]");
    }
    if (k > 0 && values[k] < values[k - 1]) {
      throw DomainError("CdfTable values decrease at " + std::to_string(k));
    }
  }
  if (atom_at_zero > values.front()) {
    throw DomainError("CdfTable atom_at_zero exceeds the first value");
  }
}

double CdfTable::operator()(double x) const {
  if (x < 0.0 || grid.empty()) return 0.0;
  if (x >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - grid.begin());  // grid[k] > x
  if (interpolation == Interpolation::step) {
    return k == 0 ? atom_at_zero : values[k - 1];
  }
  const double x0 = k == 0 ? 0.0 : grid[k - 1];
  const double f0 = k == 0 ? atom_at_zero : values[k - 1];
  const double w = (x - x0) / (grid[k] - x0);
  return f0 + w * (values[k] - f0);
}

double CdfTable::left_limit(double x) const {
  if (x <= 0.0 || grid.empty()) return 0.0;
  if (interpolation == Interpolation::linear) return (*this)(x);
  if (x > grid.back()) return values.back();
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - grid.begin());  // grid[k] >= x
  return k == 0 ? atom_at_zero : values[k - 1];
}

}  // namespace barrier_occ::numerics
