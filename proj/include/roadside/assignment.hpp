#pragma once

#include <Eigen/Core>
#include <vector>

namespace roadside::tracking {

/**
 * @brief Minimum-total-cost one-to-one assignment (Hungarian method, O(n^2 m)).
 *
 * Rectangular matrices are allowed. Returns, for every row, the assigned
 * column or -1 when there are more rows than columns. Ties resolve towards
 * lower row indices.
 */
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace roadside::tracking
