#pragma once

#include <Eigen/Core>
#include <vector>

namespace iaware {

/// Minimum-cost assignment of every row to a distinct column (Hungarian
/// algorithm with potentials, O(n^2 m)). Requires rows() <= cols(). Returns
/// the assigned column index per row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace iaware
