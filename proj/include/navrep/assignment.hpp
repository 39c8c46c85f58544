#pragma once

#include <Eigen/Dense>
#include <vector>

namespace navrep {

// Exact minimum-cost rectangular assignment (Jonker-Volgenant style shortest
// augmenting paths). Requires rows <= cols; every row is assigned a distinct
// column. Returns the optimal total cost and fills row_to_col.
double min_cost_assignment(const Eigen::MatrixXd& cost,
                           std::vector<int>& row_to_col);

}  // namespace navrep
