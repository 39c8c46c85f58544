#pragma once

#include <Eigen/Dense>
#include <vector>

namespace navrep {

struct Pca2d {
  Eigen::MatrixXd projected;     // n x 2, centered data on the top-2 axes
  Eigen::MatrixXd components;    // d x 2 orthonormal directions
  Eigen::VectorXd eigenvalues;   // all covariance eigenvalues, descending
  Eigen::VectorXd mean;
};

// Top-2 principal-component projection, used for 2D scatter plots of
// 64-dimensional activation clouds.
Pca2d project_2d(const std::vector<Eigen::VectorXd>& points);

}  // namespace navrep
