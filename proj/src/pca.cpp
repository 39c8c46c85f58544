#include "navrep/pca.hpp"

#include <stdexcept>

namespace navrep {

Pca2d project_2d(const std::vector<Eigen::VectorXd>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("project_2d: need at least 2 points");
  }
  const long n = static_cast<long>(points.size());
  const long d = points[0].size();
  Eigen::MatrixXd x(n, d);
  for (long i = 0; i < n; ++i) x.row(i) = points[i].transpose();

  Pca2d out;
  out.mean = x.colwise().mean();
  x.rowwise() -= out.mean.transpose();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);

  // Eigen returns ascending eigenvalues; flip to descending.
  out.eigenvalues = es.eigenvalues().reverse();
  const long k = std::min<long>(2, d);
  out.components = Eigen::MatrixXd::Zero(d, 2);
  for (long j = 0; j < k; ++j) {
    out.components.col(j) = es.eigenvectors().col(d - 1 - j);
  }
  out.projected = x * out.components;
  return out;
}

}  // namespace navrep
