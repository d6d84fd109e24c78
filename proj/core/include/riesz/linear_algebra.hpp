#pragma once

#include <Eigen/Dense>

namespace riesz {

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  ///< final ||r|| / ||b||
};

/// Conjugate gradients for A x = b restricted to the mean-zero subspace, where
/// A is symmetric positive semidefinite with kernel span{(1, ..., 1)} and b is
/// mean-zero. Residuals are projected every iteration. Throws
/// ConvergenceError when ||r|| / ||b|| > tol after max_iter iterations
/// (default 10 n).
CgResult projected_cg(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol = 1e-8,
                      int max_iter = 0);

/// Dense reference: solves (A + 1 1^T) x = b by LDLT, which equals the
/// mean-zero solution when b is mean-zero.
Eigen::VectorXd dense_mean_zero_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace riesz
