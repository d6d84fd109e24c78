#include "riesz/linear_algebra.hpp"

#include <cmath>
#include <string>

#include "riesz/errors.hpp"

namespace riesz {

namespace {

void project(Eigen::VectorXd& v) { v.array() -= v.mean(); }

}  // namespace

CgResult projected_cg(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol, int max_iter) {
  const auto n = b.size();
  if (a.rows() != n || a.cols() != n) throw DomainError("projected_cg: dimension mismatch");
  if (max_iter <= 0) max_iter = static_cast<int>(10 * n);
  Eigen::VectorXd rhs = b;
  project(rhs);
  const double bnorm = rhs.norm();
  CgResult out;
  out.x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0.0) return out;

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  Eigen::VectorXd ap(n);
  double rr = r.squaredNorm();
  for (int it = 1; it <= max_iter; ++it) {
    ap.noalias() = a.selfadjointView<Eigen::Upper>() * p;
    project(ap);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) throw ConvergenceError("projected_cg: matrix is not positive on the subspace");
    const double alpha = rr / pap;
    out.x += alpha * p;
    r -= alpha * ap;
    project(r);
    const double rr_new = r.squaredNorm();
    out.iterations = it;
    out.residual = std::sqrt(rr_new) / bnorm;
    if (out.residual <= tol) {
      project(out.x);
      return out;
    }
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  throw ConvergenceError("projected_cg: residual " + std::to_string(out.residual) + " after " +
                         std::to_string(max_iter) + " iterations");
}

Eigen::VectorXd dense_mean_zero_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const auto n = b.size();
  Eigen::MatrixXd m = a + Eigen::MatrixXd::Ones(n, n);
  return m.ldlt().solve(b);
}

}  // namespace riesz
