// Small dense linear programs.
#ifndef LATMIX_LP_HPP
#define LATMIX_LP_HPP

#include <Eigen/Core>

namespace latmix {

struct LpResult {
  enum class Status { Optimal, Unbounded, IterationLimit };
  Status status = Status::Optimal;
  double objective = 0.0;
  Eigen::VectorXd x;      // primal solution
  Eigen::VectorXd duals;  // one per row of A, >= 0
};

/// maximize c^T x  s.t.  A x <= b, x >= 0, with b >= 0 so the origin is a
/// feasible start. Tableau simplex with Bland's rule.
LpResult maximize_from_origin(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& c, double tol = 1e-12);

}  // namespace latmix

#endif  // LATMIX_LP_HPP
