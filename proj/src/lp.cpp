#include "latmix/lp.hpp"

#include "latmix/core.hpp"

#include <vector>

namespace latmix {

LpResult maximize_from_origin(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& c, double tol) {
  const Eigen::Index m = A.rows(), n = A.cols();
  if (b.size() != m || c.size() != n) throw Error(ErrorKind::PreconditionViolation, "LP dimensions disagree");
  if (m > 0 && b.minCoeff() < 0) throw Error(ErrorKind::PreconditionViolation, "LP needs b >= 0");

  // columns: x (n), slacks (m), rhs
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  tab.topLeftCorner(m, n) = A;
  tab.block(0, n, m, m).setIdentity();
  tab.topRightCorner(m, 1) = b;
  tab.bottomLeftCorner(1, n) = -c.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) basis[static_cast<std::size_t>(r)] = n + r;

  LpResult out;
  const long limit = 50000;
  long iter = 0;
  for (;; ++iter) {
    if (iter >= limit) {
      out.status = LpResult::Status::IterationLimit;
      break;
    }
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j)
      if (tab(m, j) < -tol) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      const double a = tab(r, enter);
      if (a <= tol) continue;
      const double ratio = tab(r, n + m) / a;
      if (leave < 0 || ratio < best - 1e-15 ||
          (ratio <= best + 1e-15 && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) {
      out.status = LpResult::Status::Unbounded;
      break;
    }
    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index r = 0; r <= m; ++r)
      if (r != leave && tab(r, enter) != 0.0) tab.row(r) -= tab(r, enter) * tab.row(leave);
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < m; ++r)
    if (basis[static_cast<std::size_t>(r)] < n) out.x[basis[static_cast<std::size_t>(r)]] = tab(r, n + m);
  out.duals = tab.block(m, n, 1, m).transpose();
  out.objective = tab(m, n + m);
  return out;
}

}  // namespace latmix
