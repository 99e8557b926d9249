#pragma once

// Small dense linear algebra helpers shared by the solvers.

#include <Eigen/Dense>

#include "hbevent/errors.hpp"

namespace hbevent {

/// Least-squares solution of A x = b; A must have full column rank.
inline Eigen::VectorXd solve_full_rank(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double rank_tol = 1e-12) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(rank_tol);
  if (qr.rank() < A.cols())
    throw Error(ErrorKind::SingularJacobian, "matrix is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                                                 std::to_string(A.cols()) + ")");
  return qr.solve(b);
}

inline Eigen::MatrixXd solve_full_rank(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double rank_tol = 1e-12) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(rank_tol);
  if (qr.rank() < A.cols())
    throw Error(ErrorKind::SingularJacobian, "matrix is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                                                 std::to_string(A.cols()) + ")");
  return qr.solve(B);
}

}  // namespace hbevent
