#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nhk/error.hpp"

namespace nhk {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Cholesky solve; throws `kind` when a is not numerically SPD.
Vec spd_solve(const Mat& a, const Vec& b, ErrorKind kind = ErrorKind::SingularMetric);
Mat spd_solve(const Mat& a, const Mat& b, ErrorKind kind = ErrorKind::SingularMetric);

/// Square solve by full-pivot LU; throws `kind` on (relative) rank loss.
Vec lu_solve(const Mat& a, const Vec& b, ErrorKind kind);
Mat lu_solve(const Mat& a, const Mat& b, ErrorKind kind);

double smallest_eigenvalue(const Mat& symmetric);

/// Rows `idx` of v.
Vec take(const Vec& v, const std::vector<int>& idx);
Mat take_rows(const Mat& a, const std::vector<int>& idx);
Mat take_cols(const Mat& a, const std::vector<int>& idx);

/// Complement of idx in [0, n), ascending.
std::vector<int> complement(int n, const std::vector<int>& idx);

}  // namespace nhk
