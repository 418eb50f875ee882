#include "nhk/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace nhk {

namespace {

// Cholesky alone accepts some badly conditioned matrices; also insist on a
// sane pivot ratio so near-singular inputs surface as errors.
Eigen::LLT<Mat> checked_llt(const Mat& a, ErrorKind kind) {
  if (a.rows() != a.cols()) fail(kind, "matrix is not square");
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) fail(kind, "matrix is not positive definite");
  const auto d = llt.matrixLLT().diagonal();
  if (d.size() > 0) {
    const double lo = d.minCoeff(), hi = d.maxCoeff();
    if (!(lo > 0.0) || lo * lo < 1e-14 * hi * hi)
      fail(kind, "matrix is numerically singular");
  }
  return llt;
}

Eigen::FullPivLU<Mat> checked_lu(const Mat& a, ErrorKind kind) {
  if (a.rows() != a.cols()) fail(kind, "matrix is not square");
  Eigen::FullPivLU<Mat> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) fail(kind, "matrix is singular");
  return lu;
}

}  // namespace

Vec spd_solve(const Mat& a, const Vec& b, ErrorKind kind) {
  if (a.rows() == 0) return Vec(0);
  return checked_llt(a, kind).solve(b);
}

Mat spd_solve(const Mat& a, const Mat& b, ErrorKind kind) {
  if (a.rows() == 0) return Mat(0, b.cols());
  return checked_llt(a, kind).solve(b);
}

Vec lu_solve(const Mat& a, const Vec& b, ErrorKind kind) {
  if (a.rows() == 0) return Vec(0);
  return checked_lu(a, kind).solve(b);
}

Mat lu_solve(const Mat& a, const Mat& b, ErrorKind kind) {
  if (a.rows() == 0) return Mat(0, b.cols());
  return checked_lu(a, kind).solve(b);
}

double smallest_eigenvalue(const Mat& symmetric) {
  if (symmetric.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Vec take(const Vec& v, const std::vector<int>& idx) {
  Vec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

Mat take_rows(const Mat& a, const std::vector<int>& idx) {
  Mat out(static_cast<Eigen::Index>(idx.size()), a.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = a.row(idx[i]);
  return out;
}

Mat take_cols(const Mat& a, const std::vector<int>& idx) {
  Mat out(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(i) = a.col(idx[i]);
  return out;
}

std::vector<int> complement(int n, const std::vector<int>& idx) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) out.push_back(i);
  return out;
}

}  // namespace nhk
