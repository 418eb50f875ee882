#include "nhk/forms.hpp"

namespace nhk {

double exterior_derivative_oneform(const OneFormFn& sigma, const Vec& q, const Vec& u,
                                   const Vec& w, const DiffEngine& de) {
  const double a = de.directional([&](const Vec& x) { return sigma(x).dot(w); }, q, u);
  const double b = de.directional([&](const Vec& x) { return sigma(x).dot(u); }, q, w);
  return a - b;
}

Mat exterior_derivative_matrix(const OneFormFn& sigma, const Vec& q, const DiffEngine& de) {
  // jac(j, i) = ∂_i σ_j
  const Mat jac = de.jacobian(sigma, q);
  return jac.transpose() - jac;
}

Mat wedge(const Vec& a, const Vec& b) { return a * b.transpose() - b * a.transpose(); }

double wedge_square(const Mat& omega, const Mat& frame4) {
  auto w = [&](int i, int j) { return frame4.col(i).dot(omega * frame4.col(j)); };
  return 2.0 * (w(0, 1) * w(2, 3) - w(0, 2) * w(1, 3) + w(0, 3) * w(1, 2));
}

Mat canonical_form(int n) {
  Mat m = Mat::Zero(2 * n, 2 * n);
  m.topRightCorner(n, n).setIdentity();
  m.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return m;
}

}  // namespace nhk
