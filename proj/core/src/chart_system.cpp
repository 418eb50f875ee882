#include "nhk/chart_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhk {

namespace {

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) fail(ErrorKind::DomainViolation, std::string("non-finite ") + what);
}

}  // namespace

Vec legendre(const ChartSystem& sys, const Vec& q, const Vec& v) {
  require_finite(q, "configuration");
  require_finite(v, "velocity");
  return sys.metric(q) * v;
}

Vec legendre_inverse(const ChartSystem& sys, const Vec& q, const Vec& p) {
  require_finite(q, "configuration");
  require_finite(p, "momentum");
  return spd_solve(sys.metric(q), p, ErrorKind::SingularMetric);
}

double hamiltonian(const ChartSystem& sys, const Vec& q, const Vec& p) {
  return 0.5 * p.dot(legendre_inverse(sys, q, p)) + sys.potential(q);
}

double lagrangian(const ChartSystem& sys, const Vec& q, const Vec& v) {
  return 0.5 * v.dot(sys.metric(q) * v) - sys.potential(q);
}

Vec constraint_residual(const ChartSystem& sys, const Vec& q, const Vec& v) {
  if (sys.num_constraints == 0) return Vec(0);
  return sys.constraints(q) * v;
}

double m_projection_residual(const ChartSystem& sys, const Vec& q, const Vec& p) {
  if (sys.num_constraints == 0) return 0.0;
  return constraint_residual(sys, q, legendre_inverse(sys, q, p)).norm();
}

Vec project_to_m(const ChartSystem& sys, const Vec& q, const Vec& p) {
  if (sys.num_constraints == 0) return p;
  const Mat w = sys.constraints(q);
  const Mat g = sys.metric(q);
  const Mat ginv_wt = spd_solve(g, Mat(w.transpose()));
  const Vec rhs = w * spd_solve(g, p);
  const Vec lam = spd_solve(Mat(w * ginv_wt), rhs, ErrorKind::SingularConstraintGram);
  return p - w.transpose() * lam;
}

bool SystemCheck::ok() const {
  return dimension_count && min_metric_eigenvalue > 0 && max_metric_asymmetry < 1e-12 &&
         min_constraint_singular_value > 1e-12 && max_group_dependence < 1e-8 &&
         min_split_singular_value > 1e-12;
}

SystemCheck check_system(const ChartSystem& sys, const std::vector<Vec>& samples,
                         const DiffEngine& de) {
  SystemCheck c;
  const int n = sys.dim();
  const int m = sys.num_constraints;
  c.dimension_count = sys.group.dim() == m && static_cast<int>(sys.periodic.size()) == n;
  c.min_metric_eigenvalue = std::numeric_limits<double>::infinity();
  c.min_constraint_singular_value = m ? std::numeric_limits<double>::infinity() : 1.0;
  c.min_split_singular_value = c.min_constraint_singular_value;

  for (const Vec& q : samples) {
    const Mat g = sys.metric(q);
    c.max_metric_asymmetry = std::max(c.max_metric_asymmetry, (g - g.transpose()).cwiseAbs().maxCoeff());
    c.min_metric_eigenvalue = std::min(c.min_metric_eigenvalue, smallest_eigenvalue(g));
    if (m) {
      const Mat w = sys.constraints(q);
      Eigen::JacobiSVD<Mat> svd(w);
      c.min_constraint_singular_value =
          std::min(c.min_constraint_singular_value, svd.singularValues().minCoeff());
      Eigen::JacobiSVD<Mat> split(take_cols(w, sys.group.translated));
      c.min_split_singular_value =
          std::min(c.min_split_singular_value, split.singularValues().minCoeff());
    }
    for (int a : sys.group.translated) {
      const Vec e = Vec::Unit(n, a);
      double dep = de.directional(sys.metric, q, e).cwiseAbs().maxCoeff();
      dep = std::max(dep, std::abs(de.directional(sys.potential, q, e)));
      if (m) dep = std::max(dep, de.directional(sys.constraints, q, e).cwiseAbs().maxCoeff());
      c.max_group_dependence = std::max(c.max_group_dependence, dep);
    }
  }
  return c;
}

}  // namespace nhk
