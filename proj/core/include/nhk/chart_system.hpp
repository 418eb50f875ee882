#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nhk/diff.hpp"

namespace nhk {

/// Abelian group acting by translation of the listed coordinates.
struct GroupAction {
  std::vector<int> translated;
  std::vector<std::string> labels;

  int dim() const { return static_cast<int>(translated.size()); }
};

/// A nonholonomic mechanical system in one global chart.
struct ChartSystem {
  std::string name;
  std::vector<std::string> coords;
  std::vector<bool> periodic;
  std::function<Mat(const Vec&)> metric;
  std::function<double(const Vec&)> potential;
  /// m×n matrix whose rows are the constraint covectors ω^s(q).
  std::function<Mat(const Vec&)> constraints;
  int num_constraints = 0;
  GroupAction group;
  /// Throws DomainViolation off the chart domain; may be empty.
  std::function<void(const Vec&)> domain_guard;

  int dim() const { return static_cast<int>(coords.size()); }
  void guard(const Vec& q) const {
    if (domain_guard) domain_guard(q);
  }
};

struct PhasePoint {
  Vec q;
  Vec p;
};

Vec legendre(const ChartSystem& sys, const Vec& q, const Vec& v);
Vec legendre_inverse(const ChartSystem& sys, const Vec& q, const Vec& p);
double hamiltonian(const ChartSystem& sys, const Vec& q, const Vec& p);
double lagrangian(const ChartSystem& sys, const Vec& q, const Vec& v);
Vec constraint_residual(const ChartSystem& sys, const Vec& q, const Vec& v);

/// |W g⁻¹ p|: zero iff p lies in the constrained momentum space M.
double m_projection_residual(const ChartSystem& sys, const Vec& q, const Vec& p);

/// Least-squares projection of p onto the fiber of M over q (g⁻¹-orthogonal).
Vec project_to_m(const ChartSystem& sys, const Vec& q, const Vec& p);

struct SystemCheck {
  double min_metric_eigenvalue = 0;
  double max_metric_asymmetry = 0;
  double min_constraint_singular_value = 0;
  double max_group_dependence = 0;  // sup |∂_a coefficient| over translated a
  double min_split_singular_value = 0;
  bool dimension_count = false;
  bool ok() const;
};

/// Checks the structural invariants of a system at the given sample points.
SystemCheck check_system(const ChartSystem& sys, const std::vector<Vec>& samples,
                         const DiffEngine& de = {});

}  // namespace nhk
