#pragma once

#include <string>
#include <vector>

#include "nhk/chart_system.hpp"

namespace nhk {

/// Chaplygin quotient of a ChartSystem by its translation group.
///
/// Reduced coordinates are the non-translated coordinates in chart order.
/// Base points of the quotient are represented on the slice where every
/// translated coordinate is zero.
class ReducedSystem {
 public:
  explicit ReducedSystem(ChartSystem sys, DiffEngine de = {});

  const ChartSystem& base() const { return sys_; }
  const DiffEngine& diff() const { return de_; }
  int dim() const { return static_cast<int>(shape_.size()); }
  int full_dim() const { return sys_.dim(); }
  int group_dim() const { return sys_.num_constraints; }
  const std::vector<int>& shape_indices() const { return shape_; }
  const std::vector<int>& group_indices() const { return sys_.group.translated; }
  std::vector<std::string> coords() const;
  std::vector<bool> periodic() const;

  /// Lift q̄ to Q; translated coordinates take the values in `fiber` (default 0).
  Vec embed(const Vec& qbar, const Vec& fiber = Vec()) const;
  Vec project(const Vec& q) const { return take(q, shape_); }

  /// A = C⁻¹W, with C the constraint columns over translated coordinates (m×n).
  Mat connection_matrix(const Vec& q) const;
  /// Horizontal-lift matrix (n×n̄): hl_d(v̄) = H v̄.
  Mat horizontal_matrix(const Vec& q) const;
  Mat metric(const Vec& qbar) const;
  double potential(const Vec& qbar) const;

  /// Antisymmetric n̄×n̄ matrix of Ξ at (q̄, p̄), lifted through embed(q̄, fiber).
  Mat xi_matrix(const Vec& qbar, const Vec& pbar, const Vec& fiber = Vec()) const;

 private:
  ChartSystem sys_;
  DiffEngine de_;
  std::vector<int> shape_;
};

Vec connection(const ReducedSystem& r, const Vec& q, const Vec& v);
Vec hl_d(const ReducedSystem& r, const Vec& q, const Vec& vbar);
Vec hl_m(const ReducedSystem& r, const Vec& q, const Vec& alphabar);
/// Hᵀp: the reduced covector of a full covector (inverse of hl_m on M).
Vec reduce_momentum(const ReducedSystem& r, const Vec& q, const Vec& p);
double reduced_hamiltonian(const ReducedSystem& r, const Vec& qbar, const Vec& pbar);
/// dA(u, w), one entry per group direction.
Vec curvature(const ReducedSystem& r, const Vec& q, const Vec& u, const Vec& w);
/// −A([Yʰ, Zʰ]) for the horizontal lifts of constant reduced fields y, z.
Vec curvature_by_bracket(const ReducedSystem& r, const Vec& q, const Vec& ybar, const Vec& zbar);
Vec momentum_map(const ReducedSystem& r, const Vec& q, const Vec& p);
double xi(const ReducedSystem& r, const Vec& qbar, const Vec& pbar, const Vec& ubar,
          const Vec& wbar);

struct PhaseRates {
  Vec qdot;
  Vec pdot;
};

/// Matrix of Ω̄ − Ξ on (q̄, p̄) vectors: (Ω̄ − Ξ)(U, V) = Uᵀ M V.
Mat almost_symplectic_matrix(const ReducedSystem& r, const Vec& qbar, const Vec& pbar);
/// Solves i_X (Ω̄ − Ξ) = dH̄.
PhaseRates reduced_vector_field(const ReducedSystem& r, const Vec& qbar, const Vec& pbar);

/// Canonical Hamiltonian field of a function on T*Q, by finite differences.
PhaseRates canonical_field(const std::function<double(const Vec&, const Vec&)>& h,
                           const Vec& q, const Vec& p, const DiffEngine& de = {});

Vec stack(const PhaseRates& r);

}  // namespace nhk
