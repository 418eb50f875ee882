#pragma once

#include <string>
#include <vector>

#include "nhk/hamiltonization.hpp"

namespace nhk {

/// Second reduction of a Chaplygin quotient by an abelian group K translating
/// some reduced coordinates, at momentum level μ. Points of J_K⁻¹(μ)/K are
/// represented on the slice where the K coordinates vanish.
struct SecondStageSetup {
  ReducedSystem rsys;
  std::vector<int> k_indices;  // into q̄
  std::vector<std::string> labels;
  Vec mu;

  SecondStageSetup(ReducedSystem r, std::vector<int> k, std::vector<std::string> labels, Vec mu);

  int k_dim() const { return static_cast<int>(k_indices.size()); }
  int tilde_dim() const { return rsys.dim() - k_dim(); }
  const std::vector<int>& tilde_indices() const { return tilde_; }
  std::vector<std::string> tilde_coords() const;
  Vec embed(const Vec& qtilde) const;  // q̄ with K coordinates 0
  Vec project(const Vec& qbar) const { return take(qbar, tilde_); }

 private:
  std::vector<int> tilde_;
};

struct TildeSystem {
  SecondStageSetup setup;
  Multiplier f_mu;
};

Vec k_momentum(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar);
Mat locked_inertia(const SecondStageSetup& s, const Vec& qbar);
Vec mechanical_connection(const SecondStageSetup& s, const Vec& qbar, const Vec& vbar);
Vec alpha_mu(const SecondStageSetup& s, const Vec& qbar);
/// Horizontal lift for the mechanical connection (n̄×ñ matrix).
Mat bar_horizontal_matrix(const SecondStageSetup& s, const Vec& qbar);
Vec bar_horizontal_lift_mom(const SecondStageSetup& s, const Vec& qbar, const Vec& ptilde);

/// dα_μ on lifts of ũ, w̃ (matrix form). Throws NotBasic if dα_μ sees verticals.
Mat b_k_mu_matrix(const SecondStageSetup& s, const Vec& qtilde);
double b_k_mu(const SecondStageSetup& s, const Vec& qtilde, const Vec& ut, const Vec& wt);
/// Largest |dα_μ(η, ·)| over K generators η.
double b_k_mu_vertical_residual(const SecondStageSetup& s, const Vec& qbar);
/// Largest |Ξ(η, ·)| over K generators η (Condition II).
double xi_vertical_residual(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar);

Vec shift(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar);
Vec unshift(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar);

struct TildePoint {
  Vec q;
  Vec p;
};

/// Throws WrongLevel when |J_K − μ| > 1e-9.
TildePoint phi_mu(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar);
PhasePoint phi_mu_inverse(const SecondStageSetup& s, const Vec& qtilde, const Vec& ptilde);

TildeSystem tilde_assemble(const SecondStageSetup& s, Multiplier f_mu);

double tilde_hamiltonian(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde);
Mat tilde_xi_matrix(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde);

/// X̃_μ by pushing X̄ forward through φ_μ.
PhaseRates tilde_vector_field(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde);
/// X̃_μ by solving i_X (Ω̃ − B − Ξ̃) = dH̃.
PhaseRates tilde_vector_field_solve(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde);

/// Matrix of df∧Θ̃ − f²(B + Ψ̃*_{1/f}Ξ̃) on base vectors.
Mat second_sufficient_matrix(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde);
double second_sufficient_residual(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde,
                                  const Vec& ut, const Vec& wt);
double second_chaplygin_hamiltonian(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde);

/// Divergence of X̃_μ with respect to f_μ^{ñ−1} Λ̃.
double tilde_measure_divergence(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde);

}  // namespace nhk
