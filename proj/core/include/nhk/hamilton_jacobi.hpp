#pragma once

#include <string>
#include <vector>

#include "nhk/full_dynamics.hpp"
#include "nhk/systems.hpp"

namespace nhk {

/// A covector field over a base manifold.
struct OneFormField {
  int base_dim = 0;
  std::function<Vec(const Vec&)> eval;
  DomainBox domain;

  Vec operator()(const Vec& q) const { return eval(q); }
};

struct HJSolution {
  OneFormField form;
  double energy = 0.0;
  Constants constants;
};

using PhaseFunction = std::function<double(const Vec& q, const Vec& p)>;

/// sup over the grid of |H(q, σ(q)) − E|.
double hj_residual(const PhaseFunction& h, const HJSolution& sol, const std::vector<Vec>& grid);

/// sup over the grid of the largest |∂_i σ_j − ∂_j σ_i|.
double closedness_residual(const OneFormField& form, const std::vector<Vec>& grid,
                           const DiffEngine& de = {});

/// Closed-form separated solutions of the Chaplygin H–J equation for the
/// built-in systems. `branch` picks the sign of the square root (+1 as in the
/// examples). The VRD energy relation is checked against the constants.
HJSolution separable_solve(const SystemBundle& b, double energy, const Constants& constants,
                           int branch = +1);

/// Energy implied by the constants where the family fixes it (VRD).
double implied_energy(const SystemBundle& b, const Constants& constants);

/// γ(q) = hl_m(dW̄(q̄)/f(q̄)).
OneFormField gamma_first_stage(const ReducedSystem& r, const Multiplier& f, const HJSolution& sol);

/// γ̄_μ(q̄) = hl^{M̄}(dW̃/f_μ) + α_μ, lifted by hl_m.
OneFormField bar_gamma_mu(const TildeSystem& t, const HJSolution& sol);
OneFormField gamma_second_stage(const TildeSystem& t, const HJSolution& sol);

struct HJReport {
  double energy = 0.0;        // sup |H∘γ − E|
  double dgamma = 0.0;        // sup |dγ(hl_d e_i, hl_d e_j)|
  double m_membership = 0.0;  // sup |W g⁻¹ γ|
};

HJReport nh_hj_verify(const ReducedSystem& r, const OneFormField& gamma, double energy,
                      const std::vector<Vec>& grid);

/// Integrates q̇ = g⁻¹γ(q); momenta along the result are γ(q(t)).
Trajectory integrate_via_gamma(const ChartSystem& sys, const OneFormField& gamma, const Vec& q0,
                               double t_end, double dt);

}  // namespace nhk
