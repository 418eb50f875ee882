#pragma once

#include <string>

#include "nhk/ode.hpp"
#include "nhk/reduction.hpp"

namespace nhk {

/// Fiber-constant multiplier f on a base manifold, with its differential.
struct Multiplier {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::string expr;

  /// f(q); throws ZeroMultiplier when |f| <= 1e-12.
  double operator()(const Vec& q) const;
  Vec d(const Vec& q) const { return gradient(q); }
};

Multiplier constant_multiplier(double c, int dim);
/// Gradient taken by finite differences.
Multiplier numeric_multiplier(std::function<double(const Vec&)> value, std::string expr,
                              DiffEngine de = {});

struct MeasureDensity {
  int exponent = 0;
  Multiplier f;
};

enum class Direction { Forward, Inverse };

Vec psi_f(const Multiplier& f, const Vec& qbar, const Vec& pbar, Direction dir);

double chaplygin_hamiltonian(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                             const Vec& pbar);

/// X̄_C = TΨ_f · (X̄/f) at Ψ_{1/f}(point).
PhaseRates hamiltonized_field(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                              const Vec& pbar);

/// Matrix of df∧Θ̄ − fΞ on base vectors at (q̄, p̄).
Mat sufficient_condition_matrix(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                                const Vec& pbar);
double sufficient_condition_residual(const ReducedSystem& r, const Multiplier& f,
                                     const Vec& qbar, const Vec& pbar, const Vec& ubar,
                                     const Vec& wbar);
/// i_{X̄_C}(df∧Θ̄ − fΞ) as a covector on T*Q̄ (2n̄ entries).
Vec ns_condition_residual(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                          const Vec& pbar);

/// div of a field on R^d with respect to ρ·Lebesgue: tr DX + X[ρ]/ρ.
double divergence(const std::function<Vec(const Vec&)>& field,
                  const std::function<double(const Vec&)>& density, const Vec& z,
                  const DiffEngine& de = DiffEngine::nested());

/// Divergence of X̄ with respect to f^k Λ̄.
double measure_divergence(const ReducedSystem& r, const MeasureDensity& rho, const Vec& qbar,
                          const Vec& pbar);

/// |Φ^{X̄_C}_t(ᾱ₀) − Ψ_f Φ^{X̄/f}_t Ψ_{1/f}(ᾱ₀)| with RK4 at step dt.
double flow_conjugacy_check(const ReducedSystem& r, const Multiplier& f, const Vec& qbar0,
                            const Vec& pbar0, double t, double dt = 1e-4);

/// Max of |i_{X̄/f} Ω̄_f − dH̄| and the largest component of dΩ̄_f, Ω̄_f = f(Ω̄ − Ξ).
double conformal_form_residual(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                               const Vec& pbar);

/// Matrix of the closed-or-not two-form Ω̄_f on (q̄, p̄) vectors.
Mat conformal_form_matrix(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                          const Vec& pbar);

/// Largest |dω(e_a, e_b, e_c)| for a two-form field on R^d given by its matrix.
double closedness_residual(const std::function<Mat(const Vec&)>& omega, const Vec& z,
                           const DiffEngine& de = DiffEngine::nested());

}  // namespace nhk
