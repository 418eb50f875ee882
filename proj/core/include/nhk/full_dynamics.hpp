#pragma once

#include <vector>

#include "nhk/chart_system.hpp"
#include "nhk/ode.hpp"

namespace nhk {

struct FullRates {
  Vec qdot;
  Vec pdot;
  Vec lambda;
};

/// Nonholonomic Hamilton equations with multipliers from the differentiated
/// constraint. Throws NotOnConstraintManifold when |W g⁻¹ p| > m_tol.
FullRates full_vector_field(const ChartSystem& sys, const PhasePoint& x,
                            const DiffEngine& de = {}, double m_tol = 1e-6);

struct IntegratorConfig {
  Scheme scheme = Scheme::RK4;
  double dt = 1e-3;
  double t_end = 1.0;
  bool projection = false;
  double rtol = 1e-10;
  double atol = 1e-12;
  double dt_min = 1e-12;

  OdeOptions ode() const { return {scheme, dt, t_end, rtol, atol, dt_min}; }
};

struct Trajectory {
  std::vector<std::string> coord_names;
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<double> energy;
  std::vector<Vec> lambda;
  std::vector<Vec> constraint;  // ω^s(q̇) per sample
};

Trajectory integrate(const ChartSystem& sys, const PhasePoint& x0, const IntegratorConfig& cfg,
                     const DiffEngine& de = {});

struct Drift {
  double energy = 0;
  double constraint = 0;
  double m_membership = 0;
};

Drift monitor(const Trajectory& traj, const ChartSystem& sys);

}  // namespace nhk
