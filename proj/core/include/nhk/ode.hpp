#pragma once

#include <functional>

#include "nhk/linalg.hpp"

namespace nhk {

enum class Scheme { RK4, RK45 };

struct OdeOptions {
  Scheme scheme = Scheme::RK4;
  double dt = 1e-3;
  double t_end = 1.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  double dt_min = 1e-12;
};

using OdeRhs = std::function<Vec(const Vec&)>;
using OdeObserver = std::function<void(double, const Vec&)>;

/// Autonomous ODE solve on [0, t_end]. RK4 uses ceil(t_end/dt) equal steps so
/// the last sample lands exactly on t_end. `observe` sees the initial state and
/// every accepted step; `post_step` may modify the state after each step.
void solve_ode(const OdeRhs& rhs, Vec y0, const OdeOptions& opt, const OdeObserver& observe,
               const std::function<void(Vec&)>& post_step = {});

/// Final state only.
Vec flow(const OdeRhs& rhs, const Vec& y0, const OdeOptions& opt);

}  // namespace nhk
