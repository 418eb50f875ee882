#pragma once

#include <cstdint>
#include <optional>

#include "nhk/hamilton_jacobi.hpp"
#include "nhk/report.hpp"

namespace nhk {

struct SuiteConfig {
  std::uint64_t seed = 1;
  int samples = 200;     // base points
  int fiber_draws = 20;  // momenta / tangent pairs per base point
};

/// Structural checks, oracle cross-checks and condition residuals.
Report verify_suite(const SystemBundle& b, const SuiteConfig& cfg);

struct HJRequest {
  std::optional<double> energy;
  Constants constants;
  int branch = +1;
};

struct HJOutcome {
  HJSolution solution;
  OneFormField gamma;
  Report report;
};

Constants default_hj_constants(const SystemBundle& b);
double default_hj_energy(const SystemBundle& b, const Constants& c);
HJOutcome hj_suite(const SystemBundle& b, const HJRequest& req, const SuiteConfig& cfg);

/// A state on M that keeps each built-in system inside its domain for t ≤ 5.
PhasePoint default_initial_state(const SystemBundle& b);
/// Reduced momentum of the default initial state.
Vec default_reduced_momentum(const SystemBundle& b);

/// Energy, constraint and M drift of a full run (plus J_K drift of a reduced
/// run when a second stage exists).
Report conservation_suite(const SystemBundle& b, const PhasePoint& x0, const IntegratorConfig& cfg);

}  // namespace nhk
