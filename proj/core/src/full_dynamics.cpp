#include "nhk/full_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace nhk {

namespace {

FullRates rates(const ChartSystem& sys, const Vec& q, const Vec& p, const DiffEngine& de) {
  sys.guard(q);
  const Mat g = sys.metric(q);
  const Vec qdot = spd_solve(g, p);
  const Vec dhdq = de.gradient([&](const Vec& x) { return hamiltonian(sys, x, p); }, q);

  FullRates r{qdot, -dhdq, Vec(0)};
  const int m = sys.num_constraints;
  if (m == 0) return r;

  const Mat w = sys.constraints(q);
  const Mat wdot = de.directional(sys.constraints, q, qdot);
  const Mat gdot = de.directional(sys.metric, q, qdot);
  const Mat ginv_wt = spd_solve(g, Mat(w.transpose()));
  const Mat gram = w * ginv_wt;
  const Vec rhs = -wdot * qdot + w * spd_solve(g, Vec(gdot * qdot + dhdq));
  r.lambda = lu_solve(gram, rhs, ErrorKind::SingularConstraintGram);
  r.pdot += w.transpose() * r.lambda;
  return r;
}

}  // namespace

FullRates full_vector_field(const ChartSystem& sys, const PhasePoint& x, const DiffEngine& de,
                            double m_tol) {
  sys.guard(x.q);
  const double res = m_projection_residual(sys, x.q, x.p);
  if (res > m_tol)
    fail(ErrorKind::NotOnConstraintManifold,
         "momentum is off the constrained momentum space (residual " + std::to_string(res) + ")");
  return rates(sys, x.q, x.p, de);
}

Trajectory integrate(const ChartSystem& sys, const PhasePoint& x0, const IntegratorConfig& cfg,
                     const DiffEngine& de) {
  full_vector_field(sys, x0, de);  // precondition check
  const int n = sys.dim();
  Trajectory traj;
  traj.coord_names = sys.coords;

  auto rhs = [&](const Vec& y) {
    const FullRates r = rates(sys, y.head(n), y.tail(n), de);
    Vec d(2 * n);
    d << r.qdot, r.pdot;
    return d;
  };
  auto observe = [&](double t, const Vec& y) {
    const Vec q = y.head(n), p = y.tail(n);
    const FullRates r = rates(sys, q, p, de);
    traj.times.push_back(t);
    traj.states.push_back({q, p});
    traj.energy.push_back(hamiltonian(sys, q, p));
    traj.lambda.push_back(r.lambda);
    traj.constraint.push_back(constraint_residual(sys, q, r.qdot));
  };
  std::function<void(Vec&)> project;
  if (cfg.projection)
    project = [&](Vec& y) { y.tail(n) = project_to_m(sys, y.head(n), y.tail(n)); };

  Vec y0(2 * n);
  y0 << x0.q, x0.p;
  solve_ode(rhs, y0, cfg.ode(), observe, project);
  return traj;
}

Drift monitor(const Trajectory& traj, const ChartSystem& sys) {
  Drift d;
  if (traj.states.empty()) return d;
  const double h0 = traj.energy.front();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    d.energy = std::max(d.energy, std::abs(traj.energy[k] - h0));
    if (traj.constraint[k].size())
      d.constraint = std::max(d.constraint, traj.constraint[k].cwiseAbs().maxCoeff());
    d.m_membership = std::max(
        d.m_membership, m_projection_residual(sys, traj.states[k].q, traj.states[k].p));
  }
  return d;
}

}  // namespace nhk
