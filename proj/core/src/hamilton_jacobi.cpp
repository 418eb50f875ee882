#include "nhk/hamilton_jacobi.hpp"

#include <algorithm>
#include <cmath>

#include "nhk/forms.hpp"

namespace nhk {

namespace {

double get(const Constants& c, const char* key) {
  auto it = c.find(key);
  if (it == c.end()) fail(ErrorKind::InvalidConstants, std::string("missing constant '") + key + "'");
  return it->second;
}

double param(const SystemBundle& b, const char* key) { return b.params.at(key); }

double checked_sqrt(double x, const char* what) {
  if (x < 0.0) fail(ErrorKind::DomainViolation, std::string("negative radicand: ") + what);
  return std::sqrt(x);
}

}  // namespace

double hj_residual(const PhaseFunction& h, const HJSolution& sol, const std::vector<Vec>& grid) {
  double worst = 0.0;
  for (const Vec& q : grid) worst = std::max(worst, std::abs(h(q, sol.form(q)) - sol.energy));
  return worst;
}

double closedness_residual(const OneFormField& form, const std::vector<Vec>& grid,
                           const DiffEngine& de) {
  double worst = 0.0;
  for (const Vec& q : grid)
    worst = std::max(worst, exterior_derivative_matrix(form.eval, q, de).cwiseAbs().maxCoeff());
  return worst;
}

double implied_energy(const SystemBundle& b, const Constants& c) {
  if (b.name != "vrd") fail(ErrorKind::InvalidConstants, "energy is a free constant for " + b.name);
  const double m = param(b, "m"), R = param(b, "R"), I = param(b, "I"), J = param(b, "J");
  const double gp = get(c, "gamma_phi0"), gs = get(c, "gamma_psi0");
  return 0.5 * (gp * gp / J + (I + m * R * R) / (I * I) * gs * gs);
}

HJSolution separable_solve(const SystemBundle& b, double energy, const Constants& c, int branch) {
  const double sign = branch < 0 ? -1.0 : 1.0;
  HJSolution sol;
  sol.energy = energy;
  sol.constants = c;

  if (b.name == "vrd") {
    const double expected = implied_energy(b, c);
    if (std::abs(expected - energy) > 1e-10 * std::max(1.0, std::abs(energy)))
      fail(ErrorKind::InvalidConstants, "constants violate the energy relation");
    const double m = param(b, "m"), R = param(b, "R"), I = param(b, "I");
    const double gp = get(c, "gamma_phi0");
    // The example's ψ-momentum is the full-space p_ψ; in the quotient fiber
    // it is scaled by (I + mR²)/I.
    const double gs = (I + m * R * R) / I * get(c, "gamma_psi0");
    sol.form = {2, [gp, gs](const Vec&) { Vec v(2); v << gp, gs; return v; }, b.reduced_domain()};
    return sol;
  }

  if (b.name == "knife-edge") {
    const double m = param(b, "m"), J = param(b, "J"), grav = param(b, "g");
    const double sa = std::sin(param(b, "alpha"));
    const double gp = get(c, "gamma_phi0");
    const double a = m * (2 * energy - gp * gp / J), k = 2 * m * m * grav * sa;
    sol.form = {2,
                [=](const Vec& qb) {
                  Vec v(2);
                  v << gp * std::cos(qb[0]), sign * checked_sqrt(a + k * qb[1], "knife-edge dW/dx");
                  return v;
                },
                b.reduced_domain()};
    return sol;
  }

  if (b.name == "snakeboard") {
    const double mr2 = param(b, "m") * param(b, "r") * param(b, "r");
    const double J0 = param(b, "J0"), J1 = param(b, "J1");
    const double gp = get(c, "gamma_phi0");
    const double mu = c.count("mu_psi") ? c.at("mu_psi") : param(b, "mu");
    if (std::abs(mu - b.tilde->setup.mu[0]) > 1e-12)
      fail(ErrorKind::InvalidConstants, "mu_psi differs from the system's momentum level");
    const double rad = 2 * (energy - gp * gp / (4 * J1) - mu * mu / (2 * J0));
    if (rad < 0.0) fail(ErrorKind::InvalidConstants, "energy too small for the given constants");
    const double gt = sign * std::sqrt(rad);
    sol.constants["gamma_theta0"] = gt;
    sol.constants["mu_psi"] = mu;
    sol.form = {2,
                [=](const Vec& qt) {
                  const double s = std::sin(qt[1]);
                  Vec v(2);
                  v << gt, s / checked_sqrt(mr2 - J0 * s * s, "snakeboard f_mu") * gp;
                  return v;
                },
                b.tilde_domain};
    return sol;
  }
  fail(ErrorKind::InvalidConstants, "no separable family registered for " + b.name);
}

OneFormField gamma_first_stage(const ReducedSystem& r, const Multiplier& f, const HJSolution& sol) {
  OneFormField out;
  out.base_dim = r.full_dim();
  out.eval = [r, f, w = sol.form](const Vec& q) {
    const Vec qb = r.project(q);
    return hl_m(r, q, Vec(w(qb) / f(qb)));
  };
  return out;
}

OneFormField bar_gamma_mu(const TildeSystem& t, const HJSolution& sol) {
  OneFormField out;
  out.base_dim = t.setup.rsys.dim();
  out.eval = [t, w = sol.form](const Vec& qb) {
    const Vec qt = t.setup.project(qb);
    return Vec(bar_horizontal_lift_mom(t.setup, qb, Vec(w(qt) / t.f_mu(qt))) + alpha_mu(t.setup, qb));
  };
  return out;
}

OneFormField gamma_second_stage(const TildeSystem& t, const HJSolution& sol) {
  const OneFormField gb = bar_gamma_mu(t, sol);
  OneFormField out;
  out.base_dim = t.setup.rsys.full_dim();
  out.eval = [r = t.setup.rsys, gb](const Vec& q) { return hl_m(r, q, gb(r.project(q))); };
  return out;
}

HJReport nh_hj_verify(const ReducedSystem& r, const OneFormField& gamma, double energy,
                      const std::vector<Vec>& grid) {
  HJReport rep;
  const ChartSystem& sys = r.base();
  for (const Vec& q : grid) {
    const Vec p = gamma(q);
    rep.energy = std::max(rep.energy, std::abs(hamiltonian(sys, q, p) - energy));
    rep.m_membership = std::max(rep.m_membership, m_projection_residual(sys, q, p));
    const Mat h = r.horizontal_matrix(q);
    const Mat dg = exterior_derivative_matrix(gamma.eval, q, r.diff());
    rep.dgamma = std::max(rep.dgamma, (h.transpose() * dg * h).cwiseAbs().maxCoeff());
  }
  return rep;
}

Trajectory integrate_via_gamma(const ChartSystem& sys, const OneFormField& gamma, const Vec& q0,
                               double t_end, double dt) {
  Trajectory traj;
  traj.coord_names = sys.coords;
  auto rhs = [&](const Vec& q) {
    sys.guard(q);
    return legendre_inverse(sys, q, gamma(q));
  };
  auto observe = [&](double t, const Vec& q) {
    const Vec p = gamma(q);
    traj.times.push_back(t);
    traj.states.push_back({q, p});
    traj.energy.push_back(hamiltonian(sys, q, p));
    traj.lambda.push_back(Vec(0));
    traj.constraint.push_back(constraint_residual(sys, q, legendre_inverse(sys, q, p)));
  };
  solve_ode(rhs, q0, OdeOptions{Scheme::RK4, dt, t_end}, observe);
  return traj;
}

}  // namespace nhk
