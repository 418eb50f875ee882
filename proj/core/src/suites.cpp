#include "nhk/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nhk {

namespace {

struct Sup {
  double value = 0.0;
  void operator()(double x) { value = std::max(value, std::isfinite(x) ? std::abs(x) : INFINITY); }
};

std::string grid(int points, int draws, const DomainBox& box, std::uint64_t seed) {
  std::ostringstream s;
  s << points << " uniform points";
  if (draws > 1) s << " x " << draws << " fiber/tangent draws";
  s << " in {" << box.description << "}, seed " << seed;
  return s.str();
}

double pairing_defect(const ReducedSystem& r, const Vec& q, const Vec& a, const Vec& v) {
  return hl_m(r, q, a).dot(hl_d(r, q, v)) - a.dot(v);
}

}  // namespace

Report verify_suite(const SystemBundle& b, const SuiteConfig& cfg) {
  Report rep;
  Sampler rng(cfg.seed);
  const ReducedSystem& r = b.reduced;
  const ChartSystem& sys = b.system;
  const int n = sys.dim(), nb = r.dim();
  const double pb = b.momentum_bound;
  const auto qs = b.domain.sample(rng, cfg.samples);
  const std::string g1 = grid(cfg.samples, 1, b.domain, cfg.seed);
  const std::string gf = grid(cfg.samples, cfg.fiber_draws, b.domain, cfg.seed);

  const SystemCheck sc = check_system(sys, qs);
  rep.add("metric_spd", std::max(0.0, 1e-12 - sc.min_metric_eigenvalue), 0.0, g1);
  rep.add("metric_symmetry", sc.max_metric_asymmetry, 1e-12, g1);
  rep.add("constraints_independent", std::max(0.0, 1e-12 - sc.min_constraint_singular_value), 0.0, g1);
  rep.add("group_dimension", sc.dimension_count ? 0.0 : 1.0, 0.0, "structural");
  rep.add("group_invariance", sc.max_group_dependence, 1e-8, g1);
  rep.add("chaplygin_split", std::max(0.0, 1e-12 - sc.min_split_singular_value), 0.0, g1);

  Sup roundtrip, legendre_pair, pairing, in_m, invariance, xi_def, xi_anti, bracket, conn_kernel;
  Sup o_hlm, o_h, o_xi, o_hc, o_conn;
  for (const Vec& q : qs) {
    const Vec qb = r.project(q);
    for (int k = 0; k < cfg.fiber_draws; ++k) {
      const Vec p = rng.uniform(n, -pb, pb);
      const Vec v = rng.uniform(n, -1, 1);
      const Vec a = rng.uniform(nb, -pb, pb);
      const Vec u = rng.uniform(nb, -1, 1), w = rng.uniform(nb, -1, 1);
      roundtrip((legendre(sys, q, legendre_inverse(sys, q, p)) - p).cwiseAbs().maxCoeff());
      const Vec fl = legendre(sys, q, v);
      legendre_pair(hamiltonian(sys, q, fl) + lagrangian(sys, q, v) - fl.dot(v));
      pairing(pairing_defect(r, q, a, u));
      const Vec lifted = hl_m(r, q, a);
      in_m(m_projection_residual(sys, q, lifted));
      if (r.group_dim()) {
        const Vec shifted = r.embed(qb, rng.uniform(r.group_dim(), -3, 3));
        invariance((hl_m(r, shifted, a) - lifted).cwiseAbs().maxCoeff());
        const Mat x0 = r.xi_matrix(qb, a);
        const Mat x1 = r.xi_matrix(qb, a, rng.uniform(r.group_dim(), -3, 3));
        xi_def((x0 - x1).cwiseAbs().maxCoeff());
        xi_anti((x0 + x0.transpose()).cwiseAbs().maxCoeff());
        conn_kernel(connection(r, q, hl_d(r, q, u)).cwiseAbs().maxCoeff());
        if (k == 0)
          bracket((curvature(r, q, hl_d(r, q, u), hl_d(r, q, w)) - curvature_by_bracket(r, q, u, w))
                      .cwiseAbs().maxCoeff());
        if (b.oracles.connection) o_conn((connection(r, q, v) - b.oracles.connection(q, v)).cwiseAbs().maxCoeff());
      }
      const Vec a_true = b.display_scale(qb) * a;
      if (b.oracles.hl_m) o_hlm((hl_m(r, q, a_true) - b.oracles.hl_m(q, a)).cwiseAbs().maxCoeff());
      if (b.oracles.reduced_hamiltonian)
        o_h(reduced_hamiltonian(r, qb, a_true) - b.oracles.reduced_hamiltonian(qb, a));
      if (b.oracles.xi) o_xi((r.xi_matrix(qb, a_true) - b.oracles.xi(qb, a)).cwiseAbs().maxCoeff());
      if (b.oracles.chaplygin_hamiltonian && b.multiplier)
        o_hc(chaplygin_hamiltonian(r, *b.multiplier, qb, a_true) - b.oracles.chaplygin_hamiltonian(qb, a));
    }
  }
  rep.add("legendre_roundtrip", roundtrip.value, 1e-10, gf);
  rep.add("legendre_pairing", legendre_pair.value, 1e-10, gf);
  rep.add("pairing_lemma", pairing.value, 1e-10, gf);
  rep.add("hl_m_in_M", in_m.value, 1e-10, gf);
  if (r.group_dim()) {
    rep.add("hl_m_group_invariance", invariance.value, 1e-12, gf);
    rep.add("connection_kernel", conn_kernel.value, 1e-9, gf);
    rep.add("xi_well_defined", xi_def.value, 1e-10, gf);
    rep.add("xi_antisymmetric", xi_anti.value, 1e-12, gf);
    rep.add("curvature_bracket_identity", bracket.value, 1e-6, g1);
  }
  if (b.oracles.connection) rep.add("oracle_connection", o_conn.value, 1e-12, gf);
  if (b.oracles.hl_m) rep.add("oracle_hl_m", o_hlm.value, 1e-9, gf);
  if (b.oracles.reduced_hamiltonian) rep.add("oracle_reduced_hamiltonian", o_h.value, 1e-9, gf);
  if (b.oracles.xi) rep.add("oracle_xi", o_xi.value, 1e-9, gf);
  if (b.oracles.chaplygin_hamiltonian && b.multiplier)
    rep.add("oracle_chaplygin_hamiltonian", o_hc.value, 1e-9, gf);

  if (b.multiplier) {
    const Multiplier& f = *b.multiplier;
    const int coarse = std::max(1, cfg.samples / 10);
    Sup suff, canon, ns, div, grad;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const Vec qb = r.project(qs[i]);
      grad((f.d(qb) - r.diff().gradient(f.value, qb)).cwiseAbs().maxCoeff());
      for (int k = 0; k < cfg.fiber_draws; ++k) {
        const Vec a = rng.uniform(nb, -pb, pb);
        const Vec u = rng.uniform(nb, -1, 1), w = rng.uniform(nb, -1, 1);
        suff(sufficient_condition_residual(r, f, qb, a, u, w));
        if (k == 0) {
          ns(ns_condition_residual(r, f, qb, a).norm());
          const PhaseRates xc = hamiltonized_field(r, f, qb, a);
          const PhaseRates oc = canonical_field(
              [&](const Vec& x, const Vec& y) { return chaplygin_hamiltonian(r, f, x, y); }, qb, a, r.diff());
          canon((stack(xc) - stack(oc)).cwiseAbs().maxCoeff());
          if (static_cast<int>(i) < coarse)
            div(measure_divergence(r, MeasureDensity{nb - 1, f}, qb, a));
        }
      }
    }
    const std::string gc = grid(coarse, 1, b.domain, cfg.seed);
    rep.add("multiplier_gradient", grad.value, 1e-7, g1);
    rep.add("sufficient_condition", suff.value, 1e-9, gf);
    rep.add("ns_condition", ns.value, 1e-8, g1);
    rep.add("hamiltonized_vs_canonical", canon.value, 1e-7, g1);
    rep.add("invariant_measure_divergence", div.value, 1e-6, gc);
  }

  if (b.tilde) {
    const TildeSystem& t = *b.tilde;
    const SecondStageSetup& s = t.setup;
    const int nt = s.tilde_dim();
    const auto qts = b.tilde_domain.sample(rng, cfg.samples);
    const std::string gt = grid(cfg.samples, cfg.fiber_draws, b.tilde_domain, cfg.seed);
    const std::string gt1 = grid(cfg.samples, 1, b.tilde_domain, cfg.seed);
    Sup cond1, cond2, level, basic, suff2, routes, div2, appc, roundtrip2, oa, oak, oth, otx, othc;
    const int coarse = std::max(1, cfg.samples / 10);
    for (std::size_t i = 0; i < qts.size(); ++i) {
      const Vec& qt = qts[i];
      const Vec qb = s.embed(qt);
      level((k_momentum(s, qb, alpha_mu(s, qb)) - s.mu).cwiseAbs().maxCoeff());
      basic(b_k_mu_vertical_residual(s, qb));
      if (b.oracles.alpha_mu) oa((alpha_mu(s, qb) - b.oracles.alpha_mu(qb)).cwiseAbs().maxCoeff());
      for (int k = 0; k < cfg.fiber_draws; ++k) {
        const Vec a = rng.uniform(nb, -pb, pb);
        const Vec pt = rng.uniform(nt, -pb, pb);
        const Vec u = rng.uniform(nt, -1, 1), w = rng.uniform(nt, -1, 1);
        const Vec vb = rng.uniform(nb, -1, 1);
        for (int kk : s.k_indices)
          cond1(r.diff().directional([&](const Vec& x) { return reduced_hamiltonian(r, x, a); }, qb,
                                     Vec::Unit(nb, kk)));
        cond2(xi_vertical_residual(s, qb, a));
        suff2(second_sufficient_residual(t, qt, pt, u, w));
        const PhasePoint back = phi_mu_inverse(s, qt, pt);
        const TildePoint again = phi_mu(s, back.q, back.p);
        roundtrip2(std::max((again.q - qt).cwiseAbs().maxCoeff(), (again.p - pt).cwiseAbs().maxCoeff()));
        // φ̄₀ ∘ hl^{M̄} = id
        appc((take(bar_horizontal_lift_mom(s, qb, pt), s.tilde_indices()) - pt).cwiseAbs().maxCoeff());
        if (b.oracles.mechanical_connection)
          oak((mechanical_connection(s, qb, vb) - b.oracles.mechanical_connection(qb, vb)).cwiseAbs().maxCoeff());
        if (b.oracles.tilde_hamiltonian) oth(tilde_hamiltonian(t, qt, pt) - b.oracles.tilde_hamiltonian(qt, pt));
        if (b.oracles.tilde_xi) otx((tilde_xi_matrix(t, qt, pt) - b.oracles.tilde_xi(qt, pt)).cwiseAbs().maxCoeff());
        if (b.oracles.second_chaplygin_hamiltonian)
          othc(second_chaplygin_hamiltonian(t, qt, pt) - b.oracles.second_chaplygin_hamiltonian(qt, pt));
        if (k == 0) {
          routes((stack(tilde_vector_field(t, qt, pt)) - stack(tilde_vector_field_solve(t, qt, pt)))
                     .cwiseAbs().maxCoeff());
          if (static_cast<int>(i) < coarse) div2(tilde_measure_divergence(t, qt, pt));
        }
      }
    }
    rep.add("condition_I_k_invariance", cond1.value, 1e-9, gt);
    rep.add("condition_II_xi_vertical", cond2.value, 1e-10, gt);
    rep.add("condition_V_alpha_level", level.value, 1e-12, gt1);
    rep.add("b_k_mu_basic", basic.value, 1e-9, gt1);
    rep.add("second_sufficient_condition", suff2.value, 1e-8, gt);
    rep.add("phi_mu_roundtrip", roundtrip2.value, 1e-12, gt);
    rep.add("appendix_c_roundtrip", appc.value, 1e-10, gt);
    rep.add("tilde_field_routes_agree", routes.value, 1e-7, gt1);
    rep.add("tilde_invariant_measure_divergence", div2.value, 1e-6, grid(coarse, 1, b.tilde_domain, cfg.seed));
    if (b.oracles.alpha_mu) rep.add("oracle_alpha_mu", oa.value, 1e-9, gt1);
    if (b.oracles.mechanical_connection) rep.add("oracle_mechanical_connection", oak.value, 1e-9, gt);
    if (b.oracles.tilde_hamiltonian) rep.add("oracle_tilde_hamiltonian", oth.value, 1e-9, gt);
    if (b.oracles.tilde_xi) rep.add("oracle_tilde_xi", otx.value, 1e-9, gt);
    if (b.oracles.second_chaplygin_hamiltonian)
      rep.add("oracle_second_chaplygin_hamiltonian", othc.value, 1e-9, gt);
  }
  return rep;
}

Constants default_hj_constants(const SystemBundle& b) {
  if (b.name == "vrd") return {{"gamma_phi0", 1.0}, {"gamma_psi0", 1.0}};
  if (b.name == "knife-edge") return {{"gamma_phi0", 0.1}};
  if (b.name == "snakeboard") return {{"gamma_phi0", 0.5}, {"mu_psi", b.params.at("mu")}};
  return {};
}

double default_hj_energy(const SystemBundle& b, const Constants& c) {
  if (b.name == "vrd") return implied_energy(b, c);
  return 2.0;
}

HJOutcome hj_suite(const SystemBundle& b, const HJRequest& req, const SuiteConfig& cfg) {
  Constants c = default_hj_constants(b);
  for (const auto& [k, v] : req.constants) c[k] = v;
  const double energy = req.energy ? *req.energy : default_hj_energy(b, c);
  HJSolution sol = separable_solve(b, energy, c, req.branch);

  Sampler rng(cfg.seed);
  HJOutcome out{sol, {}, {}};
  Report& rep = out.report;
  const std::string g = grid(cfg.samples, 1, b.domain, cfg.seed);
  std::vector<Vec> qs = b.domain.sample(rng, cfg.samples);

  if (b.tilde) {
    const TildeSystem& t = *b.tilde;
    out.gamma = gamma_second_stage(t, sol);
    std::vector<Vec> qts;
    for (const Vec& q : qs) qts.push_back(t.setup.project(b.reduced.project(q)));
    rep.add("chaplygin_hj_residual",
            hj_residual([&](const Vec& q, const Vec& p) { return second_chaplygin_hamiltonian(t, q, p); }, sol, qts),
            1e-9, g);
    rep.add("dW_closedness", closedness_residual(sol.form, qts), 1e-8, g);
    Sup level;
    const OneFormField gb = bar_gamma_mu(t, sol);
    for (const Vec& q : qs) {
      const Vec qb = b.reduced.project(q);
      level((k_momentum(t.setup, qb, gb(qb)) - t.setup.mu).cwiseAbs().maxCoeff());
    }
    rep.add("bar_gamma_level", level.value, 1e-12, g);
  } else {
    if (!b.multiplier) fail(ErrorKind::Configuration, b.name + " has no Hamiltonizing multiplier");
    const Multiplier& f = *b.multiplier;
    out.gamma = gamma_first_stage(b.reduced, f, sol);
    std::vector<Vec> qbs;
    for (const Vec& q : qs) qbs.push_back(b.reduced.project(q));
    rep.add("chaplygin_hj_residual",
            hj_residual([&](const Vec& q, const Vec& p) { return chaplygin_hamiltonian(b.reduced, f, q, p); }, sol, qbs),
            1e-9, g);
    rep.add("dW_closedness", closedness_residual(sol.form, qbs), 1e-8, g);
  }
  const HJReport nh = nh_hj_verify(b.reduced, out.gamma, energy, qs);
  rep.add("nh_hj_energy", nh.energy, 1e-8, g);
  rep.add("nh_hj_dgamma_on_D", nh.dgamma, 1e-8, g);
  rep.add("nh_hj_m_membership", nh.m_membership, 1e-9, g);
  if (b.oracles.gamma) {
    Sup o;
    for (const Vec& q : qs) o((out.gamma(q) - b.oracles.gamma(q, energy, sol.constants)).cwiseAbs().maxCoeff());
    rep.add("oracle_gamma", o.value, 1e-9, g);
  }
  return out;
}

Vec default_reduced_momentum(const SystemBundle& b) {
  Vec p = Vec::Constant(b.reduced.dim(), 0.1);
  if (b.name == "vrd") p << 1.0, 1.0;
  if (b.name == "knife-edge") p << 0.05, 0.5;
  if (b.name == "snakeboard") p << 0.5, 0.1, b.params.at("mu");
  return p;
}

PhasePoint default_initial_state(const SystemBundle& b) {
  Vec q = 0.5 * (b.domain.lo + b.domain.hi);
  if (b.name == "vrd") q << 0.3, 0.0, 0.0, 0.2;
  if (b.name == "snakeboard") q << 0.0, 0.0, 0.0, std::numbers::pi / 2 - 0.2, 0.0;
  return {q, hl_m(b.reduced, q, default_reduced_momentum(b))};
}

Report conservation_suite(const SystemBundle& b, const PhasePoint& x0, const IntegratorConfig& cfg) {
  Report rep;
  std::ostringstream spec;
  spec << "full run, t_end " << cfg.t_end << ", dt " << cfg.dt;
  const Trajectory traj = integrate(b.system, x0, cfg);
  const Drift d = monitor(traj, b.system);
  rep.add("energy_drift", d.energy, 1e-7, spec.str());
  rep.add("constraint_drift", d.constraint, 1e-7, spec.str());
  rep.add("m_membership_drift", d.m_membership, 1e-7, spec.str());
  if (b.tilde) {
    const ReducedSystem& r = b.reduced;
    const int nb = r.dim();
    Vec z0(2 * nb);
    z0 << r.project(x0.q), reduce_momentum(r, x0.q, x0.p);
    Sup jk;
    const auto& s = b.tilde->setup;
    const Vec jk0 = k_momentum(s, z0.head(nb), z0.tail(nb));
    solve_ode([&](const Vec& z) { return stack(reduced_vector_field(r, z.head(nb), z.tail(nb))); }, z0,
              cfg.ode(), [&](double, const Vec& z) {
                jk((k_momentum(s, z.head(nb), z.tail(nb)) - jk0).cwiseAbs().maxCoeff());
              });
    rep.add("k_momentum_drift", jk.value, 1e-8, "reduced run, same schedule");
  }
  return rep;
}

}  // namespace nhk
