#include <doctest.h>

#include <algorithm>

#include "nhk/forms.hpp"
#include "nhk/hamiltonization.hpp"
#include "nhk/systems.hpp"
#include "support.hpp"

using namespace nhk;
using namespace nhk::test;

namespace {

std::vector<Vec> reduced_points(const SystemBundle& b, int count, std::uint64_t seed) {
  const DomainBox box = b.reduced_domain();
  Gen gen(seed);
  std::vector<Vec> out;
  while (static_cast<int>(out.size()) < count) {
    const Vec q = gen.in_box(box.lo, box.hi);
    if (!box.admissible || box.admissible(q)) out.push_back(q);
  }
  return out;
}

double knife_hc(const Vec& qb, const Vec& pb) {
  const double c = std::cos(qb[0]);
  return 0.5 * (pb[1] * pb[1] + pb[0] * pb[0] / (c * c)) - 9.81 * qb[1] * std::sin(pi / 6);
}

Mat full_xi(const ReducedSystem& r, const Vec& z) {
  const int nb = r.dim();
  Mat m = Mat::Zero(2 * nb, 2 * nb);
  m.topLeftCorner(nb, nb) = r.xi_matrix(z.head(nb), z.tail(nb));
  return m;
}

}  // namespace

TEST_CASE("psi_f") {
  const auto knife = build("knife-edge");
  const Multiplier& f = *knife.multiplier;
  CHECK(max_abs(psi_f(f, v({pi / 3, 0.5}), v({2, 2}), Direction::Forward) - v({1, 1})) < 1e-15);
  CHECK(max_abs(psi_f(f, v({pi / 3, 0.5}), v({1, 1}), Direction::Inverse) - v({2, 2})) < 1e-15);
  const Multiplier one = constant_multiplier(1.0, 2);
  CHECK(max_abs(psi_f(one, v({0.1, 0.2}), v({3, 4}), Direction::Forward) - v({3, 4})) == 0.0);

  Gen gen(1);
  for (const Vec& qb : reduced_points(knife, 100, 2)) {
    const Vec p = gen.vec(2, -2, 2);
    const Vec back = psi_f(f, qb, psi_f(f, qb, p, Direction::Inverse), Direction::Forward);
    CHECK(max_abs(back - p) < 1e-12);
  }
  try {
    psi_f(f, v({pi / 2, 0}), v({1, 1}), Direction::Inverse);
    FAIL("expected ZeroMultiplier");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroMultiplier);
  }
}

TEST_CASE("multiplier gradients match finite differences") {
  const DiffEngine de;
  const auto knife = build("knife-edge");
  for (const Vec& qb : reduced_points(knife, 50, 3))
    CHECK(max_abs(knife.multiplier->d(qb) - de.gradient(knife.multiplier->value, qb)) < 1e-7);
  const auto snake = build("snakeboard");
  const Multiplier& fm = snake.tilde->f_mu;
  Gen gen(4);
  for (int i = 0; i < 50; ++i) {
    const Vec qt = gen.in_box(snake.tilde_domain.lo, snake.tilde_domain.hi);
    CHECK(max_abs(fm.d(qt) - de.gradient(fm.value, qt)) < 1e-7);
  }
}

TEST_CASE("chaplygin hamiltonian") {
  const auto knife = build("knife-edge");
  const Multiplier& f = *knife.multiplier;
  Gen gen(5);
  Sup diff;
  for (const Vec& qb : reduced_points(knife, 100, 6)) {
    const Vec p = gen.vec(2, -2, 2);
    diff(chaplygin_hamiltonian(knife.reduced, f, qb, p) - knife_hc(qb, p));
    CHECK(chaplygin_hamiltonian(knife.reduced, f, qb, Vec::Zero(2)) ==
          doctest::Approx(knife.reduced.potential(qb)).epsilon(1e-14));
  }
  CHECK(diff.value < 1e-9);

  const auto vrd = build("vrd");
  for (const Vec& qb : reduced_points(vrd, 20, 7)) {
    const Vec p = gen.vec(2, -2, 2);
    CHECK(chaplygin_hamiltonian(vrd.reduced, *vrd.multiplier, qb, p) == reduced_hamiltonian(vrd.reduced, qb, p));
  }
}

TEST_CASE("hamiltonized field equals the canonical field of the chaplygin hamiltonian") {
  for (const char* name : {"vrd", "knife-edge"}) {
    CAPTURE(name);
    const auto b = build(name);
    const ReducedSystem& r = b.reduced;
    const Multiplier& f = *b.multiplier;
    Gen gen(8);
    Sup diff;
    for (const Vec& qb : reduced_points(b, 100, 9)) {
      const Vec p = gen.vec(2, -2, 2);
      const PhaseRates xc = hamiltonized_field(r, f, qb, p);
      const PhaseRates oc =
          canonical_field([&](const Vec& a, const Vec& c) { return chaplygin_hamiltonian(r, f, a, c); }, qb, p);
      diff(max_abs(stack(xc) - stack(oc)));
    }
    CHECK(diff.value < 1e-7);
  }
  // f ≡ 1 gives back the reduced field
  const auto knife = build("knife-edge");
  const Vec qb = v({0.5, 1}), p = v({0.3, -0.2});
  CHECK(max_abs(stack(hamiltonized_field(knife.reduced, constant_multiplier(1, 2), qb, p)) -
                stack(reduced_vector_field(knife.reduced, qb, p))) < 1e-15);
}

TEST_CASE("sufficient condition") {
  const auto knife = build("knife-edge");
  const ReducedSystem& r = knife.reduced;
  Gen gen(10);
  Sup good, bad_match;
  double bad_max = 0;
  const Multiplier one = constant_multiplier(1.0, 2);
  for (const Vec& qb : reduced_points(knife, 200, 11)) {
    for (int k = 0; k < 5; ++k) {
      const Vec p = gen.vec(2, -2, 2), u = gen.vec(2, -1, 1), w = gen.vec(2, -1, 1);
      good(sufficient_condition_residual(r, *knife.multiplier, qb, p, u, w));
      const double bad = sufficient_condition_residual(r, one, qb, p, u, w);
      // with df = 0 the residual is −Ξ(ū, w̄), Ξ = p_x tanφ dx∧dφ
      const double xi_closed = p[1] * std::tan(qb[0]) * (u[1] * w[0] - u[0] * w[1]);
      bad_match(std::abs(bad) - std::abs(xi_closed));
      bad_max = std::max(bad_max, std::abs(bad));
    }
  }
  CHECK(good.value < 1e-9);
  CHECK(bad_match.value < 1e-9);
  CHECK(bad_max > 0.1);

  const auto vrd = build("vrd");
  for (const Vec& qb : reduced_points(vrd, 20, 12))
    // Ξ comes from finite-difference curvature, so zero only up to rounding
    CHECK(std::abs(sufficient_condition_residual(vrd.reduced, *vrd.multiplier, qb, gen.vec(2, -2, 2),
                                                 gen.vec(2, -1, 1), gen.vec(2, -1, 1))) < 1e-10);
}

TEST_CASE("necessary and sufficient condition") {
  const auto knife = build("knife-edge");
  Gen gen(13);
  Sup knife_ns;
  for (const Vec& qb : reduced_points(knife, 100, 14))
    knife_ns(ns_condition_residual(knife.reduced, *knife.multiplier, qb, gen.vec(2, -2, 2)).norm());
  CHECK(knife_ns.value < 1e-8);

  const auto vrd = build("vrd");
  CHECK(ns_condition_residual(vrd.reduced, *vrd.multiplier, v({0.3, 0.1}), v({1, 2})).norm() < 1e-10);

  // the snakeboard cannot be Hamiltonized at the first stage; no f(φ) works
  const auto snake = build("snakeboard");
  const std::vector<Multiplier> candidates{
      constant_multiplier(1.0, 3),
      Multiplier{[](const Vec& q) { return std::sin(q[1]) / std::sqrt(2 - std::sin(q[1]) * std::sin(q[1])); },
                 [](const Vec& q) {
                   const double d = 2 - std::sin(q[1]) * std::sin(q[1]);
                   return v({0, 2 * std::cos(q[1]) / (d * std::sqrt(d)), 0});
                 },
                 "sin/sqrt"},
      numeric_multiplier([](const Vec& q) { return 2 + std::cos(q[1]); }, "2 + cos(phi)"),
      numeric_multiplier([](const Vec& q) { return std::sin(q[1]); }, "sin(phi)"),
  };
  for (const Multiplier& f : candidates) {
    CAPTURE(f.expr);
    std::vector<double> res;
    for (const Vec& qb : reduced_points(snake, 50, 15)) {
      Vec p = gen.vec(3, -2, 2);
      if (std::abs(p[0] - p[2]) < 0.2) p[0] += 0.5;
      res.push_back(ns_condition_residual(snake.reduced, f, qb, p).norm());
    }
    std::sort(res.begin(), res.end());
    CHECK(res[res.size() / 10] > 1e-3);
  }
}

TEST_CASE("invariant measure") {
  const auto knife = build("knife-edge");
  const ReducedSystem& r = knife.reduced;
  Gen gen(16);
  Sup good;
  double wrong_min = INFINITY;
  for (const Vec& qb : reduced_points(knife, 50, 17)) {
    Vec p = gen.vec(2, -2, 2);
    if (std::abs(p[0]) < 0.2) p[0] = 0.5;
    good(measure_divergence(r, MeasureDensity{1, *knife.multiplier}, qb, p));
    wrong_min = std::min(wrong_min, std::abs(measure_divergence(r, MeasureDensity{2, *knife.multiplier}, qb, p)));
  }
  CHECK(good.value < 1e-6);
  CHECK(wrong_min > 1e-3);

  const auto vrd = build("vrd");
  for (const Vec& qb : reduced_points(vrd, 20, 18))
    CHECK(std::abs(measure_divergence(vrd.reduced, MeasureDensity{1, *vrd.multiplier}, qb, gen.vec(2, -2, 2))) < 1e-8);
}

TEST_CASE("divergence identity on random fields") {
  Gen gen(19);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat a = Mat::NullaryExpr(3, 3, [&] { return gen.real(-1, 1); });
    const Vec c = gen.vec(3, -1, 1), w = gen.vec(3, -0.5, 0.5), k = gen.vec(3, -1, 1);
    const auto X = [=](const Vec& z) {
      Vec out(3);
      for (int i = 0; i < 3; ++i) out[i] = std::sin(a.row(i).dot(z)) + c[i] * z[i] * z[(i + 1) % 3];
      return out;
    };
    const auto f = [=](const Vec& z) { return 2 + std::sin(k.dot(z)); };
    const auto rho = [=](const Vec& z) { return std::exp(w.dot(z)); };
    const Vec z = gen.vec(3, -1, 1);
    const double lhs = divergence([&](const Vec& y) { return Vec(f(y) * X(y)); }, rho, z);
    const double rhs = f(z) * divergence(X, [&](const Vec& y) { return f(y) * rho(y); }, z);
    CHECK(std::abs(lhs - rhs) < 1e-6);
  }
}

TEST_CASE("wedge power of the rescaled canonical form") {
  Gen gen(20);
  const DiffEngine de;
  const Mat omega = canonical_form(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec k = gen.vec(2, -1, 1);
    const auto f = [=](const Vec& q) { return 1.5 + std::cos(k.dot(q)); };
    const auto psi = [&](const Vec& z) {
      Vec out(4);
      out << z.head(2), f(z.head(2)) * z.tail(2);
      return out;
    };
    const Vec z = gen.vec(4, -1, 1);
    const Mat dpsi = de.jacobian(psi, z);
    const Mat pulled = dpsi.transpose() * omega * dpsi;
    const Mat frame = Mat::NullaryExpr(4, 4, [&] { return gen.real(-1, 1); });
    const double fz = f(z.head(2));
    CHECK(std::abs(wedge_square(pulled, frame) - fz * fz * wedge_square(omega, frame)) < 1e-8);
  }
}

TEST_CASE("pullbacks by the fiber rescaling") {
  for (const char* name : {"knife-edge", "snakeboard"}) {
    CAPTURE(name);
    const auto b = build(name);
    const ReducedSystem& r = b.reduced;
    const int nb = r.dim();
    const Multiplier f = b.multiplier ? *b.multiplier
                                      : numeric_multiplier([](const Vec& q) { return 1.5 + std::sin(q[1]); }, "test");
    const DiffEngine de;
    Gen gen(21);
    Sup theta, xi_pull;
    for (const Vec& qb : reduced_points(b, 100, 22)) {
      Vec z(2 * nb);
      z << qb, gen.vec(nb, -2, 2);
      const auto psi = [&](const Vec& y) {
        Vec out(2 * nb);
        out << y.head(nb), y.tail(nb) / f(y.head(nb));
        return out;
      };
      const Mat dpsi = de.jacobian(psi, z);
      const double fz = f(qb);
      // Θ̄ = p dq as a covector on (q, p)
      Vec th_image(2 * nb), th_here(2 * nb);
      th_image << psi(z).tail(nb), Vec::Zero(nb);
      th_here << z.tail(nb), Vec::Zero(nb);
      theta(max_abs(Vec(dpsi.transpose() * th_image - th_here / fz)));
      xi_pull(max_abs(Mat(dpsi.transpose() * full_xi(r, psi(z)) * dpsi - full_xi(r, z) / fz)));
    }
    CHECK(theta.value < 1e-9);
    CHECK(xi_pull.value < 1e-9);
  }
}

TEST_CASE("flow conjugacy") {
  const auto knife = build("knife-edge");
  const Multiplier& f = *knife.multiplier;
  CHECK(flow_conjugacy_check(knife.reduced, f, v({0.6, 1}), v({0.1, 0.4}), 0.0) == 0.0);
  CHECK(flow_conjugacy_check(knife.reduced, f, v({0.6, 1}), v({0.1, 0.4}), 1.0, 1e-4) < 1e-6);
  const auto vrd = build("vrd");
  CHECK(flow_conjugacy_check(vrd.reduced, *vrd.multiplier, v({0.2, 0.4}), v({1, 1}), 2.0, 1e-3) < 1e-9);
}

TEST_CASE("chaplygin hamiltonian is conserved along the hamiltonized flow") {
  const auto knife = build("knife-edge");
  const ReducedSystem& r = knife.reduced;
  const Multiplier& f = *knife.multiplier;
  Vec z0(4);
  z0 << 0.6, 1.0, psi_f(f, v({0.6, 1.0}), v({0.05, 0.5}), Direction::Forward);
  const double h0 = chaplygin_hamiltonian(r, f, z0.head(2), z0.tail(2));
  Sup drift;
  solve_ode([&](const Vec& z) { return stack(hamiltonized_field(r, f, z.head(2), z.tail(2))); }, z0,
            OdeOptions{Scheme::RK4, 1e-3, 5.0},
            [&](double, const Vec& z) { drift(chaplygin_hamiltonian(r, f, z.head(2), z.tail(2)) - h0); });
  CHECK(drift.value < 1e-7);
}

TEST_CASE("conformal form") {
  const auto knife = build("knife-edge");
  Gen gen(23);
  Sup good;
  double bad_max = 0;
  for (const Vec& qb : reduced_points(knife, 30, 24)) {
    const Vec p = gen.vec(2, -2, 2);
    good(conformal_form_residual(knife.reduced, *knife.multiplier, qb, p));
    bad_max = std::max(bad_max, conformal_form_residual(knife.reduced, constant_multiplier(1, 2), qb, p));
  }
  CHECK(good.value < 1e-8);
  CHECK(bad_max > 1e-2);
  const auto vrd = build("vrd");
  CHECK(conformal_form_residual(vrd.reduced, *vrd.multiplier, v({0.1, 0.2}), v({1, -1})) < 1e-12);
}
