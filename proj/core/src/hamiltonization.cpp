#include "nhk/hamiltonization.hpp"

#include <algorithm>
#include <cmath>

#include "nhk/forms.hpp"

namespace nhk {

double Multiplier::operator()(const Vec& q) const {
  const double v = value(q);
  if (!(std::abs(v) > 1e-12)) fail(ErrorKind::ZeroMultiplier, "multiplier vanishes at sample point");
  return v;
}

Multiplier constant_multiplier(double c, int dim) {
  return {[c](const Vec&) { return c; }, [dim](const Vec&) { return Vec(Vec::Zero(dim)); },
          std::to_string(c)};
}

Multiplier numeric_multiplier(std::function<double(const Vec&)> value, std::string expr,
                              DiffEngine de) {
  auto grad = [value, de](const Vec& q) { return de.gradient(value, q); };
  return {std::move(value), grad, std::move(expr)};
}

Vec psi_f(const Multiplier& f, const Vec& qbar, const Vec& pbar, Direction dir) {
  const double v = f(qbar);
  return dir == Direction::Forward ? Vec(v * pbar) : Vec(pbar / v);
}

double chaplygin_hamiltonian(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                             const Vec& pbar) {
  return reduced_hamiltonian(r, qbar, psi_f(f, qbar, pbar, Direction::Inverse));
}

PhaseRates hamiltonized_field(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                              const Vec& pbar) {
  const double fv = f(qbar);
  const PhaseRates x = reduced_vector_field(r, qbar, pbar / fv);
  const Vec qdot = x.qdot / fv;
  // d/dt (f p) along X̄/f, with p = p̄/f.
  const Vec pdot = x.pdot + (f.d(qbar).dot(qdot) / fv) * pbar;
  return {qdot, pdot};
}

Mat sufficient_condition_matrix(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                                const Vec& pbar) {
  return wedge(f.d(qbar), pbar) - f(qbar) * r.xi_matrix(qbar, pbar);
}

double sufficient_condition_residual(const ReducedSystem& r, const Multiplier& f,
                                     const Vec& qbar, const Vec& pbar, const Vec& ubar,
                                     const Vec& wbar) {
  return ubar.dot(sufficient_condition_matrix(r, f, qbar, pbar) * wbar);
}

Vec ns_condition_residual(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                          const Vec& pbar) {
  const int nb = r.dim();
  const Mat s = sufficient_condition_matrix(r, f, qbar, pbar);
  const PhaseRates x = hamiltonized_field(r, f, qbar, pbar);
  Vec out = Vec::Zero(2 * nb);
  out.head(nb) = s.transpose() * x.qdot;
  return out;
}

double divergence(const std::function<Vec(const Vec&)>& field,
                  const std::function<double(const Vec&)>& density, const Vec& z,
                  const DiffEngine& de) {
  double tr = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    tr += de.directional([&](const Vec& x) { return field(x)[i]; }, z, Vec::Unit(z.size(), i));
  const Vec x = field(z);
  return tr + de.directional(density, z, x) / density(z);
}

double measure_divergence(const ReducedSystem& r, const MeasureDensity& rho, const Vec& qbar,
                          const Vec& pbar) {
  const int nb = r.dim();
  auto field = [&](const Vec& z) { return stack(reduced_vector_field(r, z.head(nb), z.tail(nb))); };
  Vec z(2 * nb);
  z << qbar, pbar;
  const double fv = rho.f(qbar);
  double tr = 0.0;
  const DiffEngine de = DiffEngine::nested();
  for (int i = 0; i < 2 * nb; ++i)
    tr += de.directional([&](const Vec& x) { return field(x)[i]; }, z, Vec::Unit(2 * nb, i));
  const Vec qdot = field(z).head(nb);
  return tr + rho.exponent * rho.f.d(qbar).dot(qdot) / fv;
}

double flow_conjugacy_check(const ReducedSystem& r, const Multiplier& f, const Vec& qbar0,
                            const Vec& pbar0, double t, double dt) {
  const int nb = r.dim();
  const OdeOptions opt{Scheme::RK4, dt, t};
  auto xc = [&](const Vec& z) { return stack(hamiltonized_field(r, f, z.head(nb), z.tail(nb))); };
  auto xf = [&](const Vec& z) {
    return Vec(stack(reduced_vector_field(r, z.head(nb), z.tail(nb))) / f(z.head(nb)));
  };
  Vec z0(2 * nb);
  z0 << qbar0, pbar0;
  const Vec a = flow(xc, z0, opt);
  Vec w0(2 * nb);
  w0 << qbar0, psi_f(f, qbar0, pbar0, Direction::Inverse);
  const Vec w = flow(xf, w0, opt);
  Vec b(2 * nb);
  b << w.head(nb), psi_f(f, w.head(nb), w.tail(nb), Direction::Forward);
  return (a - b).norm();
}

Mat conformal_form_matrix(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                          const Vec& pbar) {
  return f(qbar) * almost_symplectic_matrix(r, qbar, pbar);
}

double closedness_residual(const std::function<Mat(const Vec&)>& omega, const Vec& z,
                           const DiffEngine& de) {
  const Eigen::Index d = z.size();
  std::vector<Mat> partial;
  for (Eigen::Index a = 0; a < d; ++a) partial.push_back(de.directional(omega, z, Vec::Unit(d, a)));
  double worst = 0.0;
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a + 1; b < d; ++b)
      for (Eigen::Index c = b + 1; c < d; ++c)
        worst = std::max(worst, std::abs(partial[a](b, c) - partial[b](a, c) + partial[c](a, b)));
  return worst;
}

double conformal_form_residual(const ReducedSystem& r, const Multiplier& f, const Vec& qbar,
                               const Vec& pbar) {
  const int nb = r.dim();
  const PhaseRates x = reduced_vector_field(r, qbar, pbar);
  const Vec xf = stack(x) / f(qbar);
  Vec dh(2 * nb);
  dh << r.diff().gradient([&](const Vec& q) { return reduced_hamiltonian(r, q, pbar); }, qbar),
      r.diff().gradient([&](const Vec& p) { return reduced_hamiltonian(r, qbar, p); }, pbar);
  const double identity = (conformal_form_matrix(r, f, qbar, pbar).transpose() * xf - dh).norm();
  const double closed = closedness_residual(
      [&](const Vec& z) { return conformal_form_matrix(r, f, z.head(nb), z.tail(nb)); },
      [&] {
        Vec z(2 * nb);
        z << qbar, pbar;
        return z;
      }());
  return std::max(identity, closed);
}

}  // namespace nhk
