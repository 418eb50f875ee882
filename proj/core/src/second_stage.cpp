#include "nhk/second_stage.hpp"

#include <algorithm>
#include <cmath>

#include "nhk/forms.hpp"

namespace nhk {

SecondStageSetup::SecondStageSetup(ReducedSystem r, std::vector<int> k,
                                   std::vector<std::string> l, Vec m)
    : rsys(std::move(r)), k_indices(std::move(k)), labels(std::move(l)), mu(std::move(m)) {
  for (int i : k_indices)
    if (i < 0 || i >= rsys.dim())
      fail(ErrorKind::InvalidParameters, "second-stage index out of range");
  if (mu.size() != k_dim()) fail(ErrorKind::InvalidParameters, "mu must have one entry per K direction");
  tilde_ = complement(rsys.dim(), k_indices);
}

std::vector<std::string> SecondStageSetup::tilde_coords() const {
  const auto all = rsys.coords();
  std::vector<std::string> out;
  for (int i : tilde_) out.push_back(all[i]);
  return out;
}

Vec SecondStageSetup::embed(const Vec& qtilde) const {
  Vec q = Vec::Zero(rsys.dim());
  for (int k = 0; k < tilde_dim(); ++k) q[tilde_[k]] = qtilde[k];
  return q;
}

Vec k_momentum(const SecondStageSetup& s, const Vec&, const Vec& pbar) {
  return take(pbar, s.k_indices);
}

Mat locked_inertia(const SecondStageSetup& s, const Vec& qbar) {
  const Mat gbar = s.rsys.metric(qbar);
  const Mat ii = take_cols(take_rows(gbar, s.k_indices), s.k_indices);
  if (smallest_eigenvalue(ii) <= 0.0) fail(ErrorKind::SingularInertia, "locked inertia is not SPD");
  return ii;
}

Vec mechanical_connection(const SecondStageSetup& s, const Vec& qbar, const Vec& vbar) {
  const Vec momentum = s.rsys.metric(qbar) * vbar;
  return spd_solve(locked_inertia(s, qbar), k_momentum(s, qbar, momentum), ErrorKind::SingularInertia);
}

Vec alpha_mu(const SecondStageSetup& s, const Vec& qbar) {
  const Mat gbar = s.rsys.metric(qbar);
  const Vec coeff = spd_solve(locked_inertia(s, qbar), s.mu, ErrorKind::SingularInertia);
  return take_cols(gbar, s.k_indices) * coeff;
}

Mat bar_horizontal_matrix(const SecondStageSetup& s, const Vec& qbar) {
  const Mat gbar = s.rsys.metric(qbar);
  const Mat ii = locked_inertia(s, qbar);
  const Mat coupling = take_cols(take_rows(gbar, s.k_indices), s.tilde_indices());
  const Mat vk = -spd_solve(ii, coupling, ErrorKind::SingularInertia);
  Mat h = Mat::Zero(s.rsys.dim(), s.tilde_dim());
  for (int k = 0; k < s.tilde_dim(); ++k) h(s.tilde_indices()[k], k) = 1.0;
  for (int a = 0; a < s.k_dim(); ++a) h.row(s.k_indices[a]) = vk.row(a);
  return h;
}

Vec bar_horizontal_lift_mom(const SecondStageSetup& s, const Vec& qbar, const Vec& ptilde) {
  const Mat h = bar_horizontal_matrix(s, qbar);
  const Mat gbar = s.rsys.metric(qbar);
  const Mat gt = h.transpose() * gbar * h;
  return gbar * (h * spd_solve(gt, ptilde));
}

namespace {

Mat dalpha_matrix(const SecondStageSetup& s, const Vec& qbar) {
  return exterior_derivative_matrix([&](const Vec& x) { return alpha_mu(s, x); }, qbar,
                                    s.rsys.diff());
}

double vertical_contraction(const SecondStageSetup& s, const Mat& form) {
  double worst = 0.0;
  for (int k : s.k_indices) worst = std::max(worst, form.row(k).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

double b_k_mu_vertical_residual(const SecondStageSetup& s, const Vec& qbar) {
  return vertical_contraction(s, dalpha_matrix(s, qbar));
}

double xi_vertical_residual(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar) {
  return vertical_contraction(s, s.rsys.xi_matrix(qbar, pbar));
}

Mat b_k_mu_matrix(const SecondStageSetup& s, const Vec& qtilde) {
  const Vec qbar = s.embed(qtilde);
  const Mat da = dalpha_matrix(s, qbar);
  const double vert = vertical_contraction(s, da);
  if (vert > 1e-9)
    fail(ErrorKind::NotBasic, "d alpha_mu does not annihilate K directions (" + std::to_string(vert) + ")");
  const Mat h = bar_horizontal_matrix(s, qbar);
  return h.transpose() * da * h;
}

double b_k_mu(const SecondStageSetup& s, const Vec& qtilde, const Vec& ut, const Vec& wt) {
  return ut.dot(b_k_mu_matrix(s, qtilde) * wt);
}

Vec shift(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar) {
  return pbar - alpha_mu(s, qbar);
}

Vec unshift(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar) {
  return pbar + alpha_mu(s, qbar);
}

TildePoint phi_mu(const SecondStageSetup& s, const Vec& qbar, const Vec& pbar) {
  const double off = (k_momentum(s, qbar, pbar) - s.mu).cwiseAbs().maxCoeff();
  if (off > 1e-9) fail(ErrorKind::WrongLevel, "point is not on the J_K = mu level set");
  return {s.project(qbar), take(shift(s, qbar, pbar), s.tilde_indices())};
}

PhasePoint phi_mu_inverse(const SecondStageSetup& s, const Vec& qtilde, const Vec& ptilde) {
  const Vec qbar = s.embed(qtilde);
  return {qbar, Vec(bar_horizontal_lift_mom(s, qbar, ptilde) + alpha_mu(s, qbar))};
}

TildeSystem tilde_assemble(const SecondStageSetup& s, Multiplier f_mu) {
  return TildeSystem{s, std::move(f_mu)};
}

double tilde_hamiltonian(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde) {
  const PhasePoint z = phi_mu_inverse(t.setup, qtilde, ptilde);
  return reduced_hamiltonian(t.setup.rsys, z.q, z.p);
}

Mat tilde_xi_matrix(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde) {
  const auto& s = t.setup;
  const PhasePoint z = phi_mu_inverse(s, qtilde, ptilde);
  const Mat h = bar_horizontal_matrix(s, z.q);
  return h.transpose() * s.rsys.xi_matrix(z.q, z.p) * h;
}

PhaseRates tilde_vector_field(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde) {
  const auto& s = t.setup;
  const PhasePoint z = phi_mu_inverse(s, qtilde, ptilde);
  const PhaseRates x = reduced_vector_field(s.rsys, z.q, z.p);
  const Vec dalpha = s.rsys.diff().directional([&](const Vec& q) { return alpha_mu(s, q); }, z.q, x.qdot);
  return {take(x.qdot, s.tilde_indices()), take(Vec(x.pdot - dalpha), s.tilde_indices())};
}

PhaseRates tilde_vector_field_solve(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde) {
  const int nt = t.setup.tilde_dim();
  const auto& de = t.setup.rsys.diff();
  Vec dh(2 * nt);
  dh << de.gradient([&](const Vec& q) { return tilde_hamiltonian(t, q, ptilde); }, qtilde),
      de.gradient([&](const Vec& p) { return tilde_hamiltonian(t, qtilde, p); }, ptilde);
  Mat m = canonical_form(nt);
  m.topLeftCorner(nt, nt) -= b_k_mu_matrix(t.setup, qtilde) + tilde_xi_matrix(t, qtilde, ptilde);
  const Vec x = lu_solve(Mat(m.transpose()), dh, ErrorKind::DegenerateAlmostSymplectic);
  return {x.head(nt), x.tail(nt)};
}

Mat second_sufficient_matrix(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde) {
  const double f = t.f_mu(qtilde);
  // Ξ̃ is semi-basic, so its pullback by the fiber map Ψ̃_{1/f} is Ξ̃ read at p̃/f.
  const Mat pulled = tilde_xi_matrix(t, qtilde, ptilde / f);
  return wedge(t.f_mu.d(qtilde), ptilde) - f * f * (b_k_mu_matrix(t.setup, qtilde) + pulled);
}

double second_sufficient_residual(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde,
                                  const Vec& ut, const Vec& wt) {
  return ut.dot(second_sufficient_matrix(t, qtilde, ptilde) * wt);
}

double second_chaplygin_hamiltonian(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde) {
  return tilde_hamiltonian(t, qtilde, ptilde / t.f_mu(qtilde));
}

double tilde_measure_divergence(const TildeSystem& t, const Vec& qtilde, const Vec& ptilde) {
  const int nt = t.setup.tilde_dim();
  auto field = [&](const Vec& z) { return stack(tilde_vector_field(t, z.head(nt), z.tail(nt))); };
  Vec z(2 * nt);
  z << qtilde, ptilde;
  const DiffEngine de = DiffEngine::nested();
  double tr = 0.0;
  for (int i = 0; i < 2 * nt; ++i)
    tr += de.directional([&](const Vec& x) { return field(x)[i]; }, z, Vec::Unit(2 * nt, i));
  const Vec qdot = field(z).head(nt);
  return tr + (nt - 1) * t.f_mu.d(qtilde).dot(qdot) / t.f_mu(qtilde);
}

}  // namespace nhk
