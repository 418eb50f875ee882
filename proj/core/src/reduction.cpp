#include "nhk/reduction.hpp"

#include "nhk/forms.hpp"

namespace nhk {

ReducedSystem::ReducedSystem(ChartSystem sys, DiffEngine de)
    : sys_(std::move(sys)), de_(de), shape_(complement(sys_.dim(), sys_.group.translated)) {
  if (sys_.group.dim() != sys_.num_constraints)
    fail(ErrorKind::InvalidParameters, "group dimension must equal the number of constraints");
}

std::vector<std::string> ReducedSystem::coords() const {
  std::vector<std::string> out;
  for (int i : shape_) out.push_back(sys_.coords[i]);
  return out;
}

std::vector<bool> ReducedSystem::periodic() const {
  std::vector<bool> out;
  for (int i : shape_) out.push_back(sys_.periodic[i]);
  return out;
}

Vec ReducedSystem::embed(const Vec& qbar, const Vec& fiber) const {
  Vec q = Vec::Zero(full_dim());
  for (int k = 0; k < dim(); ++k) q[shape_[k]] = qbar[k];
  if (fiber.size())
    for (int a = 0; a < group_dim(); ++a) q[group_indices()[a]] = fiber[a];
  return q;
}

Mat ReducedSystem::connection_matrix(const Vec& q) const {
  if (group_dim() == 0) return Mat(0, full_dim());
  sys_.guard(q);
  const Mat w = sys_.constraints(q);
  return lu_solve(take_cols(w, group_indices()), w, ErrorKind::SingularConstraintGram);
}

Mat ReducedSystem::horizontal_matrix(const Vec& q) const {
  Mat h = Mat::Zero(full_dim(), dim());
  for (int k = 0; k < dim(); ++k) h(shape_[k], k) = 1.0;
  if (group_dim() == 0) return h;
  const Mat a = connection_matrix(q);
  const Mat a_shape = take_cols(a, shape_);
  for (int s = 0; s < group_dim(); ++s) h.row(group_indices()[s]) = -a_shape.row(s);
  return h;
}

Mat ReducedSystem::metric(const Vec& qbar) const {
  const Vec q = embed(qbar);
  sys_.guard(q);
  const Mat h = horizontal_matrix(q);
  return h.transpose() * sys_.metric(q) * h;
}

double ReducedSystem::potential(const Vec& qbar) const { return sys_.potential(embed(qbar)); }

Mat ReducedSystem::xi_matrix(const Vec& qbar, const Vec& pbar, const Vec& fiber) const {
  const int nb = dim();
  if (group_dim() == 0) return Mat::Zero(nb, nb);
  const Vec q = embed(qbar, fiber);
  const Vec jm = momentum_map(*this, q, hl_m(*this, q, pbar));
  const Mat h = horizontal_matrix(q);
  Mat out = Mat::Zero(nb, nb);
  for (int a = 0; a < group_dim(); ++a) {
    const Mat da = exterior_derivative_matrix(
        [&](const Vec& x) { return Vec(connection_matrix(x).row(a).transpose()); }, q, de_);
    out += jm[a] * (h.transpose() * da * h);
  }
  return out;
}

Vec connection(const ReducedSystem& r, const Vec& q, const Vec& v) {
  return r.connection_matrix(q) * v;
}

Vec hl_d(const ReducedSystem& r, const Vec& q, const Vec& vbar) {
  return r.horizontal_matrix(q) * vbar;
}

Vec hl_m(const ReducedSystem& r, const Vec& q, const Vec& alphabar) {
  const Mat h = r.horizontal_matrix(q);
  const Mat g = r.base().metric(q);
  const Mat gbar = h.transpose() * g * h;
  return g * (h * spd_solve(gbar, alphabar));
}

Vec reduce_momentum(const ReducedSystem& r, const Vec& q, const Vec& p) {
  return r.horizontal_matrix(q).transpose() * p;
}

double reduced_hamiltonian(const ReducedSystem& r, const Vec& qbar, const Vec& pbar) {
  return 0.5 * pbar.dot(spd_solve(r.metric(qbar), pbar)) + r.potential(qbar);
}

Vec curvature(const ReducedSystem& r, const Vec& q, const Vec& u, const Vec& w) {
  const auto& de = r.diff();
  const Vec a = de.directional([&](const Vec& x) { return Vec(r.connection_matrix(x) * w); }, q, u);
  const Vec b = de.directional([&](const Vec& x) { return Vec(r.connection_matrix(x) * u); }, q, w);
  return a - b;
}

Vec curvature_by_bracket(const ReducedSystem& r, const Vec& q, const Vec& ybar, const Vec& zbar) {
  const auto& de = r.diff();
  auto y = [&](const Vec& x) { return hl_d(r, x, ybar); };
  auto z = [&](const Vec& x) { return hl_d(r, x, zbar); };
  const Vec bracket = de.directional(z, q, y(q)) - de.directional(y, q, z(q));
  return -connection(r, q, bracket);
}

Vec momentum_map(const ReducedSystem& r, const Vec& /*q*/, const Vec& p) {
  return take(p, r.group_indices());
}

double xi(const ReducedSystem& r, const Vec& qbar, const Vec& pbar, const Vec& ubar,
          const Vec& wbar) {
  return ubar.dot(r.xi_matrix(qbar, pbar) * wbar);
}

Mat almost_symplectic_matrix(const ReducedSystem& r, const Vec& qbar, const Vec& pbar) {
  const int nb = r.dim();
  Mat m = canonical_form(nb);
  m.topLeftCorner(nb, nb) -= r.xi_matrix(qbar, pbar);
  return m;
}

PhaseRates reduced_vector_field(const ReducedSystem& r, const Vec& qbar, const Vec& pbar) {
  const int nb = r.dim();
  const auto& de = r.diff();
  Vec dh(2 * nb);
  dh << de.gradient([&](const Vec& x) { return reduced_hamiltonian(r, x, pbar); }, qbar),
      spd_solve(r.metric(qbar), pbar);
  const Mat m = almost_symplectic_matrix(r, qbar, pbar);
  const Vec x = lu_solve(Mat(m.transpose()), dh, ErrorKind::DegenerateAlmostSymplectic);
  return {x.head(nb), x.tail(nb)};
}

PhaseRates canonical_field(const std::function<double(const Vec&, const Vec&)>& h,
                           const Vec& q, const Vec& p, const DiffEngine& de) {
  return {de.gradient([&](const Vec& x) { return h(q, x); }, p),
          -de.gradient([&](const Vec& x) { return h(x, p); }, q)};
}

Vec stack(const PhaseRates& r) {
  Vec out(r.qdot.size() + r.pdot.size());
  out << r.qdot, r.pdot;
  return out;
}

}  // namespace nhk
