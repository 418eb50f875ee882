#include "nhk/systems.hpp"

#include <cmath>
#include <numbers>

namespace nhk {

namespace {

constexpr double pi = std::numbers::pi;

Params merge(const std::string& name, const Params& defaults, const Params& overrides) {
  Params out = defaults;
  for (const auto& [k, v] : overrides) {
    if (!defaults.count(k)) fail(ErrorKind::InvalidParameters, "unknown parameter '" + k + "' for " + name);
    if (!std::isfinite(v)) fail(ErrorKind::InvalidParameters, "parameter '" + k + "' is not finite");
    out[k] = v;
  }
  return out;
}

void require_positive(const Params& p, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!(p.at(k) > 0.0)) fail(ErrorKind::InvalidParameters, std::string("parameter '") + k + "' must be positive");
}

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

double constant(const Constants& c, const char* key) {
  auto it = c.find(key);
  if (it == c.end()) fail(ErrorKind::InvalidConstants, std::string("missing constant '") + key + "'");
  return it->second;
}

Mat identity_scale(const Vec& qbar) { return Mat::Identity(qbar.size(), qbar.size()); }

SystemBundle vrd(const Params& p) {
  require_positive(p, {"m", "R", "I", "J"});
  const double m = p.at("m"), R = p.at("R"), I = p.at("I"), J = p.at("J");

  ChartSystem s;
  s.name = "vrd";
  s.coords = {"phi", "x", "y", "psi"};
  s.periodic = {true, false, false, true};
  s.metric = [=](const Vec&) { return Mat(vec({J, m, m, I}).asDiagonal()); };
  s.potential = [](const Vec&) { return 0.0; };
  s.constraints = [=](const Vec& q) {
    Mat w(2, 4);
    w << 0, 1, 0, -R * std::cos(q[0]), 0, 0, 1, -R * std::sin(q[0]);
    return w;
  };
  s.num_constraints = 2;
  s.group = {{1, 2}, {"xi", "eta"}};

  const double k = m * R / I;
  Oracles o;
  o.hl_m = [=](const Vec& q, const Vec& pb) {
    return vec({pb[0], k * std::cos(q[0]) * pb[1], k * std::sin(q[0]) * pb[1], pb[1]});
  };
  o.reduced_hamiltonian = [=](const Vec&, const Vec& pb) {
    return 0.5 * (pb[0] * pb[0] / J + (I + m * R * R) / (I * I) * pb[1] * pb[1]);
  };
  o.chaplygin_hamiltonian = o.reduced_hamiltonian;
  o.xi = [](const Vec&, const Vec&) { return Mat(Mat::Zero(2, 2)); };
  o.connection = [=](const Vec& q, const Vec& v) {
    return vec({v[1] - R * std::cos(q[0]) * v[3], v[2] - R * std::sin(q[0]) * v[3]});
  };
  o.gamma = [=](const Vec& q, double, const Constants& c) {
    const double gp = constant(c, "gamma_phi0"), gs = constant(c, "gamma_psi0");
    return vec({gp, k * std::cos(q[0]) * gs, k * std::sin(q[0]) * gs, gs});
  };

  DomainBox box{vec({-pi, -2, -2, -pi}), vec({pi, 2, 2, pi}), {}, "phi, psi in [-pi, pi]; x, y in [-2, 2]"};
  SystemBundle b{"vrd", p, s, ReducedSystem(s), constant_multiplier(1.0, 2), std::nullopt, box, {}, 2.0, {}, {}};
  b.display_scale = [=](const Vec&) { return Mat(vec({1.0, (I + m * R * R) / I}).asDiagonal()); };
  b.oracles = o;
  return b;
}

SystemBundle knife_edge(const Params& p) {
  require_positive(p, {"m", "J"});
  if (p.at("g") < 0.0) fail(ErrorKind::InvalidParameters, "parameter 'g' must be non-negative");
  const double m = p.at("m"), J = p.at("J"), alpha = p.at("alpha"), grav = p.at("g");
  const double sa = std::sin(alpha);

  ChartSystem s;
  s.name = "knife-edge";
  s.coords = {"phi", "x", "y"};
  s.periodic = {true, false, false};
  s.metric = [=](const Vec&) { return Mat(vec({J, m, m}).asDiagonal()); };
  s.potential = [=](const Vec& q) { return -m * grav * q[1] * sa; };
  s.constraints = [](const Vec& q) {
    Mat w(1, 3);
    w << 0, std::sin(q[0]), -std::cos(q[0]);
    return w;
  };
  s.num_constraints = 1;
  s.group = {{2}, {"eta"}};
  s.domain_guard = [](const Vec& q) {
    if (std::abs(std::cos(q[0])) < 1e-8) fail(ErrorKind::DomainViolation, "knife edge requires cos(phi) != 0");
  };

  Oracles o;
  o.hl_m = [](const Vec& q, const Vec& pb) {
    const double c = std::cos(q[0]), sn = std::sin(q[0]);
    return vec({pb[0], c * c * pb[1], sn * c * pb[1]});
  };
  o.reduced_hamiltonian = [=](const Vec& qb, const Vec& pb) {
    const double c = std::cos(qb[0]);
    return 0.5 * (pb[0] * pb[0] / J + c * c * pb[1] * pb[1] / m) - m * grav * qb[1] * sa;
  };
  o.chaplygin_hamiltonian = [=](const Vec& qb, const Vec& pb) {
    const double c = std::cos(qb[0]);
    return 0.5 * (pb[1] * pb[1] / m + pb[0] * pb[0] / (J * c * c)) - m * grav * qb[1] * sa;
  };
  o.xi = [](const Vec& qb, const Vec& pb) {
    // p_x tan(phi) dx∧dφ on (phi, x)
    const double c = pb[1] * std::tan(qb[0]);
    Mat x(2, 2);
    x << 0, -c, c, 0;
    return x;
  };
  o.connection = [](const Vec& q, const Vec& v) { return vec({v[2] - std::tan(q[0]) * v[1]}); };
  o.gamma = [=](const Vec& q, double energy, const Constants& c) {
    const double gp = constant(c, "gamma_phi0");
    const double rad = m * (2 * energy - gp * gp / J) + 2 * m * m * grav * sa * q[1];
    if (rad < 0.0) fail(ErrorKind::DomainViolation, "negative radicand in knife-edge solution");
    const double w = std::sqrt(rad);
    return vec({gp, w * std::cos(q[0]), w * std::sin(q[0])});
  };

  Multiplier f{[](const Vec& qb) { return std::cos(qb[0]); },
               [](const Vec& qb) { return vec({-std::sin(qb[0]), 0.0}); }, "cos(phi)"};
  DomainBox box{vec({0.15, 0.0, -1.0}), vec({pi / 2 - 0.15, 2.0, 1.0}), {},
                "phi in [0.15, pi/2 - 0.15]; x in [0, 2]; y in [-1, 1]"};
  SystemBundle b{"knife-edge", p, s, ReducedSystem(s), f, std::nullopt, box, {}, 2.0, {}, {}};
  b.display_scale = identity_scale;
  b.oracles = o;
  return b;
}

SystemBundle snakeboard(const Params& p) {
  require_positive(p, {"m", "r", "J0", "J1", "J"});
  const double m = p.at("m"), r = p.at("r"), J0 = p.at("J0"), J1 = p.at("J1"), Jb = p.at("J");
  const double mu = p.at("mu");
  const double mr2 = m * r * r;
  if (std::abs(Jb + J0 + 2 * J1 - mr2) > 1e-12 * std::max(1.0, mr2))
    fail(ErrorKind::InvalidParameters, "snakeboard requires J + J0 + 2 J1 = m r^2");

  ChartSystem s;
  s.name = "snakeboard";
  s.coords = {"theta", "x", "y", "phi", "psi"};
  s.periodic = {true, false, false, true, true};
  s.metric = [=](const Vec&) {
    Mat g = Mat::Zero(5, 5);
    g(0, 0) = mr2;
    g(0, 4) = g(4, 0) = J0;
    g(4, 4) = J0;
    g(1, 1) = g(2, 2) = m;
    g(3, 3) = 2 * J1;
    return g;
  };
  s.potential = [](const Vec&) { return 0.0; };
  s.constraints = [=](const Vec& q) {
    const double ct = r / std::tan(q[3]);
    Mat w(2, 5);
    w << ct * std::cos(q[0]), 1, 0, 0, 0, ct * std::sin(q[0]), 0, 1, 0, 0;
    return w;
  };
  s.num_constraints = 2;
  s.group = {{1, 2}, {"xi", "eta"}};
  s.domain_guard = [](const Vec& q) {
    if (std::abs(std::sin(q[3])) < 1e-8) fail(ErrorKind::DomainViolation, "snakeboard requires sin(phi) != 0");
  };

  auto D = [=](double phi) { return mr2 - J0 * std::sin(phi) * std::sin(phi); };
  auto dtheta_dphi = [](double c) {
    Mat x = Mat::Zero(3, 3);
    x(0, 1) = c;
    x(1, 0) = -c;
    return x;
  };

  Oracles o;
  o.hl_m = [=](const Vec& q, const Vec& pb) {
    const double th = q[0], ph = q[3], d = D(ph), sn = std::sin(ph), cs = std::cos(ph);
    const double diff = pb[0] - pb[2];
    const double lat = -m * r * cs * sn / d * diff;
    return vec({pb[2] + (mr2 - J0) * sn * sn / d * diff, lat * std::cos(th), lat * std::sin(th), pb[1], pb[2]});
  };
  o.reduced_hamiltonian = [=](const Vec& qb, const Vec& pb) {
    const double sn = std::sin(qb[1]), diff = pb[0] - pb[2];
    return 0.5 * (sn * sn / D(qb[1]) * diff * diff + pb[1] * pb[1] / (2 * J1) + pb[2] * pb[2] / J0);
  };
  o.xi = [=](const Vec& qb, const Vec& pb) {
    return dtheta_dphi(-mr2 * (pb[0] - pb[2]) / std::tan(qb[1]) / D(qb[1]));
  };
  o.connection = [=](const Vec& q, const Vec& v) {
    const double ct = r / std::tan(q[3]);
    return vec({v[1] + ct * std::cos(q[0]) * v[0], v[2] + ct * std::sin(q[0]) * v[0]});
  };
  o.mechanical_connection = [](const Vec&, const Vec& v) { return vec({v[0] + v[2]}); };
  o.alpha_mu = [=](const Vec&) { return vec({mu, 0.0, mu}); };
  o.tilde_hamiltonian = [=](const Vec& qt, const Vec& pt) {
    const double sn = std::sin(qt[1]);
    return 0.5 * (sn * sn / D(qt[1]) * pt[0] * pt[0] + pt[1] * pt[1] / (2 * J1) + mu * mu / J0);
  };
  o.tilde_xi = [=](const Vec& qt, const Vec& pt) {
    return Mat(dtheta_dphi(-mr2 * pt[0] / std::tan(qt[1]) / D(qt[1])).topLeftCorner(2, 2));
  };
  o.second_chaplygin_hamiltonian = [=](const Vec& qt, const Vec& pt) {
    const double sn = std::sin(qt[1]);
    return 0.5 * (pt[0] * pt[0] + D(qt[1]) / (2 * J1 * sn * sn) * pt[1] * pt[1] + mu * mu / J0);
  };
  o.gamma = [=](const Vec& q, double energy, const Constants& c) {
    const double gp = constant(c, "gamma_phi0");
    const double mpsi = c.count("mu_psi") ? c.at("mu_psi") : mu;
    const double rad = energy - gp * gp / (4 * J1) - mpsi * mpsi / (2 * J0);
    if (rad < 0.0) fail(ErrorKind::InvalidConstants, "energy too small for the snakeboard solution");
    const double C = std::sqrt(rad);
    const double th = q[0], ph = q[3], sn = std::sin(ph);
    const double gphi = std::sqrt(D(ph) / 2);
    const double lat = -m * r * C / std::tan(ph) * sn / gphi;
    return vec({mpsi + (mr2 - J0) * C * sn / gphi, lat * std::cos(th), lat * std::sin(th), gp, mpsi});
  };

  const double smax = std::sqrt(m / J0) * r;
  auto admissible_full = [=](const Vec& q) { return std::abs(std::sin(q[3])) < smax; };
  DomainBox box{vec({-pi, -2, -2, 0.3, -pi}), vec({pi, 2, 2, pi - 0.3, pi}), admissible_full,
                "theta, psi in [-pi, pi]; x, y in [-2, 2]; phi in [0.3, pi - 0.3]; |sin(phi)| < sqrt(m/J0) r"};

  ReducedSystem rs(s);
  SecondStageSetup setup(rs, {2}, {"zeta"}, vec({mu}));
  Multiplier f_mu{[=](const Vec& qt) {
                    const double d = D(qt[1]);
                    if (!(d > 0.0)) fail(ErrorKind::DomainViolation, "f_mu requires |sin(phi)| < sqrt(m/J0) r");
                    return std::sin(qt[1]) / std::sqrt(d);
                  },
                  [=](const Vec& qt) {
                    const double d = D(qt[1]);
                    return vec({0.0, mr2 * std::cos(qt[1]) / (d * std::sqrt(d))});
                  },
                  "sin(phi)/sqrt(m r^2 - J0 sin^2 phi)"};
  DomainBox tbox{vec({-pi, 0.3}), vec({pi, pi - 0.3}),
                 [=](const Vec& qt) { return std::abs(std::sin(qt[1])) < smax; },
                 "theta in [-pi, pi]; phi in [0.3, pi - 0.3]; |sin(phi)| < sqrt(m/J0) r"};

  SystemBundle b{"snakeboard", p, s, rs, std::nullopt, tilde_assemble(setup, f_mu), box, tbox, 2.0, {}, {}};
  b.display_scale = identity_scale;
  b.oracles = o;
  return b;
}

}  // namespace

DomainBox SystemBundle::reduced_domain() const {
  const auto& idx = reduced.shape_indices();
  DomainBox out{take(domain.lo, idx), take(domain.hi, idx), {}, domain.description};
  if (domain.admissible) {
    auto full = domain.admissible;
    auto r = reduced;
    out.admissible = [full, r](const Vec& qb) { return full(r.embed(qb)); };
  }
  return out;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"vrd", "knife-edge", "snakeboard"};
  return names;
}

Params default_params(const std::string& name) {
  if (name == "vrd") return {{"m", 1.0}, {"R", 1.0}, {"I", 1.0}, {"J", 1.0}};
  if (name == "knife-edge") return {{"m", 1.0}, {"J", 1.0}, {"alpha", pi / 6}, {"g", 9.81}};
  if (name == "snakeboard")
    return {{"m", 2.0}, {"r", 1.0}, {"J0", 1.0}, {"J1", 0.25}, {"J", 0.5}, {"mu", 0.3}};
  fail(ErrorKind::InvalidParameters, "unknown system '" + name + "'");
}

SystemBundle build(const std::string& name, const Params& overrides) {
  const Params p = merge(name, default_params(name), overrides);
  if (name == "vrd") return vrd(p);
  if (name == "knife-edge") return knife_edge(p);
  return snakeboard(p);
}

}  // namespace nhk
