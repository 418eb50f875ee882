#pragma once

// Shared helpers for the unit and acceptance tests: small generators and the
// hand-transcribed closed forms the numerical constructions are checked against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

#include "nhk/linalg.hpp"

namespace nhk::test {

constexpr double pi = std::numbers::pi;

inline Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& x) {
  return x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
}

struct Sup {
  double value = 0.0;
  void operator()(double x) { value = std::max(value, std::isfinite(x) ? std::abs(x) : INFINITY); }
};

/// Generator for property tests; deliberately separate from nhk::Sampler.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Vec vec(int n, double lo, double hi) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = real(lo, hi);
    return x;
  }
  Vec in_box(const Vec& lo, const Vec& hi) {
    Vec x(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) x[i] = real(lo[i], hi[i]);
    return x;
  }
  Mat spd(int n) {
    Mat a = Mat::NullaryExpr(n, n, [&] { return real(-1, 1); });
    return a * a.transpose() + n * Mat::Identity(n, n);
  }

 private:
  std::mt19937_64 rng_;
};

// Closed forms, with the parameters passed explicitly.

struct VrdParams {
  double m = 1, R = 1, I = 1, J = 1;
};

/// γ display for the rolling disk: γφ dφ + (mR/I)γψ (cosφ dx + sinφ dy) + γψ dψ.
inline Vec vrd_gamma(const VrdParams& p, const Vec& q, double gphi, double gpsi) {
  const double k = p.m * p.R / p.I;
  return v({gphi, k * std::cos(q[0]) * gpsi, k * std::sin(q[0]) * gpsi, gpsi});
}

struct KnifeParams {
  double m = 1, J = 1, alpha = pi / 6, g = 9.81;
};

/// γ display for the knife edge: γφ dφ + √(m(2E − γφ²/J) + 2m²g sinα x)(cosφ dx + sinφ dy).
inline Vec knife_gamma(const KnifeParams& p, const Vec& q, double energy, double gphi) {
  const double w = std::sqrt(p.m * (2 * energy - gphi * gphi / p.J) +
                             2 * p.m * p.m * p.g * std::sin(p.alpha) * q[1]);
  return v({gphi, w * std::cos(q[0]), w * std::sin(q[0])});
}

struct SnakeParams {
  double m = 2, r = 1, J0 = 1, J1 = 0.25, J = 0.5, mu = 0.3;
};

/// Snakeboard γ display with C = √(E − γφ²/(4J1) − μ²/(2J0)), g(φ) = √((mr² − J0 sin²φ)/2).
inline Vec snake_gamma(const SnakeParams& p, const Vec& q, double energy, double gphi) {
  const double mr2 = p.m * p.r * p.r;
  const double C = std::sqrt(energy - gphi * gphi / (4 * p.J1) - p.mu * p.mu / (2 * p.J0));
  const double th = q[0], ph = q[3], s = std::sin(ph);
  const double g = std::sqrt((mr2 - p.J0 * s * s) / 2);
  const double lat = -p.m * p.r * C * (std::cos(ph) / s) * s / g;
  return v({p.mu + (mr2 - p.J0) * C * s / g, lat * std::cos(th), lat * std::sin(th), gphi, p.mu});
}

}  // namespace nhk::test
