#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nhk/linalg.hpp"

namespace nhk {

/// Seeded uniform draws. Doubles are built from the raw 64-bit stream so the
/// sequence is identical across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  Vec uniform(const Vec& lo, const Vec& hi) {
    Vec v(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) v[i] = uniform(lo[i], hi[i]);
    return v;
  }
  Vec uniform(int n, double lo, double hi) {
    return uniform(Vec(Vec::Constant(n, lo)), Vec(Vec::Constant(n, hi)));
  }

 private:
  std::mt19937_64 rng_;
};

/// Axis-aligned box with an optional admissibility predicate.
struct DomainBox {
  Vec lo;
  Vec hi;
  std::function<bool(const Vec&)> admissible;
  std::string description;

  bool contains(const Vec& x) const;
  /// Rejection sampling; throws DomainViolation after many failed draws.
  Vec sample(Sampler& s) const;
  std::vector<Vec> sample(Sampler& s, int count) const;
};

}  // namespace nhk
