#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "nhk/linalg.hpp"

namespace nhk {

/// Central-difference stencils of order 2, 4 or 6.
///
/// The step is relative to the coordinates the direction moves:
/// h = rel_step * max(1, max{|x_i| : dir_i != 0}). 1e-4 balances
/// truncation against roundoff for the 4th-order stencil on O(1) data;
/// derivatives of functions that already contain a finite difference want
/// a larger step (see `nested()`).
struct DiffEngine {
  int order = 4;
  double rel_step = 1e-4;

  static DiffEngine nested() { return DiffEngine{4, 1e-3}; }

  double step_for(const Vec& x, const Vec& dir) const {
    double scale = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (dir[i] != 0.0) scale = std::max(scale, std::abs(x[i]));
    return rel_step * scale;
  }

  /// d/dt F(x + t*dir) at t = 0. F may return double, Vec or Mat.
  template <class F>
  auto directional(F&& f, const Vec& x, const Vec& dir) const
      -> std::decay_t<decltype(f(x))> {
    const double h = step_for(x, dir);
    auto at = [&](double k) { return f(Vec(x + (k * h) * dir)); };
    switch (order) {
      case 2:
        return (at(1) - at(-1)) / (2.0 * h);
      case 6:
        return (45.0 * (at(1) - at(-1)) - 9.0 * (at(2) - at(-2)) + (at(3) - at(-3))) /
               (60.0 * h);
      default:
        return (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * h);
    }
  }

  template <class F>
  Vec gradient(F&& f, const Vec& x) const {
    Vec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      g[i] = directional(f, x, Vec::Unit(x.size(), i));
    return g;
  }

  /// Column j is the derivative along e_j.
  template <class F>
  Mat jacobian(F&& f, const Vec& x) const {
    const Vec f0 = f(x);
    Mat jac(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j)
      jac.col(j) = directional(f, x, Vec::Unit(x.size(), j));
    return jac;
  }
};

}  // namespace nhk
