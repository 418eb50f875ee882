#include "nhk/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace nhk {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

namespace {

Vec to_vec(const State& s) { return Eigen::Map<const Vec>(s.data(), static_cast<Eigen::Index>(s.size())); }

State to_state(const Vec& v) { return State(v.data(), v.data() + v.size()); }

}  // namespace

void solve_ode(const OdeRhs& rhs, Vec y0, const OdeOptions& opt, const OdeObserver& observe,
               const std::function<void(Vec&)>& post_step) {
  if (!(opt.t_end >= 0.0) || !std::isfinite(opt.t_end))
    fail(ErrorKind::Configuration, "t_end must be finite and non-negative");
  if (!(opt.dt > 0.0)) fail(ErrorKind::Configuration, "dt must be positive");

  auto sys = [&](const State& x, State& dxdt, double) {
    const Vec d = rhs(to_vec(x));
    dxdt.assign(d.data(), d.data() + d.size());
  };
  auto after = [&](State& x) {
    if (!post_step) return;
    Vec v = to_vec(x);
    post_step(v);
    x = to_state(v);
  };

  State x = to_state(y0);
  if (observe) observe(0.0, y0);
  if (opt.t_end == 0.0) return;

  if (opt.scheme == Scheme::RK4) {
    odeint::runge_kutta4<State> stepper;
    const long steps = std::max(1L, static_cast<long>(std::ceil(opt.t_end / opt.dt - 1e-9)));
    const double h = opt.t_end / static_cast<double>(steps);
    for (long k = 1; k <= steps; ++k) {
      stepper.do_step(sys, x, (k - 1) * h, h);
      after(x);
      if (observe) observe(k == steps ? opt.t_end : k * h, to_vec(x));
    }
    return;
  }

  auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());
  double t = 0.0;
  double h = opt.dt;
  while (t < opt.t_end) {
    if (t + h > opt.t_end) h = opt.t_end - t;
    const double t_before = t;
    if (stepper.try_step(sys, x, t, h) == odeint::success) {
      if (opt.t_end - t < 1e-14 * std::max(1.0, opt.t_end)) t = opt.t_end;
      after(x);
      if (observe) observe(t, to_vec(x));
    } else if (h < opt.dt_min) {
      fail(ErrorKind::StepRejected, "adaptive step fell below dt_min at t=" + std::to_string(t_before));
    }
  }
}

Vec flow(const OdeRhs& rhs, const Vec& y0, const OdeOptions& opt) {
  Vec last = y0;
  solve_ode(rhs, y0, opt, [&](double, const Vec& y) { last = y; });
  return last;
}

}  // namespace nhk
