#include "hopf_flow/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "hopf_flow/error.hpp"

namespace hopf_flow {

namespace {

// Dormand-Prince 5(4), FSAL.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller exponents (Gustafsson / Hairer).
constexpr double kBeta = 0.04;
constexpr double kAlpha = 1.0 / 5 - 0.75 * kBeta;
constexpr double kSafety = 0.9;
constexpr double kEventTimeTol = 1e-12;

State hermite(double t0, const State& y0, const State& f0, double t1, const State& y1,
              const State& f1, double t) {
  const double h = t1 - t0;
  const double th = (t - t0) / h;
  const double th2 = th * th;
  const double th3 = th2 * th;
  const double h00 = 2 * th3 - 3 * th2 + 1;
  const double h10 = th3 - 2 * th2 + th;
  const double h01 = -2 * th3 + 3 * th2;
  const double h11 = th3 - th2;
  State out(y0.size());
  for (std::size_t i = 0; i < y0.size(); ++i) {
    out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  }
  return out;
}

bool crosses(double g_old, double g_new, EventDirection dir) {
  const bool rising = g_old < 0.0 && g_new >= 0.0;
  const bool falling = g_old > 0.0 && g_new <= 0.0;
  switch (dir) {
    case EventDirection::Rising: return rising;
    case EventDirection::Falling: return falling;
    case EventDirection::Any: return rising || falling;
  }
  return false;
}

class Stepper {
 public:
  Stepper(const VectorField& f, std::size_t n, const IntegratorConfig& cfg, TrajectoryMeta& meta)
      : f_(f), cfg_(cfg), meta_(meta), tmp_(n) {
    for (auto& k : k_) k.resize(n);
  }

  void eval(double t, std::span<const double> y, std::span<double> out) {
    ++meta_.evaluations;
    f_(t, y, out);
  }

  // One trial step of size h (signed). Fills y_new and the FSAL derivative;
  // returns the scaled error norm.
  double try_step(double t, const State& y, const State& f0, double h, State& y_new, State& f_new) {
    const std::size_t n = y.size();
    auto stage = [&](std::size_t idx, double c, auto&& combine) {
      for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * combine(i);
      eval(t + c * h, tmp_, k_[idx]);
    };
    k_[0] = f0;
    stage(1, c2, [&](std::size_t i) { return a21 * k_[0][i]; });
    stage(2, c3, [&](std::size_t i) { return a31 * k_[0][i] + a32 * k_[1][i]; });
    stage(3, c4, [&](std::size_t i) { return a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]; });
    stage(4, c5, [&](std::size_t i) {
      return a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i];
    });
    stage(5, 1.0, [&](std::size_t i) {
      return a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] + a64 * k_[3][i] + a65 * k_[4][i];
    });
    y_new.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      y_new[i] = y[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] + b5 * k_[4][i] +
                             b6 * k_[5][i]);
    }
    f_new.resize(n);
    eval(t + h, y_new, f_new);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double err = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] +
                              e6 * k_[5][i] + e7 * f_new[i]);
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      acc += (err / sc) * (err / sc);
    }
    return std::sqrt(acc / static_cast<double>(n));
  }

  double initial_step(double t0, const State& y0, const State& f0, double dir) {
    const std::size_t n = y0.size();
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y0[i]);
      d0 += (y0[i] / sc) * (y0[i] / sc);
      d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, cfg_.max_step);
    State y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
    try {
      eval(t0 + dir * h0, y1, f1);
    } catch (const Error&) {
      return std::max(cfg_.min_step, h0 * 0.1);
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y0[i]);
      d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
    return std::clamp(std::min(100.0 * h0, h1), cfg_.min_step, cfg_.max_step);
  }

 private:
  const VectorField& f_;
  const IntegratorConfig& cfg_;
  TrajectoryMeta& meta_;
  std::array<State, 6> k_;
  State tmp_;
};

struct EventHit {
  double t;
  std::size_t index;
};

// state_at(t) must give the solution at t inside [t0, t1]; the caller uses a
// fresh RK sub-step from t0 so the located time is not limited by the cubic
// interpolant's accuracy.
template <class StateAt>
std::optional<EventHit> locate_events(const IntegratorConfig& cfg, double t0, const State& y0,
                                      double t1, const State& y1, StateAt&& state_at) {
  std::optional<EventHit> first;
  for (std::size_t e = 0; e < cfg.events.size(); ++e) {
    const auto& ev = cfg.events[e];
    const double g0 = ev.fn(t0, y0);
    const double g1 = ev.fn(t1, y1);
    if (!crosses(g0, g1, ev.direction)) continue;
    // Bisection on the dense interpolant; keep [lo, hi] with the sign change.
    double lo = t0, hi = t1;
    double glo = g0;
    while (std::abs(hi - lo) > kEventTimeTol) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double gm = ev.fn(mid, state_at(mid));
      if ((glo < 0.0 && gm >= 0.0) || (glo > 0.0 && gm <= 0.0)) {
        hi = mid;
      } else {
        lo = mid;
        glo = gm;
      }
    }
    const bool earlier = !first || (t1 > t0 ? hi < first->t : hi > first->t);
    if (earlier) first = EventHit{hi, e};
  }
  return first;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(min_step > 0.0) || !(min_step <= max_step)) {
    throw DomainError("IntegratorConfig: require 0 < min_step <= max_step");
  }
  for (double tol : {rel_tol, abs_tol}) {
    if (!(tol > 1e-15 && tol < 1e-2)) {
      throw DomainError("IntegratorConfig: tolerances must lie in (1e-15, 1e-2)");
    }
  }
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ReachedEnd: return "reached_t_end";
    case StopReason::HitEvent: return "hit_event";
    case StopReason::StepUnderflow: return "step_underflow";
  }
  return "unknown";
}

State Trajectory::at(double t) const {
  if (samples.empty()) throw DomainError("Trajectory::at: empty trajectory");
  const bool forward = samples.back().t >= samples.front().t;
  const double lo = forward ? samples.front().t : samples.back().t;
  const double hi = forward ? samples.back().t : samples.front().t;
  if (t < lo || t > hi) throw DomainError("Trajectory::at: time outside the trajectory");
  if (samples.size() == 1) return samples.front().y;
  auto it = std::lower_bound(samples.begin(), samples.end(), t, [forward](const Sample& s, double v) {
    return forward ? s.t < v : s.t > v;
  });
  if (it == samples.end()) return samples.back().y;
  if (it->t == t) return it->y;
  const Sample& b = *it;
  const Sample& a = *(it - 1);
  return hermite(a.t, a.y, a.dydt, b.t, b.y, b.dydt, t);
}

const Sample* Trajectory::find_exact(double t) const {
  for (const auto& s : samples) {
    if (s.t == t) return &s;
  }
  return nullptr;
}

double Trajectory::path_length(std::size_t per_step) const {
  // Gauss-Legendre (5 nodes) on |y'| of the Hermite interpolant, per_step
  // panels per accepted step. A chord polyline would underestimate by
  // O(panel^2) and is visibly short on curved orbits.
  static constexpr std::array<double, 5> x = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                              0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> w = {0.2369268850561891, 0.4786286704993665,
                                              0.5688888888888889, 0.4786286704993665,
                                              0.2369268850561891};
  const std::size_t panels = std::max<std::size_t>(1, per_step);
  double len = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const Sample& a = samples[k - 1];
    const Sample& b = samples[k];
    const double h = b.t - a.t;
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = static_cast<double>(p) / panels, hi = static_cast<double>(p + 1) / panels;
      for (std::size_t q = 0; q < x.size(); ++q) {
        const double th = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x[q];
        // derivatives of the Hermite basis with respect to t
        const double d00 = (6 * th * th - 6 * th) / h;
        const double d10 = 3 * th * th - 4 * th + 1;
        const double d01 = -d00;
        const double d11 = 3 * th * th - 2 * th;
        double s2 = 0.0;
        for (std::size_t i = 0; i < a.y.size(); ++i) {
          const double v = d00 * a.y[i] + d10 * a.dydt[i] + d01 * b.y[i] + d11 * b.dydt[i];
          s2 += v * v;
        }
        len += 0.5 * (hi - lo) * std::abs(h) * w[q] * std::sqrt(s2);
      }
    }
  }
  return len;
}

Trajectory integrate(const VectorField& field, State y0, double t0, double t1,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  traj.meta.rel_tol = cfg.rel_tol;
  traj.meta.abs_tol = cfg.abs_tol;
  const std::size_t n = y0.size();
  Stepper stepper(field, n, cfg, traj.meta);

  State f0(n);
  stepper.eval(t0, y0, f0);
  traj.samples.push_back({t0, y0, f0});
  if (t0 == t1) return traj;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  std::vector<double> stops;
  for (double s : cfg.stops) {
    if (dir * (s - t0) > 0.0 && dir * (t1 - s) > 0.0) stops.push_back(s);
  }
  std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return dir * a < dir * b; });
  stops.push_back(t1);
  std::size_t next_stop = 0;

  double t = t0;
  State y = std::move(y0);
  State f = f0;
  double h = stepper.initial_step(t0, y, f, dir);
  double err_prev = 1e-4;
  bool last_rejected = false;
  State y_new, f_new;
  std::string domain_msg;  // last domain violation since the previous accepted step

  while (true) {
    if (traj.meta.accepted_steps + traj.meta.rejected_steps >= cfg.max_steps) {
      traj.meta.stop_reason = StopReason::StepUnderflow;
      return traj;
    }
    h = std::min(h, cfg.max_step);
    const double target = stops[next_stop];
    bool landing = false;
    if (h >= std::abs(target - t) * (1.0 - 1e-12)) {
      h = std::abs(target - t);
      landing = true;
    }

    double err = 0.0;
    try {
      err = stepper.try_step(t, y, f, dir * h, y_new, f_new);
      for (double v : y_new) {
        if (!std::isfinite(v)) throw DomainError("non-finite state");
      }
    } catch (const Error& e) {
      ++traj.meta.rejected_steps;
      h *= 0.25;
      last_rejected = true;
      domain_msg = e.what();
      if (h < cfg.min_step) {
        traj.meta.stop_reason = StopReason::HitEvent;
        traj.meta.event_name = "domain: " + domain_msg;
        return traj;
      }
      continue;
    }

    if (!(err <= 1.0)) {
      ++traj.meta.rejected_steps;
      const double fac = std::isfinite(err) ? std::max(0.2, kSafety * std::pow(err, -kAlpha)) : 0.2;
      h *= fac;
      last_rejected = true;
      if (h < cfg.min_step) {
        // shrinking began at a domain violation: the boundary is what stops us
        if (!domain_msg.empty()) {
          traj.meta.stop_reason = StopReason::HitEvent;
          traj.meta.event_name = "domain: " + domain_msg;
        } else {
          traj.meta.stop_reason = StopReason::StepUnderflow;
        }
        return traj;
      }
      continue;
    }

    const double t_new = landing ? target : t + dir * h;
    State y_sub, f_sub;
    const auto state_at = [&](double tm) -> State {
      try {
        stepper.try_step(t, y, f, tm - t, y_sub, f_sub);
        return y_sub;
      } catch (const Error&) {
        return hermite(t, y, f, t_new, y_new, f_new, tm);
      }
    };
    if (auto hit = locate_events(cfg, t, y, t_new, y_new, state_at)) {
      State ye = state_at(hit->t);
      State fe(n);
      try {
        stepper.eval(hit->t, ye, fe);
      } catch (const Error&) {
        for (std::size_t i = 0; i < n; ++i) fe[i] = (y_new[i] - y[i]) / (t_new - t);
      }
      ++traj.meta.accepted_steps;
      traj.samples.push_back({hit->t, std::move(ye), std::move(fe)});
      traj.meta.stop_reason = StopReason::HitEvent;
      traj.meta.event_name = cfg.events[hit->index].name;
      return traj;
    }

    ++traj.meta.accepted_steps;
    domain_msg.clear();
    t = t_new;
    y = y_new;
    f = f_new;
    traj.samples.push_back({t, y, f});
    if (landing) {
      ++next_stop;
      if (next_stop == stops.size()) {
        traj.meta.stop_reason = StopReason::ReachedEnd;
        return traj;
      }
    }

    const double e = std::max(err, 1e-10);
    double fac = kSafety * std::pow(e, -kAlpha) * std::pow(err_prev, kBeta);
    fac = std::clamp(fac, 0.2, 10.0);
    if (last_rejected) fac = std::min(fac, 1.0);
    err_prev = std::max(err, 1e-4);
    last_rejected = false;
    h *= fac;
  }
}

Trajectory integrate_scalar(const ScalarRhs& rhs, double x0, double y0, double x1,
                            const IntegratorConfig& cfg) {
  VectorField field = [&rhs](double x, std::span<const double> y, std::span<double> dy) {
    dy[0] = rhs(x, y[0]);
  };
  return integrate(field, State{y0}, x0, x1, cfg);
}

}  // namespace hopf_flow
