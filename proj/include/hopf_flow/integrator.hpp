#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hopf_flow {

using State = std::vector<double>;

/// dy/dt = f(t, y). The field may throw DomainError/SingularityError; the
/// integrator treats that as a domain violation and shrinks the step.
using VectorField = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using ScalarRhs = std::function<double(double x, double y)>;

enum class EventDirection { Any, Rising, Falling };

struct Event {
  std::string name;
  std::function<double(double t, std::span<const double> y)> fn;
  EventDirection direction = EventDirection::Any;
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 1.0;
  double min_step = 1e-13;
  std::size_t max_steps = 2'000'000;
  std::vector<Event> events;
  /// Times the stepper must land on exactly (sorted internally).
  std::vector<double> stops;

  /// Throws DomainError unless 0 < min_step <= max_step and both tolerances
  /// lie in (1e-15, 1e-2).
  void validate() const;
};

enum class StopReason { ReachedEnd, HitEvent, StepUnderflow };

const char* to_string(StopReason r);

struct Sample {
  double t = 0.0;
  State y;
  State dydt;
};

struct TrajectoryMeta {
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t evaluations = 0;
  StopReason stop_reason = StopReason::ReachedEnd;
  std::string event_name;  // set when stop_reason == HitEvent
};

/// Accepted steps of one run. t is strictly monotone (increasing or
/// decreasing with the span direction); dense output is cubic Hermite on each
/// accepted step.
class Trajectory {
 public:
  std::vector<Sample> samples;
  TrajectoryMeta meta;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }

  /// Dense output. Throws DomainError outside [t_begin, t_end].
  State at(double t) const;
  /// Sample nearest in time equal to t, if one exists exactly.
  const Sample* find_exact(double t) const;

  /// Arclength of the dense-output curve: Gauss-Legendre quadrature of the
  /// speed with `per_step` panels per accepted step.
  double path_length(std::size_t per_step = 4) const;
};

Trajectory integrate(const VectorField& field, State y0, double t0, double t1,
                     const IntegratorConfig& cfg = {});

Trajectory integrate_scalar(const ScalarRhs& rhs, double x0, double y0, double x1,
                            const IntegratorConfig& cfg = {});

}  // namespace hopf_flow
