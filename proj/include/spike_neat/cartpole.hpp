/*
 Copyright 2026 The spike-neat Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef SPIKE_NEAT_CARTPOLE_HPP
#define SPIKE_NEAT_CARTPOLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

namespace spike_neat::cartpole {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Frictionless single-pole cart. Lengths in m, masses in kg, tau in s.
struct Params {
  double g = 9.8;
  double m_cart = 1.0;
  double m_pole = 0.1;
  double half_length = 0.5;
  double tau = 0.02;
  double x_limit = 2.4;
  double theta_limit = deg_to_rad(12.0);

  double total_mass() const { return m_cart + m_pole; }
};

struct State {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  long step = 0;

  friend bool operator==(const State&, const State&) = default;
};

struct Accelerations {
  double theta_ddot;
  double x_ddot;
};

namespace detail {
struct SinCos {
  double sin;
  double cos;
};

// libm sin is not exactly odd, and the compiler may pick sin or sincos per call site.
// One out-of-line evaluation on |theta| keeps mirrored runs bit-identical.
[[gnu::noinline]] inline SinCos odd_sincos(double theta) {
  const double abs_t = std::abs(theta);
  return {std::copysign(std::sin(abs_t), theta), std::cos(abs_t)};
}
}  // namespace detail

inline Accelerations accelerations(const State& s, double force, const Params& p) {
  const auto [sin_t, cos_t] = detail::odd_sincos(s.theta);
  const double m = p.total_mass();
  const double pole_ml = p.m_pole * p.half_length;
  const double temp = (-force - pole_ml * s.theta_dot * s.theta_dot * sin_t) / m;
  const double theta_ddot =
      (p.g * sin_t + cos_t * temp) / (p.half_length * (4.0 / 3.0 - p.m_pole * cos_t * cos_t / m));
  const double x_ddot = (force + pole_ml * (s.theta_dot * s.theta_dot * sin_t - theta_ddot * cos_t)) / m;
  return {theta_ddot, x_ddot};
}

/// One explicit Euler step; every derivative comes from the pre-step state.
inline State step(const State& s, double force, const Params& p) {
  const auto acc = accelerations(s, force, p);
  State n;
  n.x = s.x + p.tau * s.x_dot;
  n.x_dot = s.x_dot + p.tau * acc.x_ddot;
  n.theta = s.theta + p.tau * s.theta_dot;
  n.theta_dot = s.theta_dot + p.tau * acc.theta_ddot;
  n.step = s.step + 1;
  return n;
}

inline bool failed(const State& s, const Params& p) {
  return std::abs(s.x) > p.x_limit || std::abs(s.theta) > p.theta_limit;
}

/// Symmetric normalisation half-ranges. Each channel maps [-r, r] onto [0, 1].
struct ObservationRanges {
  double x = 2.4;
  double x_dot = 1.0;
  double theta = deg_to_rad(12.0);
  double theta_dot = 1.0;
};

inline double normalize(double value, double half_range) {
  return std::clamp(0.5 + 0.5 * value / half_range, 0.0, 1.0);
}

/// Markovian: (x, x_dot, theta, theta_dot). Non-Markovian: (x, theta).
inline std::vector<double> observe(const State& s, bool markovian, const ObservationRanges& r) {
  if (markovian) {
    return {normalize(s.x, r.x), normalize(s.x_dot, r.x_dot), normalize(s.theta, r.theta),
            normalize(s.theta_dot, r.theta_dot)};
  }
  return {normalize(s.x, r.x), normalize(s.theta, r.theta)};
}

struct TrajectoryRow {
  long step;
  double x, x_dot, theta, theta_dot, force;
};

inline std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::string out = "step,x,x_dot,theta,theta_dot,force\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.step, r.x, r.x_dot, r.theta,
                  r.theta_dot, r.force);
    out += buf;
  }
  return out;
}

}  // namespace spike_neat::cartpole

#endif  // SPIKE_NEAT_CARTPOLE_HPP
