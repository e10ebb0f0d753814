#include "optomech/steady_state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex cavity_pole(const DerivedConstants& dc, std::size_t j) {
  return {dc.kappa[j], dc.delta[j]};  // i*Delta + kappa
}

double max_drive(const DerivedConstants& dc) {
  double m = 0.0;
  for (double e : dc.eta) m = std::max(m, std::abs(e));
  return m;
}

void require_pairs(const DerivedConstants& dc) {
  if (dc.optical_modes() == 0 || dc.optical_modes() % 2 != 0)
    throw DimensionMismatch("optical modes must come in coupled pairs");
}

// With x = g0*q, summing the two stationary optical equations gives
// S = alpha_1 + alpha_2 = e / (1 - i x h), h = sum 1/d_j, e = sum eta_j/d_j.
// The mechanical equation x = g0^2 |S|^2 / omega_m then becomes a real cubic.
// Scaling y = |h| x gives the monic form y^3 + 2 beta y^2 + y - gamma = 0.
struct ReducedCubic {
  double h_norm = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double value(double y, double t) const { return ((y + 2.0 * beta) * y + 1.0) * y - t * gamma; }
  double slope(double y) const { return (3.0 * y + 4.0 * beta) * y + 1.0; }
};

ReducedCubic reduce(const DerivedConstants& dc) {
  Complex h{0.0, 0.0};
  Complex e{0.0, 0.0};
  for (std::size_t j = 0; j < 2; ++j) {
    const Complex d = cavity_pole(dc, j);
    h += 1.0 / d;
    e += dc.eta[j] / d;
  }
  ReducedCubic cubic;
  cubic.h_norm = std::abs(h);
  cubic.beta = h.imag() / cubic.h_norm;
  cubic.gamma = dc.g0 * dc.g0 * std::norm(e) / dc.omega_m * cubic.h_norm;
  return cubic;
}

bool newton(const ReducedCubic& cubic, double t, double& y) {
  for (int it = 0; it < 60; ++it) {
    const double slope = cubic.slope(y);
    if (slope == 0.0 || !std::isfinite(slope)) return false;
    const double step = cubic.value(y, t) / slope;
    y -= step;
    if (!std::isfinite(y)) return false;
    if (std::abs(step) <= 4e-16 * std::max(std::abs(y), 1e-300)) return true;
  }
  return std::abs(cubic.value(y, t)) <= 1e-13 * std::max(1.0, cubic.gamma * t);
}

// Follows the root from y(0) = 0 as the drive power ramps from 0 to P. Returns
// false when the branch ends in a fold before t = 1.
bool continue_from_zero_power(const ReducedCubic& cubic, double& y_out) {
  double y = 0.0;
  double t = 0.0;
  double dt = 0.05;
  int steps = 0;
  while (t < 1.0) {
    if (++steps > kSteadyStateIterationBudget) return false;
    const double t_next = std::min(1.0, t + dt);
    const double slope = cubic.slope(y);
    double y_next = y + cubic.gamma * (t_next - t) / slope;
    const bool ok = newton(cubic, t_next, y_next) && cubic.slope(y_next) * slope > 0.0 &&
                    y_next >= -1e-300;
    if (ok) {
      y = y_next;
      t = t_next;
      dt = std::min(2.0 * dt, 0.25);
    } else {
      dt *= 0.5;
      if (dt < 1e-12) {
        y_out = y;
        return false;
      }
    }
  }
  y_out = y;
  return true;
}

std::vector<double> nonnegative_real_roots(const ReducedCubic& cubic) {
  Eigen::Matrix3d companion;
  companion << -2.0 * cubic.beta, -1.0, cubic.gamma, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  const Eigen::Vector3cd eig = companion.eigenvalues();

  std::vector<double> roots;
  for (const auto& z : eig) {
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
    double y = z.real();
    newton(cubic, 1.0, y);
    if (y < 0.0) {
      if (y < -1e-12 * std::max(1.0, cubic.gamma)) continue;
      y = 0.0;
    }
    const bool duplicate = std::any_of(roots.begin(), roots.end(), [&](double r) {
      return std::abs(r - y) <= 1e-9 * std::max({1.0, std::abs(r), std::abs(y)});
    });
    if (!duplicate) roots.push_back(y);
  }
  return roots;
}

SteadyState state_from_displacement(const DerivedConstants& dc, double q) {
  SteadyState ss;
  ss.q_s = {q};
  ss.alpha = amplitudes_at(dc, q);
  ss.residual = stationary_residual(dc, q, ss.alpha);
  return ss;
}

double displacement_update(const DerivedConstants& dc, std::span<const Complex> alpha) {
  double power = 0.0;
  for (std::size_t j = 0; j + 1 < alpha.size(); j += 2) power += std::norm(alpha[j] + alpha[j + 1]);
  return dc.g0 * power / dc.omega_m;
}

SteadyState fixed_point(const DerivedConstants& dc) {
  require_pairs(dc);
  double q = 0.0;
  double previous_step = 0.0;
  double damping = 1.0;
  int stalled_cycles = 0;
  double residual = 0.0;

  for (int it = 0; it < kSteadyStateIterationBudget; ++it) {
    const std::vector<Complex> alpha = amplitudes_at(dc, q);
    const double q_next = displacement_update(dc, alpha);
    const double step = q_next - q;
    residual = stationary_residual(dc, q, alpha);

    if (std::abs(step) <= 1e-12 * std::max(std::abs(q_next), std::abs(q)) || step == 0.0) {
      return state_from_displacement(dc, q_next);
    }

    // Non-shrinking sign flips mean the map is not contractive here.
    const bool flipped = step * previous_step < 0.0;
    if (flipped && std::abs(step) >= 0.999 * std::abs(previous_step)) {
      if (damping == 1.0) {
        damping = 0.5;
      } else if (++stalled_cycles > 100) {
        throw OscillationDetected("steady-state iteration locked in a period-2 cycle", residual);
      }
    }
    previous_step = step;
    q += damping * step;
  }
  throw NoConvergence("steady-state iteration exceeded its budget", residual);
}

}  // namespace

std::vector<Complex> amplitudes_at(const DerivedConstants& dc, double q) {
  require_pairs(dc);
  const double s = dc.g0 * q;
  std::vector<Complex> alpha(dc.optical_modes());
  for (std::size_t a = 0; a < alpha.size(); a += 2) {
    const std::size_t b = a + 1;
    // [d_a - i s, -i s; -i s, d_b - i s] (alpha_a, alpha_b) = (eta_a, eta_b)
    const Complex m00 = cavity_pole(dc, a) - kI * s;
    const Complex m11 = cavity_pole(dc, b) - kI * s;
    const Complex off = -kI * s;
    const Complex det = m00 * m11 - off * off;
    alpha[a] = (m11 * dc.eta[a] - off * dc.eta[b]) / det;
    alpha[b] = (m00 * dc.eta[b] - off * dc.eta[a]) / det;
  }
  return alpha;
}

double stationary_residual(const DerivedConstants& dc, double q, std::span<const Complex> alpha) {
  require_pairs(dc);
  if (alpha.size() != dc.optical_modes())
    throw DimensionMismatch("amplitude count does not match optical modes");
  double worst = 0.0;
  double power = 0.0;
  for (std::size_t a = 0; a < alpha.size(); a += 2) {
    const Complex sum = alpha[a] + alpha[a + 1];
    power += std::norm(sum);
    for (std::size_t j = a; j < a + 2; ++j) {
      const Complex rhs = -cavity_pole(dc, j) * alpha[j] + kI * dc.g0 * q * sum + dc.eta[j];
      worst = std::max(worst, std::abs(rhs));
    }
  }
  worst = std::max(worst, std::abs(-dc.omega_m * q + dc.g0 * power));
  return worst;
}

std::vector<SteadyState> single_cavity_roots(const DerivedConstants& dc) {
  if (dc.optical_modes() != 2)
    throw SchemeMismatch("single-cavity solve expects exactly two optical modes");

  const ReducedCubic cubic = reduce(dc);
  auto to_state = [&](double y) {
    const double x = y / cubic.h_norm;
    return state_from_displacement(dc, dc.g0 > 0.0 ? x / dc.g0 : 0.0);
  };

  if (cubic.gamma == 0.0) return {to_state(0.0)};

  double y_branch = 0.0;
  const bool on_branch = continue_from_zero_power(cubic, y_branch);
  std::vector<double> roots = nonnegative_real_roots(cubic);
  if (on_branch) {
    std::erase_if(roots, [&](double r) {
      return std::abs(r - y_branch) <= 1e-9 * std::max({1.0, std::abs(r), std::abs(y_branch)});
    });
  }
  std::sort(roots.begin(), roots.end(), [&](double a, double b) {
    return std::abs(a - y_branch) < std::abs(b - y_branch);
  });
  if (on_branch) roots.insert(roots.begin(), y_branch);
  if (roots.empty())
    throw NoConvergence("power homotopy ended in a fold with no remaining root", 0.0);

  std::vector<SteadyState> states;
  states.reserve(roots.size());
  for (double y : roots) states.push_back(to_state(y));
  return states;
}

SteadyState solve_single_cavity(const DerivedConstants& dc, const RootFilter& accept) {
  const std::vector<SteadyState> roots = single_cavity_roots(dc);
  const SteadyState* chosen = &roots.front();
  if (accept) {
    for (const SteadyState& r : roots) {
      if (accept(r)) {
        chosen = &r;
        break;
      }
    }
  }
  const double tolerance = kSteadyStateTolerance * max_drive(dc);
  if (chosen->residual > tolerance)
    throw NoConvergence("steady-state residual above tolerance", chosen->residual);
  return *chosen;
}

SteadyState solve_self_consistent(std::span<const DerivedConstants> cavities, Scheme scheme) {
  if (cavities.empty()) throw SchemeMismatch("no cavities given");
  if (scheme == Scheme::Single && cavities.size() != 1)
    throw SchemeMismatch("scheme 'single' takes exactly one cavity");
  const std::size_t modes_per_cavity = scheme == Scheme::DualPolarization ? 4 : 2;

  SteadyState combined;
  for (const DerivedConstants& dc : cavities) {
    if (dc.optical_modes() != modes_per_cavity)
      throw SchemeMismatch("cavity mode count does not match scheme '" +
                           std::string(to_string(scheme)) + "'");
    const SteadyState one = fixed_point(dc);
    const double tolerance = kSteadyStateTolerance * max_drive(dc);
    if (one.residual > tolerance)
      throw NoConvergence("steady-state residual above tolerance", one.residual);
    combined.q_s.push_back(one.q_s.front());
    combined.alpha.insert(combined.alpha.end(), one.alpha.begin(), one.alpha.end());
    combined.residual = std::max(combined.residual, one.residual);
  }
  return combined;
}

}  // namespace optomech
