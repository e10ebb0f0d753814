#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "optomech/model.hpp"

namespace optomech {

using Complex = std::complex<double>;

/// Classical working point. Optical modes come in coupled pairs (0,1), (2,3), ...;
/// a cavity's pairs all push the same mirror. p_s is zero and not stored.
struct SteadyState {
  std::vector<double> q_s;       // one per mechanical mode
  std::vector<Complex> alpha;    // one per optical mode
  double residual = 0.0;         // max norm of the stationary right-hand side
};

/// Accepts or rejects a candidate root (used to skip roots whose linearization is unstable).
using RootFilter = std::function<bool(const SteadyState&)>;

inline constexpr double kSteadyStateTolerance = 1e-8;  // relative to max |eta|
inline constexpr int kSteadyStateIterationBudget = 10000;

/// Intracavity amplitudes of one cavity at a fixed mirror displacement q.
std::vector<Complex> amplitudes_at(const DerivedConstants& dc, double q);

/// Max norm of the stationary Langevin equations of one cavity at (q, alpha).
double stationary_residual(const DerivedConstants& dc, double q, std::span<const Complex> alpha);

/// Every nonnegative root of the single-cavity stationarity condition. The root
/// reached by continuation from P = 0 comes first, the rest follow by distance to it.
std::vector<SteadyState> single_cavity_roots(const DerivedConstants& dc);

/// Power-homotopy branch of a two-mode cavity; falls through to the next-closest
/// root whenever `accept` rejects one. If every root is rejected the homotopy
/// root is returned so the caller can report it.
SteadyState solve_single_cavity(const DerivedConstants& dc, const RootFilter& accept = {});

/// Damped fixed-point iteration alternating a linear solve for alpha at fixed q and
/// the q update from the mechanical equation. Cavities are solved independently and
/// concatenated (TwoCavityBS couples them only after the output).
SteadyState solve_self_consistent(std::span<const DerivedConstants> cavities, Scheme scheme);

}  // namespace optomech
