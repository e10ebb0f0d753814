#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace optomech {

/// Physical constants, CODATA values to nine significant digits.
namespace constants {
inline constexpr double hbar = 1.05457182e-34;  // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
inline constexpr double speed_of_light = 299792458.0;  // m / s
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

/// Unit of user-supplied rates. `Hz` values are multiplied by 2*pi on ingest.
enum class FrequencyUnit { RadPerS, Hz };

enum class Scheme { Single, TwoCavityBS, DualPolarization };

/// Vacuum input noise of the optical modes. `SharedPort` feeds every mode of a
/// cavity from one port (sqrt(kappa_i kappa_j) cross terms in D without matching
/// cross damping in A, which breaks the uncertainty principle at order
/// kappa / omega_m). `Independent` gives each mode its own port.
enum class InputNoise { Independent, SharedPort };

std::string_view to_string(FrequencyUnit unit);
std::string_view to_string(Scheme scheme);
FrequencyUnit parse_frequency_unit(std::string_view text);
Scheme parse_scheme(std::string_view text);
std::string_view to_string(InputNoise noise);
InputNoise parse_input_noise(std::string_view text);

/// Detuning of the upper optical mode, either as a rate or as a multiple of
/// the mechanical frequency (most figure presets are stated that way).
struct Detuning {
  enum class Kind { Absolute, RelativeToOmegaM };
  Kind kind = Kind::RelativeToOmegaM;
  double value = 1.0;

  static Detuning absolute(double rate) { return {Kind::Absolute, rate}; }
  static Detuning in_omega_m(double ratio) { return {Kind::RelativeToOmegaM, ratio}; }
  bool operator==(const Detuning&) const = default;
};

/// Physical inputs of one double-longitudinal-mode cavity. Defaults are the
/// `fig2` preset values with rates read as rad/s.
struct SystemParams {
  double cavity_length = 0.01;     // m
  double effective_mass = 5e-9;    // kg
  double wavelength = 1.33e-6;     // m, lower optical mode
  double input_power = 0.02;       // W
  double temperature = 0.01;       // K
  std::vector<double> kappa{1e6, 1e6};  // amplitude decay per optical mode
  std::vector<double> gamma_m{1e5};     // per mechanical mode
  Detuning detuning_2 = Detuning::in_omega_m(1.0);
  FrequencyUnit frequency_unit = FrequencyUnit::RadPerS;
  InputNoise input_noise = InputNoise::Independent;
  std::optional<double> g0_override;  // rate, replaces the derived g0 when set

  bool operator==(const SystemParams&) const = default;
};

/// Everything the linearized dynamics needs, in rad/s.
struct DerivedConstants {
  double omega_m = 0.0;
  std::vector<double> omega;  // optical angular frequencies
  double g0 = 0.0;
  std::vector<double> eta;    // drive strengths
  double nbar = 0.0;
  std::vector<double> delta;  // detunings omega_j - omega_L
  std::vector<double> kappa;
  double gamma_m = 0.0;
  InputNoise input_noise = InputNoise::Independent;

  std::size_t optical_modes() const { return kappa.size(); }
};

/// Throws NonPhysicalParameter naming the first offending field.
void validate(const SystemParams& params);

/// Returns a copy with every stored rate in rad/s.
SystemParams ingest(const SystemParams& params);

/// Inverse of `ingest`: re-expresses the stored rates in `unit`.
SystemParams express_in(const SystemParams& params, FrequencyUnit unit);

double mechanical_frequency(double cavity_length);

/// Bose occupation [exp(hbar w / kB T) - 1]^-1, zero at T = 0.
double thermal_occupation(double omega, double temperature);

/// Derived constants for a single cavity. `kappa` of size 1 is broadcast to
/// two modes; size 4 yields the dual-polarization mode set (1, 2, 3, 4) with
/// omega_3 = omega_1 and omega_4 = omega_2.
DerivedConstants derive_constants(const SystemParams& params);

struct CavityConstants {
  SystemParams params;
  DerivedConstants constants;
};

/// Replicates identical cavities for a scheme. Single needs exactly one
/// cavity, TwoCavityBS at least two; DualPolarization widens each cavity to
/// four optical modes sharing one mechanical mode.
std::vector<CavityConstants> scheme_params(const SystemParams& params, Scheme scheme,
                                           int n_cavities);

}  // namespace optomech
