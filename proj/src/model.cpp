#include "optomech/model.hpp"

#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;

void require(bool ok, const char* field, const char* why) {
  if (!ok) throw NonPhysicalParameter(field, why);
}

double rate_factor(FrequencyUnit unit) { return unit == FrequencyUnit::Hz ? kTwoPi : 1.0; }

SystemParams scale_rates(SystemParams p, double factor) {
  for (double& k : p.kappa) k *= factor;
  for (double& g : p.gamma_m) g *= factor;
  if (p.detuning_2.kind == Detuning::Kind::Absolute) p.detuning_2.value *= factor;
  if (p.g0_override) *p.g0_override *= factor;
  return p;
}

}  // namespace

std::string_view to_string(FrequencyUnit unit) {
  return unit == FrequencyUnit::Hz ? "hz" : "rad_per_s";
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Single: return "single";
    case Scheme::TwoCavityBS: return "two-cavity-bs";
    case Scheme::DualPolarization: return "dual-polarization";
  }
  return "?";
}

std::string_view to_string(InputNoise noise) {
  return noise == InputNoise::SharedPort ? "shared_port" : "independent";
}

InputNoise parse_input_noise(std::string_view text) {
  if (text == "independent") return InputNoise::Independent;
  if (text == "shared_port") return InputNoise::SharedPort;
  throw ConfigError("unknown input_noise '" + std::string(text) + "' (independent | shared_port)");
}

FrequencyUnit parse_frequency_unit(std::string_view text) {
  if (text == "rad_per_s") return FrequencyUnit::RadPerS;
  if (text == "hz") return FrequencyUnit::Hz;
  throw ConfigError("unknown frequency_unit '" + std::string(text) + "' (rad_per_s | hz)");
}

Scheme parse_scheme(std::string_view text) {
  if (text == "single") return Scheme::Single;
  if (text == "two-cavity-bs") return Scheme::TwoCavityBS;
  if (text == "dual-polarization") return Scheme::DualPolarization;
  throw ConfigError("unknown scheme '" + std::string(text) +
                    "' (single | two-cavity-bs | dual-polarization)");
}

void validate(const SystemParams& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  require(finite(p.cavity_length) && p.cavity_length > 0, "cavity_length", "must be > 0");
  require(finite(p.effective_mass) && p.effective_mass > 0, "effective_mass", "must be > 0");
  require(finite(p.wavelength) && p.wavelength > 0, "wavelength", "must be > 0");
  require(finite(p.input_power) && p.input_power >= 0, "input_power", "must be >= 0");
  require(finite(p.temperature) && p.temperature >= 0, "temperature", "must be >= 0");
  require(p.kappa.size() == 1 || p.kappa.size() == 2 || p.kappa.size() == 4, "kappa",
          "expected 1, 2 or 4 entries");
  for (double k : p.kappa) require(finite(k) && k > 0, "kappa", "every entry must be > 0");
  require(p.gamma_m.size() == 1, "gamma_m", "expected exactly one entry per cavity");
  for (double g : p.gamma_m) require(finite(g) && g > 0, "gamma_m", "must be > 0");
  require(finite(p.detuning_2.value), "detuning_2", "must be finite");
  if (p.g0_override)
    require(finite(*p.g0_override) && *p.g0_override >= 0, "g0_override", "must be >= 0");
}

SystemParams ingest(const SystemParams& params) {
  SystemParams out = scale_rates(params, rate_factor(params.frequency_unit));
  out.frequency_unit = FrequencyUnit::RadPerS;
  return out;
}

SystemParams express_in(const SystemParams& params, FrequencyUnit unit) {
  SystemParams rad = ingest(params);
  SystemParams out = scale_rates(rad, 1.0 / rate_factor(unit));
  out.frequency_unit = unit;
  return out;
}

double mechanical_frequency(double cavity_length) {
  return constants::pi * constants::speed_of_light / (2.0 * cavity_length);
}

double thermal_occupation(double omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::k_boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

DerivedConstants derive_constants(const SystemParams& input) {
  validate(input);
  const SystemParams p = ingest(input);

  std::vector<double> kappa = p.kappa;
  if (kappa.size() == 1) kappa.assign(2, kappa.front());

  DerivedConstants dc;
  dc.omega_m = mechanical_frequency(p.cavity_length);
  const double omega_1 = kTwoPi * constants::speed_of_light / p.wavelength;
  const double omega_2 = omega_1 + 2.0 * dc.omega_m;

  const double delta_2 = p.detuning_2.kind == Detuning::Kind::Absolute
                             ? p.detuning_2.value
                             : p.detuning_2.value * dc.omega_m;
  const double delta_1 = delta_2 - 2.0 * dc.omega_m;

  dc.g0 = std::sqrt(constants::hbar * omega_1 * omega_2 / (p.effective_mass * dc.omega_m)) /
          p.cavity_length;
  if (p.g0_override) dc.g0 = *p.g0_override;
  dc.nbar = thermal_occupation(dc.omega_m, p.temperature);
  dc.gamma_m = p.gamma_m.front();
  dc.input_noise = p.input_noise;
  dc.kappa = kappa;

  for (std::size_t j = 0; j < kappa.size(); ++j) {
    const bool lower = (j % 2 == 0);
    const double w = lower ? omega_1 : omega_2;
    dc.omega.push_back(w);
    dc.delta.push_back(lower ? delta_1 : delta_2);
    dc.eta.push_back(std::sqrt(2.0 * p.input_power * kappa[j] / (constants::hbar * w)));
  }
  return dc;
}

std::vector<CavityConstants> scheme_params(const SystemParams& params, Scheme scheme,
                                           int n_cavities) {
  if (n_cavities < 1) throw SchemeMismatch("n_cavities must be >= 1");
  if (scheme == Scheme::Single && n_cavities != 1)
    throw SchemeMismatch("scheme 'single' requires exactly one cavity");
  if (scheme == Scheme::TwoCavityBS && n_cavities < 2)
    throw SchemeMismatch("scheme 'two-cavity-bs' requires at least two cavities");

  SystemParams cavity = params;
  if (scheme == Scheme::DualPolarization) {
    if (cavity.kappa.size() == 1) cavity.kappa.assign(4, cavity.kappa.front());
    if (cavity.kappa.size() == 2)
      cavity.kappa = {cavity.kappa[0], cavity.kappa[1], cavity.kappa[0], cavity.kappa[1]};
  } else if (cavity.kappa.size() == 4) {
    throw SchemeMismatch("four kappa entries only make sense for 'dual-polarization'");
  } else if (cavity.kappa.size() == 1) {
    cavity.kappa.assign(2, cavity.kappa.front());
  }

  const DerivedConstants dc = derive_constants(cavity);
  return std::vector<CavityConstants>(static_cast<std::size_t>(n_cavities),
                                      CavityConstants{cavity, dc});
}

}  // namespace optomech
