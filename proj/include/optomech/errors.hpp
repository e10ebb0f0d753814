#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

/// Broad failure categories. The CLI maps each one to a process exit code.
enum class ErrorKind {
  Config,       // bad parameters, bad indices, unknown names
  NoConvergence,
  Unstable,
  Numerical,    // ill-conditioned solve, unphysical covariance matrix
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class NonPhysicalParameter : public Error {
 public:
  NonPhysicalParameter(std::string field, const std::string& why)
      : Error(ErrorKind::Config, "non-physical parameter '" + field + "': " + why),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class SchemeMismatch : public Error {
 public:
  explicit SchemeMismatch(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double last_residual)
      : Error(ErrorKind::NoConvergence, what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// Fixed-point iteration locked into a period-2 cycle even after damping.
class OscillationDetected : public NoConvergence {
 public:
  OscillationDetected(const std::string& what, double last_residual)
      : NoConvergence(what, last_residual) {}
};

class UnstableSystem : public Error {
 public:
  UnstableSystem(const std::string& what, double spectral_abscissa)
      : Error(ErrorKind::Unstable, what), spectral_abscissa_(spectral_abscissa) {}
  double spectral_abscissa() const noexcept { return spectral_abscissa_; }

 private:
  double spectral_abscissa_;
};

class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double achieved_residual)
      : Error(ErrorKind::Numerical, what), achieved_residual_(achieved_residual) {}
  double achieved_residual() const noexcept { return achieved_residual_; }

 private:
  double achieved_residual_;
};

class UnphysicalCM : public Error {
 public:
  UnphysicalCM(const std::string& what, double min_eigenvalue)
      : Error(ErrorKind::Numerical, what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class IndexOutOfRange : public Error {
 public:
  explicit IndexOutOfRange(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class BadIndices : public Error {
 public:
  explicit BadIndices(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class UnknownPreset : public Error {
 public:
  explicit UnknownPreset(const std::string& name)
      : Error(ErrorKind::Config, "unknown preset '" + name + "'") {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

}  // namespace optomech
