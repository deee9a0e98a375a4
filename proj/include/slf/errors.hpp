#pragma once

#include <stdexcept>
#include <string>

namespace slf {

// Exit-code classes used by the CLI: 2 = config, 3 = numeric, 4 = physics.
enum class ErrorClass { config = 2, numeric = 3, physics = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorClass::config, w) {}
};
struct OverlapError : ConfigError {
  explicit OverlapError(const std::string& w) : ConfigError(w) {}
};
struct ResolutionError : ConfigError {
  explicit ResolutionError(const std::string& w) : ConfigError(w) {}
};
struct DomainError : ConfigError {
  explicit DomainError(const std::string& w) : ConfigError(w) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(ErrorClass::numeric, w) {}
};
struct CutoffError : NumericError {
  explicit CutoffError(const std::string& w) : NumericError(w) {}
};
struct ConvergenceError : NumericError {
  explicit ConvergenceError(const std::string& w) : NumericError(w) {}
};
struct ZeroVgError : NumericError {
  explicit ZeroVgError(const std::string& w) : NumericError(w) {}
};
struct TableRangeError : NumericError {
  explicit TableRangeError(const std::string& w) : NumericError(w) {}
};

struct PhysicsError : Error {
  explicit PhysicsError(const std::string& w) : Error(ErrorClass::physics, w) {}
};
struct NoPlateauError : PhysicsError {
  explicit NoPlateauError(const std::string& w) : PhysicsError(w) {}
};
struct NoMinimumError : PhysicsError {
  explicit NoMinimumError(const std::string& w) : PhysicsError(w) {}
};
struct ResonanceError : PhysicsError {
  explicit ResonanceError(const std::string& w) : PhysicsError(w) {}
};

}  // namespace slf
