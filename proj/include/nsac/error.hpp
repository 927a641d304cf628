#ifndef NSAC_ERROR_HPP
#define NSAC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nsac {

// Every exception thrown by the library derives from Error and carries a
// category so the C layer can map it onto a status code.
enum class ErrorKind {
  domain,         // argument outside the mathematical domain (v <= 0, t < 0, ...)
  admissibility,  // data does not form the requested wave configuration
  config,         // malformed or inconsistent configuration
  numerical,      // iteration failure, positivity loss, tolerance not met
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

struct AdmissibilityError : Error {
  explicit AdmissibilityError(const std::string& what)
      : Error(ErrorKind::admissibility, what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace nsac

#endif
