#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fairaudit {

// Base error type. Every throw site attaches a stable identifier so CLI
// diagnostics and logs can be matched without parsing prose.
class Error : public std::runtime_error {
 public:
  Error(std::string id, const std::string& message)
      : std::runtime_error("[" + id + "] " + message), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// Invalid configuration: bad flags, malformed lexicons, out-of-range
// parameters. Mapped to CLI exit code 1.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::string id = "E_CONFIG")
      : Error(std::move(id), message) {}
};

// Filesystem and dataset parse failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& message, std::string id = "E_IO")
      : Error(std::move(id), message) {}
};

// Violations of a wire contract by a remote endpoint or a score file.
class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& message, std::string id = "E_PROTOCOL")
      : Error(std::move(id), message) {}
};

}  // namespace fairaudit
