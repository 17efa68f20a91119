#pragma once

#include <stdexcept>
#include <string>

namespace slspec {

// Every failure carries the module and operation that raised it so the CLI
// can emit a machine-readable record.
class Error : public std::runtime_error {
 public:
  Error(std::string module, std::string operation, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)), operation_(std::move(operation)) {}

  const std::string& module() const { return module_; }
  const std::string& operation() const { return operation_; }

 private:
  std::string module_;
  std::string operation_;
};

}  // namespace slspec
