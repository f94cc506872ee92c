#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bellbound {

// Fault categories. The CLI maps them to exit codes:
// validation -> 2, budget -> 3.
enum class ErrorKind { validation, budget };

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    static Error validation(std::string msg) {
        return Error(ErrorKind::validation, std::move(msg));
    }
    static Error budget(std::string msg) {
        return Error(ErrorKind::budget, std::move(msg));
    }

  private:
    ErrorKind kind_;
};

} // namespace bellbound
