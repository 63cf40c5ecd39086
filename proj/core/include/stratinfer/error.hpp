#pragma once

#include <stdexcept>
#include <string>

namespace stratinfer {

enum class ErrorCode {
  ZeroResultant,
  TooShort,
  NonFinitePosition,
  EmptyInformedSet,
  InvalidSpec,
  InvalidParam,
  NoInformedAgent,
  InfeasibleKappa,
  InconsistentAgents,
  SingleClass,
  Parse,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code; the CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stratinfer
