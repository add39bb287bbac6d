#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bbohub {

enum class Errc : std::uint8_t {
  validation,
  not_found,
  arity,
  empty,
  configuration,
  sampler,
  corruption,
  unsupported,
  parse,
  fetch,
  binding,
  protocol,
  timeout,
  contract_violation,
  state,
  capability,
  version,
  startup,
  remote,
  io,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bbohub
