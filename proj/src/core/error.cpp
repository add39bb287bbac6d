#include "bbohub/core/error.hpp"

namespace bbohub {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::validation: return "validation";
    case Errc::not_found: return "not_found";
    case Errc::arity: return "arity";
    case Errc::empty: return "empty";
    case Errc::configuration: return "configuration";
    case Errc::sampler: return "sampler";
    case Errc::corruption: return "corruption";
    case Errc::unsupported: return "unsupported";
    case Errc::parse: return "parse";
    case Errc::fetch: return "fetch";
    case Errc::binding: return "binding";
    case Errc::protocol: return "protocol";
    case Errc::timeout: return "timeout";
    case Errc::contract_violation: return "contract_violation";
    case Errc::state: return "state";
    case Errc::capability: return "capability";
    case Errc::version: return "version";
    case Errc::startup: return "startup";
    case Errc::remote: return "remote";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace bbohub
