#pragma once

#include <stdexcept>
#include <string>

namespace homext {

enum class errc {
  degenerate_source,
  degenerate_interval,
  degenerate_triangle,
  divergent_integral,
  negative_weight,
  out_of_domain,
  invalid_parameter,
  invalid_letter,
  param_mismatch,
  precondition_violated,
  injectivity_check_failed,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::degenerate_source: return "DegenerateSource";
    case errc::degenerate_interval: return "DegenerateInterval";
    case errc::degenerate_triangle: return "DegenerateTriangle";
    case errc::divergent_integral: return "DivergentIntegral";
    case errc::negative_weight: return "NegativeWeight";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::invalid_parameter: return "InvalidParameter";
    case errc::invalid_letter: return "InvalidLetter";
    case errc::param_mismatch: return "ParamMismatch";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::injectivity_check_failed: return "InjectivityCheckFailed";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace homext
