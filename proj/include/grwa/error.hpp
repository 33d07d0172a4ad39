#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grwa {

// Machine-readable failure categories. The CLI serializes these as the
// "code" field of its error JSON.
enum class errc {
  invalid_argument,
  truncation_cap,
  non_convergence,
  negative_husimi,
  no_crossing,
  aperiodic,
  mandel_undefined,
  under_truncation,
  oracle_convergence,
  config,
  io,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::truncation_cap: return "truncation_cap";
    case errc::non_convergence: return "non_convergence";
    case errc::negative_husimi: return "negative_husimi";
    case errc::no_crossing: return "no_crossing";
    case errc::aperiodic: return "aperiodic";
    case errc::mandel_undefined: return "mandel_undefined";
    case errc::under_truncation: return "under_truncation";
    case errc::oracle_convergence: return "oracle_convergence";
    case errc::config: return "config";
    case errc::io: return "io";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) throw error(code, what);
}

}  // namespace grwa
