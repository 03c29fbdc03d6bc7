#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "shiftforge/errors.hpp"

namespace shiftforge {

inline constexpr std::uint64_t kDefaultTermCap = 1'000'000;
inline constexpr std::uint64_t kDefaultPointCap = 10'000'000;

/// Term cap for expansions; SHIFTFORGE_TERM_CAP overrides the default.
inline std::uint64_t default_term_cap() {
  const char* env = std::getenv("SHIFTFORGE_TERM_CAP");
  if (env == nullptr || *env == '\0') return kDefaultTermCap;
  std::string s(env);
  if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 18)
    throw FormatError("SHIFTFORGE_TERM_CAP must be a non-negative integer");
  return std::stoull(s);
}

}  // namespace shiftforge
