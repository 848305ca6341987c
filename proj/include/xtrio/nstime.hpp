#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace xtrio {

/// An instant v + k*eps of the naturals extended with a fixed infinitesimal.
///
/// Only the coefficient pair is stored, so every comparison is exact. The
/// defaulted ordering is lexicographic on (std_part, inf_part), which is the
/// order of the extended domain: any multiple of eps is below one unit.
struct NsInstant {
  std::uint64_t std_part = 0;
  std::uint64_t inf_part = 0;

  constexpr auto operator<=>(const NsInstant&) const = default;

  constexpr bool is_standard() const noexcept { return inf_part == 0; }
};

enum class StepKind : std::uint8_t { micro, macro };

constexpr std::strong_ordering ns_compare(const NsInstant& a, const NsInstant& b) noexcept {
  return a <=> b;
}

constexpr NsInstant ns_add(const NsInstant& a, const NsInstant& b) noexcept {
  return {a.std_part + b.std_part, a.inf_part + b.inf_part};
}

/// Successor of a history element: a micro step adds eps, a macro step lands
/// on the next standard natural.
constexpr NsInstant step(const NsInstant& a, StepKind kind) noexcept {
  if (kind == StepKind::micro) return {a.std_part, a.inf_part + 1};
  return {a.std_part + 1, 0};
}

inline std::string to_string(const NsInstant& t) {
  std::string out = std::to_string(t.std_part);
  if (t.inf_part != 0) {
    out += '+';
    out += std::to_string(t.inf_part);
    out += "*eps";
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const NsInstant& t) { return os << to_string(t); }

inline const char* to_string(StepKind k) noexcept { return k == StepKind::micro ? "micro" : "macro"; }

}  // namespace xtrio
