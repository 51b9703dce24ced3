#pragma once

#include <stdexcept>
#include <string>

namespace nds {

// The state domain in use is not finite/enumerable, so a get continuation
// cannot be scanned syntactically.
struct unbounded_state_domain : std::runtime_error {
  unbounded_state_domain()
      : std::runtime_error(
            "state domain is not enumerable; cannot scan a get continuation") {}
};

// The well-foundedness surrogate failed: unfolding ran out of fuel, or a
// declared seed measure did not strictly decrease.
struct fuel_exhausted : std::runtime_error {
  explicit fuel_exhausted(const std::string& what) : std::runtime_error(what) {}
};

// A tabulated function was applied outside the domain it was generated for.
struct domain_violation : std::runtime_error {
  explicit domain_violation(const std::string& what) : std::runtime_error(what) {}
};

// The diagonal check was asked about a state with no placements yet.
struct empty_state : std::runtime_error {
  empty_state() : std::runtime_error("ok is undefined on a state with no placements") {}
};

// A law id that is not in the catalogue.
struct unknown_law : std::runtime_error {
  explicit unknown_law(const std::string& id) : std::runtime_error("unknown law: " + id) {}
};

}  // namespace nds
