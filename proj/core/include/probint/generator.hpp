#pragma once

#include <cstdint>

#include "probint/model.hpp"

namespace probint::generator {

enum class Mode {
  Free,       // arbitrary sparse tables, no condition targeting
  Smallness,  // every event strictly below its admissibility threshold
};

struct Config {
  int m_min = 2, m_max = 10;        // coordinate count
  int atoms_min = 2, atoms_max = 3; // atoms per coordinate
  int n_min = 1, n_max = 8;         // event count
  int support_max = 3;
  Mode mode = Mode::Free;
};

// Deterministic in (seed, config). Smallness mode gives each coordinate a
// rare atom with probability 1/D for D drawn above (3 max(5, n-1))^3, and
// events true on all-rare corners (occasionally one extra cell when the
// exact threshold still holds), which keeps every event strictly
// admissible at any reachable degree.
model::Instance generate_instance(std::uint64_t seed, const Config& config);

}  // namespace probint::generator
