#pragma once

#include "arealaw/detail/pauli.hpp"
#include "arealaw/lattice.hpp"

namespace arealaw::detail {

/// Generator `g` acting at `position` of an n-site representation.
PauliSum generator_string(int sites, int position, Statistics s, Generator g);

}  // namespace arealaw::detail
