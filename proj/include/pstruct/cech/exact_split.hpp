#pragma once

#include <optional>
#include <vector>

#include "pstruct/family/family.hpp"

namespace pstruct::cech {

/// Closed-form splitting h = tau / F = plus + minus for root-free families.
/// All entries live in the family variables and depend on (z, t) only;
/// theta_1 = plus and theta_2 o g = -minus.
struct ExactSplit {
  std::vector<exact::RatFunc> F, h, plus, minus;
};

/// nullopt when the family uses square roots. Throws ToleranceError when a
/// pole of h cannot be classified as inside or outside the unit circle at t0
/// (a factor with poles on both sides, or a pole in the annulus).
std::optional<ExactSplit> exact_split(const family::Family& fam, bool constant_to_plus = true);

}  // namespace pstruct::cech
