#pragma once

// Seeded law checks for the exterior algebra and the geometry of numbers.

#include <cstdint>
#include <string>
#include <vector>

#include "dioph/bodies.hpp"

namespace dioph {

struct LawCount {
  std::string law;
  long checked = 0;
  long passed = 0;
};

struct AlgebraSelftest {
  std::uint64_t seed = 0;
  long samples = 0;  // random multivectors drawn
  std::vector<LawCount> laws;
  bool all_passed() const;
};

/// Dims 3..6 and every degree combination, `per_case` draws each.
AlgebraSelftest algebra_selftest(std::uint64_t seed, int per_case = 5);

/// |y _| X|^2 = |y ^ *X|^2 and |*X|^2 = |X|^2 for random integer X and rational y.
LawCount hodge_duality_selftest(std::uint64_t seed, int samples);

struct MinimaCase {
  std::string body;
  std::vector<Enclosure> lambdas;
  MinkowskiCheck check;
  bool passed = false;
};

struct MinimaSelftest {
  std::uint64_t seed = 0;
  std::vector<MinimaCase> cases;
  long passed = 0;
  ComparabilityReport mahler;
};

/// Random boxes and PRIMAL/DUAL bodies in ambient dims 2..4, plus Mahler instances
/// on PRIMAL bodies with n = 2, 3.
MinimaSelftest minima_selftest(std::uint64_t seed, int bodies, int mahler_bodies,
                               long node_budget = kDefaultEnumerationBudget);

}  // namespace dioph
