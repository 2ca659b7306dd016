#pragma once

// Going-up and going-down constructions: from one approximation record, a
// record one degree higher built from successive minima of an auxiliary body.

#include <map>
#include <optional>
#include <string>

#include "dioph/exponents.hpp"

namespace dioph {

enum class Direction { Up, Down };
const char* to_string(Direction d);

struct TransferWitness {
  Direction direction = Direction::Up;
  ApproximationRecord input;
  ApproximationRecord output;
  Enclosure omega;                        // the exponent the construction assumed for the input
  std::optional<Enclosure> omega_hat;     // set by the uniform variants
  std::string exponent_base;              // "output-norm" or "input-norm"
  Enclosure predicted_exponent;
  std::optional<Enclosure> achieved_exponent;
  Enclosure transfer_exponent;            // the resulting bound on the next exponent
  std::map<std::string, Enclosure> constants_log;
  std::vector<std::string> notes;
};

struct WitnessOptions {
  SearchMode mode = SearchMode::Exhaustive;
  long node_budget = kDefaultEnumerationBudget;
  int precision_cap = kDefaultPrecisionCap;
  std::optional<BigRational> omega_hint;  // defaults to the record's instant exponent
};

/// From a primal record of degree d+1 (d <= n-2) to one of degree d+2. The achieved
/// exponent is -log|y^X'| / log|X'| against ((n-d)w+1)/(n-d-1).
TransferWitness going_up_witness(const ThetaPoint& theta, const ApproximationRecord& record,
                                 const WitnessOptions& opts = {});

/// d = 0 with a uniform witness x, |x| < |X|: X' = X ^ x against (w+w^)/(1-w^).
TransferWitness going_up_uniform_witness(const ThetaPoint& theta, const ApproximationRecord& record,
                                         const ZVector& x, const WitnessOptions& opts = {});

/// From a dual record of degree n-d (d >= 1) to one of degree n-d+1. The achieved
/// exponent is -log|y _| X'| / log|X| against d w/(d+1).
TransferWitness going_down_witness(const ThetaPoint& theta, const ApproximationRecord& record,
                                   const WitnessOptions& opts = {});

/// d = n-1 with a uniform witness x, |y.x| < |y.X|: X' = X ^ x against w - w/w^,
/// the independence of x and X certified by the primitivity of X.
TransferWitness going_down_uniform_witness(const ThetaPoint& theta, const ApproximationRecord& record,
                                           const ZVector& x, const WitnessOptions& opts = {});

}  // namespace dioph
