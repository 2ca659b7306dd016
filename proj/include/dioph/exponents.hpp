#pragma once

// Empirical lower bounds for the exponents omega_d(Theta) and the uniform
// exponents from best-approximation searches.

#include <optional>
#include <string>
#include <vector>

#include "dioph/bodies.hpp"

namespace dioph {

enum class SearchMode { Exhaustive, Reduced };
enum class ErrorForm { Primal, Dual };

const char* to_string(SearchMode m);
const char* to_string(ErrorForm f);

struct ApproximationRecord {
  IntegerMultivector X;
  ErrorForm form = ErrorForm::Primal;
  int d = 0;
  BigInt norm_sq;
  Enclosure norm;
  Enclosure error;  // |y ^ X| or |y _| X|
  std::optional<Enclosure> instant_exponent;  // -log(error)/log(norm), when norm > 1
};

struct SearchOptions {
  SearchMode mode = SearchMode::Exhaustive;
  long node_budget = kDefaultEnumerationBudget;
  int precision_cap = kDefaultPrecisionCap;
  BigRational grid_ratio = 2;
};

struct RecordSearch {
  std::vector<ApproximationRecord> records;  // best-approximation staircase
  BigRational search_height;
  bool degenerate = false;  // a certified zero error on a point with a rational coordinate
  long candidates = 0;
};

/// Geometric grid 1, r, r^2, ... capped by and ending at height.
std::vector<BigRational> height_grid(const BigRational& height, const BigRational& ratio);

ApproximationRecord make_record(const ThetaPoint& theta, IntegerMultivector X, ErrorForm form, int d,
                                int precision_cap = kDefaultPrecisionCap);
Enclosure instant_exponent(const Enclosure& norm, const Enclosure& error, int bits = 64);

RecordSearch record_search_primal(const ThetaPoint& theta, int d, const BigRational& height_limit,
                                  const SearchOptions& opts = {});
RecordSearch record_search_dual(const ThetaPoint& theta, int d, const BigRational& height_limit,
                                const SearchOptions& opts = {});

/// Keeps the points of strictly increasing norm and strictly decreasing error.
std::vector<ApproximationRecord> staircase(std::vector<ApproximationRecord> points, int precision_cap);

struct UniformGridPoint {
  BigRational X;
  Enclosure minimum;        // m(X)
  ZVector witness;
  std::optional<Enclosure> exponent;  // -log m(X) / log X
};

struct ExponentEstimate {
  std::string which;  // "omega_d", "omega_hat_0", "omega_hat_top"
  bool uniform = false;
  int d = 0;
  ExtendedReal lower_bound;
  std::vector<ApproximationRecord> witnesses;
  std::vector<UniformGridPoint> grid;
  BigRational search_height;
  std::vector<Enclosure> trend;
  std::vector<std::string> flags;  // NONCONVERGED, HEURISTIC-UNIFORM, DEGENERATE
};

ExponentEstimate estimate_omega(const RecordSearch& search, int window = 5);

struct UniformOptions {
  SearchMode mode = SearchMode::Exhaustive;
  long node_budget = kDefaultEnumerationBudget;
  int precision_cap = kDefaultPrecisionCap;
  BigRational tail_ratio = 10;  // the estimate is the minimum over X >= height / tail_ratio
};

/// which_top = false: omega_hat_0 (simultaneous); true: omega_hat_{n-1} (linear form).
ExponentEstimate estimate_uniform(const ThetaPoint& theta, bool which_top, const std::vector<BigRational>& grid,
                                  const UniformOptions& opts = {});

/// Dirichlet floor (d+1)/(n-d).
BigRational dirichlet_floor(int n, int d);

/// Body parameters U = H^{(d w + d + 1)/(d+1)}, V = H^{-w/(d+1)} as dyadic rationals,
/// with U V^d = H and V^{d+1} = H^{-w} checked to 2^-40 relative accuracy.
std::pair<BigRational, BigRational> primal_parameters(const BigRational& H, const BigRational& omega, int d);
/// U = H^{1/(n-d)}, V = H^{-((n-d) w + n-d-1)/(n-d)}.
std::pair<BigRational, BigRational> dual_parameters(const BigRational& H, const BigRational& omega, int n, int d);

/// Records as "log_norm,log_error,instant_exponent" lines with a header.
std::string staircase_csv(const std::vector<ApproximationRecord>& records);

}  // namespace dioph
