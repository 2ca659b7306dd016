#pragma once

// Points Theta of R^n, rational projective subspaces via Pluecker vectors,
// heights and projective distances.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dioph/linalg.hpp"
#include "dioph/multivector.hpp"
#include "dioph/numerics.hpp"

namespace dioph {

/// theta = base^power; powers let (alpha, alpha^2) share one algebraic description.
struct ThetaCoordinate {
  RealDescription base;
  unsigned power = 1;
};

class ThetaPoint {
 public:
  ThetaPoint() = default;
  explicit ThetaPoint(std::vector<ThetaCoordinate> coords);

  int n() const { return static_cast<int>(coords_.size()); }
  int ambient_dim() const { return n() + 1; }
  const std::vector<ThetaCoordinate>& coords() const { return coords_; }

  /// theta_i for 1 <= i <= n, width <= 2^-bits.
  Enclosure theta(int i, int bits) const;
  /// y = (1, theta_1, ..., theta_n), each coordinate of width <= 2^-bits.
  std::vector<Enclosure> y(int bits) const;
  bool has_rational_coordinate() const;
  std::string describe() const;

 private:
  std::vector<ThetaCoordinate> coords_;
  struct Cache {
    std::mutex mu;
    std::map<std::pair<int, int>, Enclosure> values;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

struct RationalSubspace {
  int n = 0;
  int dim = 0;  // projective dimension d
  IntegerMultivector plucker;
  bool decomposable = false;
};

struct ProjectiveDistance {
  Enclosure value;
  BigRational numerator_sq;    // |x ^ y|^2
  BigRational denominator_sq;  // |x|^2 |y|^2
};

struct DecomposabilityResult {
  bool decomposable = false;
  std::vector<ZVector> kernel;  // basis of {v : v ^ X = 0}
};

RationalSubspace subspace_from_basis(const std::vector<ZVector>& vectors);
BigInt height_sq(const RationalSubspace& l);
Enclosure height(const RationalSubspace& l, int bits = 64);
ProjectiveDistance proj_distance(const std::vector<BigRational>& p, const std::vector<BigRational>& q, int bits = 64);
/// |y ^ X| / (|y| |X|), refined until the width is at most 2^-bits.
Enclosure dist_theta_subspace(const ThetaPoint& theta, const RationalSubspace& l, int bits = 64,
                              int cap_bits = kDefaultPrecisionCap);
DecomposabilityResult is_decomposable(const IntegerMultivector& x);

// Error functionals of an integer multivector against y given as enclosures.

/// Enclosure of |y ^ X|.
Enclosure wedge_error(const std::vector<Enclosure>& y, const IntegerMultivector& x, int bits);
/// Enclosure of |y _| X|.
Enclosure contract_error(const std::vector<Enclosure>& y, const IntegerMultivector& x, int bits);
Enclosure euclidean_norm(const IntegerMultivector& x, int bits);

using EMatrix = std::vector<std::vector<Enclosure>>;

/// Matrix of Z |-> y ^ Z from Lambda^r to Lambda^{r+1} in lex monomial bases.
EMatrix wedge_matrix(const std::vector<Enclosure>& y, int r);
/// Matrix of Z |-> y _| Z from Lambda^r to Lambda^{r-1}.
EMatrix contract_matrix(const std::vector<Enclosure>& y, int r);

}  // namespace dioph
