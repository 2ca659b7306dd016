#pragma once

// Symmetric convex bodies attached to Theta, their successive minima over
// the integer lattice, volumes, and Mahler compounds.
//
// A body is the unit ball of a norm N built from blocks: N(z) combines
// |B_b z|_p over blocks b (maximum, or sum). Matrix entries are enclosures,
// so N(z) is an enclosure too. Lattice points are found by enumerating an
// ellipsoid that provably contains the body.

#include <optional>
#include <string>
#include <vector>

#include "dioph/linalg.hpp"
#include "dioph/projective.hpp"

namespace dioph {

enum class BodyKind { Primal, Dual, Box, SupNorm, Compound };
enum class NormKind { L1, L2, Linf };
enum class Combine { Max, Sum };

const char* to_string(BodyKind k);

struct BodySpec {
  BodyKind kind = BodyKind::Box;
  ThetaPoint theta;
  /// Primal/Dual: the lattice is Lambda^degree(Z^{n+1}); Compound: the order k.
  int degree = 1;
  BigRational U = 1;
  BigRational V = 1;
  std::vector<BigRational> widths;   // Box half-widths
  BodyKind base = BodyKind::Primal;  // Compound: kind of the base body
  bool linear_form = false;          // SupNorm: linear form instead of simultaneous system

  int ambient_dim() const;  // n + 1 (or the box dimension)
  int lattice_dim() const;
  std::string describe() const;
};

/// |z| <= U, |y ^ z| <= V on Lambda^degree.
BodySpec primal_body(const ThetaPoint& theta, const BigRational& U, const BigRational& V, int degree = 1);
/// |z| <= U, |y _| z| <= V on Lambda^degree.
BodySpec dual_body(const ThetaPoint& theta, const BigRational& U, const BigRational& V, int degree = 1);
/// |z_i| <= w_i.
BodySpec box_body(std::vector<BigRational> widths);
/// max|z_i| <= X and either max_i |z_0 theta_i - z_i| <= v or |z_0 + sum z_i theta_i| <= v.
BodySpec sup_body(const ThetaPoint& theta, bool linear_form, const BigRational& X, const BigRational& v);
/// Parallelepiped spanned by the order-k wedges of the base body's comparable
/// parallelepiped, in Lambda^k(Z^{n+1}). The base must be degree-1 Primal/Dual or a Box.
BodySpec compound_body(const BodySpec& base, int k);

struct NormBlock {
  EMatrix matrix;
  NormKind kind = NormKind::L2;
  bool exact = false;  // all entries exact rationals
};

struct BodyNorm {
  std::vector<NormBlock> blocks;
  Combine combine = Combine::Max;
  BigRational rho;  // |z|_2 <= rho * N(z)
  int bits = 64;
};

BodyNorm body_norm(const BodySpec& spec, int bits);

struct NormValue {
  Enclosure value;
  /// N(z)^2 exactly, when the block realizing N(z) has exact entries.
  std::optional<BigRational> exact_sq;
};

NormValue evaluate_norm(const BodyNorm& norm, const ZVector& z);
/// Certified strict comparison; nullopt when the enclosures cannot separate the values.
std::optional<bool> norm_less(const NormValue& a, const NormValue& b);

/// Ellipsoid {x : x^T gram x <= c_q * lambda^2} containing lambda * body.
struct Ellipsoid {
  QMatrix gram;
  BigRational c_q;
  BigRational c_k;  // N(z) <= c_k * sqrt(x^T gram x)
};

Ellipsoid enclosing_ellipsoid(const BodyNorm& norm);

/// Every nonzero lattice point (one per sign pair) with N(z) <= level, possibly with extra points.
std::vector<ZVector> body_candidates(const BodySpec& spec, const BigRational& level, long node_budget, int bits);

enum class MinimaMethod { Exhaustive, Reduced };
const char* to_string(MinimaMethod m);

struct MinimaProfile {
  std::vector<Enclosure> lambdas;
  std::vector<ZVector> witnesses;
  MinimaMethod method = MinimaMethod::Exhaustive;
  BigRational level;    // Exhaustive: enumeration level certifying completeness
  long candidates = 0;  // lattice points examined
  BigRational slack;    // Reduced: the constant c_m = 2^{(m-1)/2} (upper bound)
  int bits = 64;
};

inline constexpr long kDefaultEnumerationBudget = 20'000'000;

MinimaProfile minima_exhaustive(const BodySpec& spec, long node_budget = kDefaultEnumerationBudget, int bits = 64);
MinimaProfile minima_reduced(const BodySpec& spec, int bits = 64);
/// lambda_1 only, with the same certification as minima_exhaustive.
MinimaProfile first_minimum(const BodySpec& spec, long node_budget = kDefaultEnumerationBudget, int bits = 64);

/// Lebesgue volume of degree-1 Primal/Dual bodies, boxes and compounds.
Enclosure body_volume(const BodySpec& spec, int steps = 4096);
/// Volume 2^m |det A| prod(s) of the comparable parallelepiped of a degree-1 Primal/Dual body or box.
Enclosure parallelepiped_volume(const BodySpec& spec);

struct MinkowskiCheck {
  Enclosure product;  // (prod lambda_i) * vol
  Enclosure volume;
  BigRational lower_bound;  // 2^m / m!
  BigRational upper_bound;  // 2^m
  Certificate lower_ok = Certificate::Undecided;
  Certificate upper_ok = Certificate::Undecided;
};

MinkowskiCheck minkowski_check(const BodySpec& spec, const MinimaProfile& profile);

struct MahlerInstance {
  std::string body;
  int k = 1;
  std::vector<Enclosure> base_lambdas;
  std::vector<Enclosure> compound_lambdas;  // lambda_1 of the compound
  Enclosure product;                        // lambda_1 ... lambda_k of the base
  Enclosure ratio;                          // lambda_1(compound) / product
};

struct ComparabilityReport {
  std::vector<MahlerInstance> instances;
  BigRational kappa_observed = 1;
  void add(MahlerInstance inst);
};

MahlerInstance mahler_check(const BodySpec& base, int k, long node_budget = kDefaultEnumerationBudget,
                            ComparabilityReport* report = nullptr);

/// Generators g_S of a compound body, as multivectors with enclosure coefficients (dense, lex order).
struct Generator {
  IndexMask subset;  // indices of the base directions used
  std::vector<Enclosure> coords;
};
std::vector<Generator> compound_generators(const BodySpec& compound, int bits);

/// Largest |g|/(U V^{k-1}) and |y^g|/V^k (Primal), or |g|/(V U^{k-1}) and |y_|g|/(|y|^2 U^{k-1} V) (Dual)
/// over the generators of a compound body.
struct GeneratorConstants {
  Enclosure norm_ratio;
  Enclosure error_ratio;
};
GeneratorConstants compound_generator_constants(const BodySpec& compound, int bits = 64);

}  // namespace dioph
