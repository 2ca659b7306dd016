#pragma once

// Test points Theta: algebraic, lacunary (Liouville type) and user supplied.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dioph/exponents.hpp"
#include "dioph/transfer.hpp"

namespace dioph {

enum class IndependenceCertificate { AlgebraicProof, ByConstruction, Unchecked };
const char* to_string(IndependenceCertificate c);

struct CatalogEntry {
  std::string name;
  ThetaPoint theta;
  IndependenceCertificate certificate = IndependenceCertificate::Unchecked;
  std::optional<ExponentVector> expected;  // ASSERTED, with a literature note
  std::string note;
};

inline constexpr int kMaxIrreducibilityDegree = 8;

/// Theta = (alpha^p) for p in powers, alpha the root of coeffs (ascending) in [lower, upper].
CatalogEntry algebraic_point(const std::string& name, const std::vector<BigInt>& coeffs, const BigRational& lower,
                             const BigRational& upper, const std::vector<unsigned>& powers);

/// Theta = (xi, xi^2), xi = sum_k base^(-a_k), with a_{k+1} >= 2 a_k.
CatalogEntry liouville_point(const std::string& name, const BigInt& base, const Schedule& schedule, int n = 2);

/// Finite-precision coordinates; independence is the caller's waiver.
CatalogEntry user_point(const std::string& name, const std::vector<RealDescription>& coords);

/// Coordinates k / 2^64 with k drawn from a generator seeded by `seed`.
CatalogEntry random_point(const std::string& name, int n, std::uint64_t seed);

/// cubic, sqrt2, quartic, liouville3, liouville-factorial.
CatalogEntry builtin_entry(const std::string& name);
std::vector<std::string> builtin_names();

/// Truncation xi_K = p/q with q = base^{a_K}: |q xi - p| <= 2 q base^{-a_{K+1}} by design.
struct TruncationWitness {
  long K = 0;
  BigInt p;
  BigInt q;
  Enclosure error;             // |q xi - p|
  BigRational designed_bound;  // 2 q base^{-a_{K+1}}
  bool verified = false;
  Enclosure exponent;          // -log|q xi - p| / log q
  ApproximationRecord record;  // the simultaneous point (q^2, pq, p^2)
};

/// All truncations with q <= q_limit.
std::vector<TruncationWitness> truncation_witnesses(const CatalogEntry& entry, const BigRational& q_limit,
                                                    int precision_cap = kDefaultPrecisionCap);

}  // namespace dioph
