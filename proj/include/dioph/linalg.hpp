#pragma once

// Exact linear algebra over Q and Z: elimination, lattice reduction on a
// Gram matrix, and short-vector enumeration.

#include <vector>

#include "dioph/numerics.hpp"

namespace dioph {

using QVector = std::vector<BigRational>;
using QMatrix = std::vector<QVector>;
using ZVector = std::vector<BigInt>;
using ZMatrix = std::vector<ZVector>;

std::size_t rank(QMatrix rows);
std::size_t rank(const ZMatrix& rows);
/// Basis of {v : a v = 0} as primitive integer vectors.
std::vector<ZVector> kernel(const QMatrix& a, std::size_t cols);
BigRational determinant(QMatrix a);
QMatrix to_rational(const ZMatrix& a);

/// Divides by the gcd and makes the first nonzero entry positive.
ZVector primitive_sign_normalized(ZVector v);
bool lex_less(const ZVector& a, const ZVector& b);

/// x^T g x
BigRational quadratic_form(const QMatrix& g, const ZVector& x);

struct ReducedBasis {
  ZMatrix transform;  // rows: reduced basis vectors in the original coordinates
  QMatrix gram;       // Gram matrix of the reduced basis
};

/// LLL reduction of a positive definite rational Gram matrix.
ReducedBasis lll_gram(const QMatrix& gram, const BigRational& delta = BigRational(99, 100));

/// All nonzero x with x^T gram x <= bound, one per +/- pair, sign-normalized
/// and sorted lexicographically. Throws BudgetExceeded past node_budget nodes.
std::vector<ZVector> short_vectors(const QMatrix& gram, const BigRational& bound, long node_budget);

}  // namespace dioph
