#pragma once

#include "dioph/bodies.hpp"

namespace dioph::detail {

/// Comparable parallelepiped {sum c_i s_i a_i : |c_i| <= 1} of a degree-1 body:
/// columns a_i of `a`, its inverse, and the scales s_i.
struct Frame {
  EMatrix a;
  EMatrix a_inv;
  std::vector<BigRational> scales;
};

Frame frame(const BodySpec& spec, int bits);

/// Determinant of the submatrix a[rows, cols] by Laplace expansion.
Enclosure minor(const EMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols);
/// Matrix of Lambda^k(a) in lex monomial bases.
EMatrix compound_matrix(const EMatrix& a, int k);

Enclosure norm2(const std::vector<Enclosure>& v, int bits);
EMatrix scaled(EMatrix a, const BigRational& s);

}  // namespace dioph::detail
