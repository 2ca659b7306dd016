#include "dioph/projective.hpp"

#include <sstream>

namespace dioph {

ThetaPoint::ThetaPoint(std::vector<ThetaCoordinate> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DimensionMismatch("a point needs at least one coordinate");
  if (static_cast<int>(coords_.size()) + 1 > kMaxAmbientDim) throw DimensionMismatch("too many coordinates");
  for (const auto& c : coords_) {
    validate(c.base);
    if (c.power == 0) throw InvalidDescription("coordinate power must be positive");
  }
}

Enclosure ThetaPoint::theta(int i, int bits) const {
  if (i < 1 || i > n()) throw DimensionMismatch("coordinate index out of range");
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->values.find({i, bits});
    if (it != cache_->values.end()) return it->second;
  }
  const auto& c = coords_[i - 1];
  Enclosure result;
  for (int extra = 2;; extra += 16) {
    Enclosure p = pow(eval(c.base, bits + extra + 4 * static_cast<int>(c.power)), c.power);
    if (p.width() <= pow2(-(bits + 1))) {
      result = p.is_exact() ? p : p.rounded(bits + 2);
      break;
    }
    if (extra > kDefaultPrecisionCap) throw PrecisionExhausted("cannot evaluate coordinate power");
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->values.emplace(std::make_pair(i, bits), result);
  return result;
}

std::vector<Enclosure> ThetaPoint::y(int bits) const {
  std::vector<Enclosure> out;
  out.reserve(coords_.size() + 1);
  out.emplace_back(BigRational(1));
  for (int i = 1; i <= n(); ++i) out.push_back(theta(i, bits));
  return out;
}

bool ThetaPoint::has_rational_coordinate() const {
  for (const auto& c : coords_)
    if (is_rational(c.base)) return true;
  return false;
}

std::string ThetaPoint::describe() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << ", ";
    os << dioph::describe(coords_[i].base);
    if (coords_[i].power != 1) os << '^' << coords_[i].power;
  }
  os << ')';
  return os.str();
}

RationalSubspace subspace_from_basis(const std::vector<ZVector>& vectors) {
  if (vectors.empty()) throw DimensionMismatch("empty basis");
  int m = static_cast<int>(vectors[0].size());
  if (static_cast<int>(vectors.size()) > m || m < 2) throw DimensionMismatch("too many basis vectors");
  IntegerMultivector x = IntegerMultivector::scalar(m, BigInt(1));
  for (const auto& v : vectors) {
    if (static_cast<int>(v.size()) != m) throw DimensionMismatch("basis vectors differ in length");
    x = wedge(x, int_vector(v));
  }
  if (x.is_zero()) throw DependentVectors("basis vectors are linearly dependent");
  RationalSubspace l;
  l.n = m - 1;
  l.dim = static_cast<int>(vectors.size()) - 1;
  if (l.dim > l.n - 1) throw DimensionMismatch("a proper subspace needs at most n basis vectors");
  l.plucker = sign_normalized(primitive_part(x));
  l.decomposable = true;
  return l;
}

BigInt height_sq(const RationalSubspace& l) { return norm_sq(l.plucker); }

Enclosure height(const RationalSubspace& l, int bits) { return sqrt_q(BigRational(height_sq(l)), bits); }

ProjectiveDistance proj_distance(const std::vector<BigRational>& p, const std::vector<BigRational>& q, int bits) {
  if (p.size() != q.size()) throw DimensionMismatch("points live in different spaces");
  auto x = RationalMultivector::vector(p);
  auto y = RationalMultivector::vector(q);
  ProjectiveDistance d;
  d.numerator_sq = norm_sq(wedge(x, y));
  d.denominator_sq = norm_sq(x) * norm_sq(y);
  if (d.denominator_sq == 0) throw Error("projective distance of a zero vector");
  d.value = sqrt_relative(Enclosure(BigRational(d.numerator_sq / d.denominator_sq)), bits);
  return d;
}

Enclosure dist_theta_subspace(const ThetaPoint& theta, const RationalSubspace& l, int bits, int cap_bits) {
  if (l.n != theta.n()) throw DimensionMismatch("subspace and point live in different spaces");
  return escalate(bits + 8, std::max(cap_bits, bits + 8), [&](int b) -> std::optional<Enclosure> {
    auto y = theta.y(b);
    Enclosure ny2;
    for (const auto& c : y) ny2 += square(c);
    Enclosure d = wedge_error(y, l.plucker, b) / (sqrt_relative(ny2, b) * sqrt_q(BigRational(height_sq(l)), b));
    if (d.width() <= pow2(-bits)) return d;
    return std::nullopt;
  });
}

DecomposabilityResult is_decomposable(const IntegerMultivector& x) {
  if (x.is_zero()) throw Error("decomposability of the zero multivector");
  int m = x.ambient_dim(), r = x.degree();
  DecomposabilityResult out;
  if (r == m) {
    for (int i = 0; i < m; ++i) {
      ZVector v(m, 0);
      v[i] = 1;
      out.kernel.push_back(v);
    }
    out.decomposable = true;
    return out;
  }
  const auto& rows = subsets(m, r + 1);
  QMatrix a(rows.size(), QVector(m, 0));
  for (int i = 0; i < m; ++i) {
    auto col = wedge(IntegerMultivector::unit(m, i), x);
    for (const auto& [mask, v] : col.terms()) a[subset_rank(m, mask)][i] = v;
  }
  out.kernel = kernel(a, m);
  out.decomposable = static_cast<int>(out.kernel.size()) == r;
  return out;
}

namespace {

Enclosure norm_of(const std::map<IndexMask, Enclosure>& coeffs, int bits) {
  Enclosure s;
  for (const auto& [m, v] : coeffs) s += square(v);
  return sqrt_relative(s, bits);
}

}  // namespace

Enclosure wedge_error(const std::vector<Enclosure>& y, const IntegerMultivector& x, int bits) {
  int m = x.ambient_dim();
  if (static_cast<int>(y.size()) != m) throw DimensionMismatch("y and X live in different spaces");
  std::map<IndexMask, Enclosure> out;
  for (const auto& [mask, v] : x.terms()) {
    Enclosure ev{BigRational(v)};
    for (int i = 0; i < m; ++i) {
      IndexMask b = IndexMask(1) << i;
      if (mask & b) continue;
      Enclosure t = y[i] * ev;
      if (wedge_sign(b, mask) < 0) t = -t;
      out[mask | b] += t;
    }
  }
  return norm_of(out, bits);
}

Enclosure contract_error(const std::vector<Enclosure>& y, const IntegerMultivector& x, int bits) {
  int m = x.ambient_dim();
  if (static_cast<int>(y.size()) != m) throw DimensionMismatch("y and X live in different spaces");
  std::map<IndexMask, Enclosure> out;
  for (const auto& [mask, v] : x.terms()) {
    Enclosure ev{BigRational(v)};
    for (int j = 0; j < m; ++j) {
      IndexMask b = IndexMask(1) << j;
      if (!(mask & b)) continue;
      IndexMask rest = mask & ~b;
      Enclosure t = y[j] * ev;
      if (wedge_sign(rest, b) < 0) t = -t;
      out[rest] += t;
    }
  }
  return norm_of(out, bits);
}

Enclosure euclidean_norm(const IntegerMultivector& x, int bits) {
  return sqrt_relative(Enclosure(BigRational(norm_sq(x))), bits);
}

EMatrix wedge_matrix(const std::vector<Enclosure>& y, int r) {
  int m = static_cast<int>(y.size());
  const auto& cols = subsets(m, r);
  const auto& rows = subsets(m, r + 1);
  EMatrix a(rows.size(), std::vector<Enclosure>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (int i = 0; i < m; ++i) {
      IndexMask b = IndexMask(1) << i;
      if (cols[c] & b) continue;
      a[subset_rank(m, cols[c] | b)][c] = wedge_sign(b, cols[c]) < 0 ? -y[i] : y[i];
    }
  return a;
}

EMatrix contract_matrix(const std::vector<Enclosure>& y, int r) {
  int m = static_cast<int>(y.size());
  const auto& cols = subsets(m, r);
  const auto& rows = subsets(m, r - 1);
  EMatrix a(rows.size(), std::vector<Enclosure>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (int j = 0; j < m; ++j) {
      IndexMask b = IndexMask(1) << j;
      if (!(cols[c] & b)) continue;
      IndexMask rest = cols[c] & ~b;
      a[subset_rank(m, rest)][c] = wedge_sign(rest, b) < 0 ? -y[j] : y[j];
    }
  return a;
}

}  // namespace dioph
