#include "dioph/multivector.hpp"

#include <bit>
#include <mutex>
#include <sstream>

namespace dioph {

int popcount(IndexMask m) { return std::popcount(m); }

int wedge_sign(IndexMask a, IndexMask b) {
  if (a & b) return 0;
  // count pairs (i in a, j in b) with i > j
  int inversions = 0;
  for (IndexMask rest = b; rest; rest &= rest - 1) {
    IndexMask low = rest & (~rest + 1);
    IndexMask above = ~((low << 1) - 1);
    inversions += std::popcount(a & above);
  }
  return (inversions & 1) ? -1 : 1;
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

IndexMask full_mask(int dim) {
  if (dim < 0 || dim > kMaxAmbientDim) throw DimensionMismatch("ambient dimension out of range");
  return dim == 32 ? ~IndexMask(0) : ((IndexMask(1) << dim) - 1);
}

std::vector<int> mask_indices(IndexMask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) out.push_back(i);
  return out;
}

namespace {

std::vector<IndexMask> build_subsets(int dim, int k) {
  std::vector<IndexMask> out;
  if (k < 0 || k > dim) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    IndexMask m = 0;
    for (int i : idx) m |= IndexMask(1) << i;
    out.push_back(m);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == dim - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

struct SubsetCache {
  std::mutex mu;
  std::map<std::pair<int, int>, std::vector<IndexMask>> lists;
  std::map<std::pair<int, int>, std::map<IndexMask, std::size_t>> ranks;
};

SubsetCache& cache() {
  static SubsetCache c;
  return c;
}

}  // namespace

const std::vector<IndexMask>& subsets(int dim, int k) {
  if (dim < 0 || dim > kMaxAmbientDim) throw DimensionMismatch("ambient dimension out of range");
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto key = std::make_pair(dim, k);
  auto it = c.lists.find(key);
  if (it == c.lists.end()) {
    it = c.lists.emplace(key, build_subsets(dim, k)).first;
    auto& r = c.ranks[key];
    for (std::size_t i = 0; i < it->second.size(); ++i) r.emplace(it->second[i], i);
  }
  // std::map nodes are stable, so the reference survives later insertions
  return it->second;
}

std::size_t subset_rank(int dim, IndexMask mask) {
  int k = popcount(mask);
  subsets(dim, k);
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  const auto& r = c.ranks.at({dim, k});
  auto it = r.find(mask);
  if (it == r.end()) throw DimensionMismatch("subset outside ambient dimension");
  return it->second;
}

BigInt content(const IntegerMultivector& x) {
  BigInt g = 0;
  for (const auto& [m, v] : x.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  return g;
}

IntegerMultivector primitive_part(const IntegerMultivector& x) {
  BigInt g = content(x);
  if (g == 0 || g == 1) return x;
  IntegerMultivector r(x.ambient_dim(), x.degree());
  for (const auto& [m, v] : x.terms()) r.add(m, BigInt(v / g));
  return r;
}

IntegerMultivector sign_normalized(const IntegerMultivector& x) {
  if (x.is_zero() || x.terms().begin()->second > 0) return x;
  return -x;
}

RationalMultivector to_rational(const IntegerMultivector& x) {
  RationalMultivector r(x.ambient_dim(), x.degree());
  for (const auto& [m, v] : x.terms()) r.add(m, BigRational(v));
  return r;
}

IntegerMultivector int_vector(const std::vector<BigInt>& v) { return IntegerMultivector::vector(v); }

namespace {

template <class T>
std::string format_terms(const Multivector<T>& x) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (const auto& [m, v] : x.terms()) {
    if (!first) os << ", ";
    first = false;
    os << '(';
    auto idx = mask_indices(m);
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i] + 1;
    os << "): " << v;
  }
  os << ']';
  return os.str();
}

}  // namespace

std::string to_string(const IntegerMultivector& x) { return format_terms(x); }
std::string to_string(const RationalMultivector& x) { return format_terms(x); }

}  // namespace dioph
