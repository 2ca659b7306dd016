#include <algorithm>
#include <numeric>
#include <sstream>

#include "bodies_internal.hpp"

namespace dioph {

const char* to_string(BodyKind k) {
  switch (k) {
    case BodyKind::Primal: return "PRIMAL";
    case BodyKind::Dual: return "DUAL";
    case BodyKind::Box: return "BOX";
    case BodyKind::SupNorm: return "SUP";
    case BodyKind::Compound: return "COMPOUND";
  }
  return "?";
}

const char* to_string(MinimaMethod m) { return m == MinimaMethod::Exhaustive ? "EXHAUSTIVE" : "REDUCED"; }

int BodySpec::ambient_dim() const {
  if (kind == BodyKind::Box || (kind == BodyKind::Compound && base == BodyKind::Box))
    return static_cast<int>(widths.size());
  return theta.ambient_dim();
}

int BodySpec::lattice_dim() const {
  if (kind == BodyKind::Box || kind == BodyKind::SupNorm) return ambient_dim();
  return static_cast<int>(binomial(ambient_dim(), degree));
}

std::string BodySpec::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == BodyKind::Compound) os << '(' << to_string(base) << ", k=" << degree << ')';
  if (kind == BodyKind::Box || base == BodyKind::Box) {
    os << " widths=[";
    for (std::size_t i = 0; i < widths.size(); ++i) os << (i ? "," : "") << to_string(widths[i]);
    os << ']';
  } else {
    os << " U=" << to_string(U) << " V=" << to_string(V);
    if (kind != BodyKind::Compound && degree != 1) os << " degree=" << degree;
    if (kind == BodyKind::SupNorm) os << (linear_form ? " linear-form" : " simultaneous");
  }
  return os.str();
}

namespace {

void check_uv(const BigRational& U, const BigRational& V) {
  if (U <= 0 || V <= 0) throw Error("body parameters must be positive");
  if (V > U) throw Error("body parameters need V <= U");
}

}  // namespace

BodySpec primal_body(const ThetaPoint& theta, const BigRational& U, const BigRational& V, int degree) {
  check_uv(U, V);
  if (degree < 1 || degree > theta.n()) throw DimensionMismatch("primal body degree out of range");
  BodySpec s;
  s.kind = BodyKind::Primal;
  s.theta = theta;
  s.U = U;
  s.V = V;
  s.degree = degree;
  return s;
}

BodySpec dual_body(const ThetaPoint& theta, const BigRational& U, const BigRational& V, int degree) {
  check_uv(U, V);
  if (degree < 1 || degree > theta.n()) throw DimensionMismatch("dual body degree out of range");
  BodySpec s = primal_body(theta, U, V, degree);
  s.kind = BodyKind::Dual;
  return s;
}

BodySpec box_body(std::vector<BigRational> widths) {
  if (widths.empty() || static_cast<int>(widths.size()) > kMaxAmbientDim) throw DimensionMismatch("box dimension");
  for (const auto& w : widths)
    if (w <= 0) throw Error("box half-widths must be positive");
  BodySpec s;
  s.kind = BodyKind::Box;
  s.widths = std::move(widths);
  return s;
}

BodySpec sup_body(const ThetaPoint& theta, bool linear_form, const BigRational& X, const BigRational& v) {
  if (X <= 0 || v <= 0) throw Error("body parameters must be positive");
  BodySpec s;
  s.kind = BodyKind::SupNorm;
  s.theta = theta;
  s.U = X;
  s.V = v;
  s.linear_form = linear_form;
  return s;
}

BodySpec compound_body(const BodySpec& base, int k) {
  bool ok = base.kind == BodyKind::Box ||
            ((base.kind == BodyKind::Primal || base.kind == BodyKind::Dual) && base.degree == 1);
  if (!ok) throw Error("compound bodies need a degree-1 primal/dual body or a box");
  if (k < 1 || k > base.ambient_dim()) throw Error("compound order out of range");
  BodySpec s = base;
  s.kind = BodyKind::Compound;
  s.base = base.kind;
  s.degree = k;
  return s;
}

namespace detail {

Enclosure norm2(const std::vector<Enclosure>& v, int bits) {
  Enclosure s;
  for (const auto& x : v) s += square(x);
  return sqrt_relative(s, bits);
}

EMatrix scaled(EMatrix a, const BigRational& s) {
  Enclosure f(s);
  for (auto& row : a)
    for (auto& x : row) x *= f;
  return a;
}

Frame frame(const BodySpec& spec, int bits) {
  BodyKind kind = spec.kind == BodyKind::Compound ? spec.base : spec.kind;
  int m = spec.ambient_dim();
  Frame f;
  f.a.assign(m, std::vector<Enclosure>(m));
  f.a_inv = f.a;
  if (kind == BodyKind::Box) {
    for (int i = 0; i < m; ++i) f.a[i][i] = f.a_inv[i][i] = Enclosure(BigRational(1));
    f.scales = spec.widths;
    return f;
  }
  auto y = spec.theta.y(bits);
  Enclosure one(BigRational(1));
  if (kind == BodyKind::Primal) {
    // a_0 = y, a_i = e_i; inverse: c_0 = z_0, c_i = z_i - theta_i z_0
    for (int i = 0; i < m; ++i) f.a[i][0] = y[i];
    f.a_inv[0][0] = one;
    for (int i = 1; i < m; ++i) {
      f.a[i][i] = one;
      f.a_inv[i][i] = one;
      f.a_inv[i][0] = -y[i];
    }
    f.scales.assign(m, spec.V);
    f.scales[0] = spec.U;
    return f;
  }
  if (kind == BodyKind::Dual) {
    // a_0 = y, a_i = f_i = theta_i e_0 - e_i (orthogonal to y);
    // inverse: c_0 = (y.z)/|y|^2, c_i = theta_i c_0 - z_i
    Enclosure ny2;
    for (const auto& c : y) ny2 += square(c);
    for (int i = 0; i < m; ++i) f.a[i][0] = y[i];
    for (int i = 1; i < m; ++i) {
      f.a[0][i] = y[i];
      f.a[i][i] = -one;
    }
    for (int j = 0; j < m; ++j) f.a_inv[0][j] = y[j] / ny2;
    for (int i = 1; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        f.a_inv[i][j] = y[i] * f.a_inv[0][j];
        if (i == j) f.a_inv[i][j] -= one;
      }
    f.scales.assign(m, spec.U);
    f.scales[0] = spec.V;
    return f;
  }
  throw Error("no comparable parallelepiped for this body kind");
}

Enclosure minor(const EMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::size_t k = rows.size();
  if (k == 0) return Enclosure(BigRational(1));
  if (k == 1) return a[rows[0]][cols[0]];
  Enclosure s;
  std::vector<int> sub_cols;
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t j = 0; j < k; ++j) {
    const Enclosure& e = a[rows[0]][cols[j]];
    if (e.is_exact() && e.lower() == 0) continue;
    sub_cols.clear();
    for (std::size_t l = 0; l < k; ++l)
      if (l != j) sub_cols.push_back(cols[l]);
    Enclosure t = e * minor(a, sub_rows, sub_cols);
    if (j % 2) s -= t;
    else s += t;
  }
  return s;
}

EMatrix compound_matrix(const EMatrix& a, int k) {
  int m = static_cast<int>(a.size());
  const auto& subs = subsets(m, k);
  EMatrix out(subs.size(), std::vector<Enclosure>(subs.size()));
  for (std::size_t r = 0; r < subs.size(); ++r) {
    auto ri = mask_indices(subs[r]);
    for (std::size_t c = 0; c < subs.size(); ++c) out[r][c] = minor(a, ri, mask_indices(subs[c]));
  }
  return out;
}

}  // namespace detail

namespace {

bool all_exact(const EMatrix& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (!x.is_exact()) return false;
  return true;
}

NormBlock make_block(EMatrix a, NormKind kind) {
  NormBlock b;
  b.exact = all_exact(a);
  b.matrix = std::move(a);
  b.kind = kind;
  return b;
}

EMatrix identity_over(int dim, const BigRational& scale) {
  EMatrix a(dim, std::vector<Enclosure>(dim));
  for (int i = 0; i < dim; ++i) a[i][i] = Enclosure(BigRational(1 / scale));
  return a;
}

BigRational sqrt_upper(const BigRational& q) { return sqrt_q(q, 32).upper(); }

}  // namespace

BodyNorm body_norm(const BodySpec& s, int bits) {
  BodyNorm out;
  out.bits = bits;
  int dim = s.lattice_dim();
  switch (s.kind) {
    case BodyKind::Primal:
    case BodyKind::Dual: {
      auto y = s.theta.y(bits);
      EMatrix err = s.kind == BodyKind::Primal ? wedge_matrix(y, s.degree) : contract_matrix(y, s.degree);
      out.blocks.push_back(make_block(identity_over(dim, s.U), NormKind::L2));
      out.blocks.push_back(make_block(detail::scaled(std::move(err), 1 / s.V), NormKind::L2));
      out.rho = s.U;
      break;
    }
    case BodyKind::Box: {
      EMatrix a(dim, std::vector<Enclosure>(dim));
      for (int i = 0; i < dim; ++i) a[i][i] = Enclosure(BigRational(1 / s.widths[i]));
      out.blocks.push_back(make_block(std::move(a), NormKind::Linf));
      out.rho = std::accumulate(s.widths.begin(), s.widths.end(), BigRational(0));
      break;
    }
    case BodyKind::SupNorm: {
      auto y = s.theta.y(bits);
      Enclosure inv_v(BigRational(1 / s.V));
      EMatrix e;
      if (s.linear_form) {
        e.emplace_back();
        for (const auto& c : y) e.back().push_back(c * inv_v);
      } else {
        for (int i = 1; i < dim; ++i) {
          std::vector<Enclosure> row(dim);
          row[0] = y[i] * inv_v;
          row[i] = -inv_v;
          e.push_back(std::move(row));
        }
      }
      out.blocks.push_back(make_block(identity_over(dim, s.U), NormKind::Linf));
      out.blocks.push_back(make_block(std::move(e), NormKind::Linf));
      out.rho = s.U * BigRational(ceil_q(sqrt_upper(dim)));
      break;
    }
    case BodyKind::Compound: {
      auto f = detail::frame(s, bits);
      int m = s.ambient_dim();
      EMatrix c = detail::compound_matrix(f.a_inv, s.degree);
      EMatrix ca = detail::compound_matrix(f.a, s.degree);
      const auto& subs = subsets(m, s.degree);
      out.rho = 0;
      for (std::size_t S = 0; S < subs.size(); ++S) {
        BigRational scale = 1;
        for (int i : mask_indices(subs[S])) scale *= f.scales[i];
        Enclosure inv(BigRational(1 / scale));
        for (auto& x : c[S]) x *= inv;
        std::vector<Enclosure> col;
        for (std::size_t T = 0; T < subs.size(); ++T) col.push_back(ca[T][S]);
        out.rho += scale * detail::norm2(col, 32).upper();
      }
      out.blocks.push_back(make_block(std::move(c), NormKind::Linf));
      break;
    }
  }
  return out;
}

NormValue evaluate_norm(const BodyNorm& norm, const ZVector& z) {
  std::vector<Enclosure> values;
  std::vector<std::optional<BigRational>> exact_sq;
  for (const auto& b : norm.blocks) {
    std::vector<Enclosure> v(b.matrix.size());
    for (std::size_t r = 0; r < b.matrix.size(); ++r)
      for (std::size_t c = 0; c < z.size(); ++c)
        if (z[c] != 0) v[r] += b.matrix[r][c] * Enclosure(BigRational(z[c]));
    Enclosure val;
    std::optional<BigRational> sq;
    switch (b.kind) {
      case NormKind::L2: {
        Enclosure s;
        for (const auto& x : v) s += square(x);
        val = sqrt_relative(s, norm.bits);
        if (b.exact) sq = s.lower();
        break;
      }
      case NormKind::Linf:
        for (const auto& x : v) val = max(val, abs(x));
        if (b.exact) sq = val.lower() * val.lower();
        break;
      case NormKind::L1:
        for (const auto& x : v) val += abs(x);
        if (b.exact) sq = val.lower() * val.lower();
        break;
    }
    values.push_back(val);
    exact_sq.push_back(sq);
  }
  NormValue out;
  if (norm.combine == Combine::Sum && values.size() > 1) {
    for (const auto& v : values) out.value += v;
    return out;
  }
  for (const auto& v : values) out.value = max(out.value, v);
  // the block realizing the maximum, when certified
  for (std::size_t b = 0; b < values.size(); ++b) {
    bool dominant = true;
    for (std::size_t o = 0; o < values.size() && dominant; ++o)
      if (o != b && values[o].upper() > values[b].lower() && !(exact_sq[o] && exact_sq[b] && *exact_sq[o] <= *exact_sq[b]))
        dominant = false;
    if (dominant) {
      if (exact_sq[b]) {
        out.exact_sq = exact_sq[b];
        out.value = values[b];
      }
      break;
    }
  }
  return out;
}

std::optional<bool> norm_less(const NormValue& a, const NormValue& b) {
  if (a.exact_sq && b.exact_sq) return *a.exact_sq < *b.exact_sq;
  if (a.value.upper() < b.value.lower()) return true;
  if (a.value.lower() >= b.value.upper()) return false;
  return std::nullopt;
}

Ellipsoid enclosing_ellipsoid(const BodyNorm& norm) {
  std::size_t dim = norm.blocks.front().matrix.front().size();
  Ellipsoid e;
  e.gram.assign(dim, QVector(dim, 0));
  BigRational inv_rho2 = 1 / (norm.rho * norm.rho);
  for (std::size_t i = 0; i < dim; ++i) e.gram[i][i] = inv_rho2;
  e.c_q = 1;
  std::vector<BigRational> block_k;
  for (const auto& b : norm.blocks) {
    std::size_t rows = b.matrix.size();
    BigRational w = b.kind == NormKind::Linf ? ratio(1, rows) : BigRational(1);
    QMatrix mid(rows, QVector(dim));
    BigRational rad2 = 0;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < dim; ++c) {
        mid[r][c] = b.matrix[r][c].midpoint();
        BigRational rr = b.matrix[r][c].radius();
        rad2 += rr * rr;
      }
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) {
        BigRational s = 0;
        for (std::size_t r = 0; r < rows; ++r)
          if (mid[r][i] != 0 && mid[r][j] != 0) s += mid[r][i] * mid[r][j];
        if (s == 0) continue;
        s *= w;
        e.gram[i][j] += s;
        if (i != j) e.gram[j][i] += s;
      }
    BigRational frob = rad2 == 0 ? BigRational(0) : sqrt_upper(rad2);
    BigRational eps = (w == 1 ? frob : sqrt_upper(w * rad2)) * norm.rho;
    e.c_q += (1 + eps) * (1 + eps);
    BigRational root_rows = sqrt_upper(BigRational(rows));
    BigRational ck;
    switch (b.kind) {
      case NormKind::L2: ck = 1 + frob * norm.rho; break;
      case NormKind::Linf: ck = root_rows + frob * norm.rho; break;
      case NormKind::L1: ck = root_rows * (1 + frob * norm.rho); break;
    }
    block_k.push_back(ck);
  }
  e.c_k = 0;
  for (const auto& c : block_k) e.c_k = norm.combine == Combine::Max ? std::max(e.c_k, c) : e.c_k + c;
  return e;
}

std::vector<ZVector> body_candidates(const BodySpec& spec, const BigRational& level, long node_budget, int bits) {
  auto norm = body_norm(spec, bits);
  auto ell = enclosing_ellipsoid(norm);
  return short_vectors(ell.gram, ell.c_q * level * level, node_budget);
}

namespace {

// Ties: shorter Euclidean length first, then lexicographic.
bool tie_less(const ZVector& a, const ZVector& b) {
  BigInt na = 0, nb = 0;
  for (const auto& x : a) na += x * x;
  for (const auto& x : b) nb += x * x;
  if (na != nb) return na < nb;
  return lex_less(a, b);
}

struct Candidate {
  ZVector z;
  NormValue n;
};

// Greedy selection of independent vectors in increasing norm. Returns nullopt
// when overlapping enclosures make a selection ambiguous and force is false.
std::optional<MinimaProfile> try_exhaustive(const BodySpec& spec, long budget, int bits, bool force,
                                            std::size_t wanted = 0) {
  auto norm = body_norm(spec, bits);
  auto ell = enclosing_ellipsoid(norm);
  std::size_t dim = ell.gram.size();
  if (wanted == 0 || wanted > dim) wanted = dim;
  auto red = lll_gram(ell.gram);
  std::vector<BigRational> uppers;
  for (const auto& b : red.transform) uppers.push_back(evaluate_norm(norm, b).value.upper());
  std::sort(uppers.begin(), uppers.end());

  MinimaProfile out;
  out.method = MinimaMethod::Exhaustive;
  out.bits = bits;
  BigRational level = uppers[0] * BigRational(17, 16);
  while (true) {
    auto pts = short_vectors(ell.gram, ell.c_q * level * level, budget);
    out.candidates += static_cast<long>(pts.size());
    std::vector<Candidate> cands;
    for (auto& z : pts) {
      NormValue n = evaluate_norm(norm, z);
      if (n.value.lower() <= level) cands.push_back({std::move(z), std::move(n)});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.n.value.midpoint() < b.n.value.midpoint();
    });
    out.lambdas.clear();
    out.witnesses.clear();
    QMatrix picked;
    std::size_t i = 0;
    while (i < cands.size() && out.witnesses.size() < wanted) {
      // group of transitively overlapping enclosures
      std::size_t j = i + 1;
      BigRational hi = cands[i].n.value.upper();
      while (j < cands.size() && cands[j].n.value.lower() <= hi) {
        hi = std::max(hi, cands[j].n.value.upper());
        ++j;
      }
      if (hi > level) break;
      std::vector<Candidate*> group;
      for (std::size_t g = i; g < j; ++g) group.push_back(&cands[g]);
      bool all_exact = std::all_of(group.begin(), group.end(), [](const Candidate* c) { return c->n.exact_sq.has_value(); });
      std::stable_sort(group.begin(), group.end(), [&](const Candidate* a, const Candidate* b) {
        if (all_exact && *a->n.exact_sq != *b->n.exact_sq) return *a->n.exact_sq < *b->n.exact_sq;
        return tie_less(a->z, b->z);
      });
      Enclosure hull = group.front()->n.value;
      for (const auto* c : group) hull = Enclosure::hull(hull, c->n.value);
      for (const auto* c : group) {
        QMatrix trial = picked;
        trial.emplace_back(c->z.begin(), c->z.end());
        if (rank(trial) == picked.size()) continue;
        if (!all_exact && group.size() > 1 && !force) return std::nullopt;
        picked = std::move(trial);
        out.witnesses.push_back(c->z);
        out.lambdas.push_back(all_exact ? c->n.value : hull);
        if (out.witnesses.size() == wanted) break;
      }
      i = j;
    }
    if (out.witnesses.size() == wanted) {
      out.level = level;
      return out;
    }
    level = std::max(level * BigRational(17, 16), uppers[out.witnesses.size()] * BigRational(17, 16));
  }
}

}  // namespace

MinimaProfile minima_exhaustive(const BodySpec& spec, long node_budget, int bits) {
  for (int b = bits; b <= 1024; b *= 2)
    if (auto p = try_exhaustive(spec, node_budget, b, false)) return *p;
  return *try_exhaustive(spec, node_budget, 1024, true);
}

MinimaProfile first_minimum(const BodySpec& spec, long node_budget, int bits) {
  for (int b = bits; b <= 1024; b *= 2)
    if (auto p = try_exhaustive(spec, node_budget, b, false, 1)) return *p;
  return *try_exhaustive(spec, node_budget, 1024, true, 1);
}

MinimaProfile minima_reduced(const BodySpec& spec, int bits) {
  auto norm = body_norm(spec, bits);
  auto ell = enclosing_ellipsoid(norm);
  std::size_t dim = ell.gram.size();
  auto red = lll_gram(ell.gram);
  MinimaProfile out;
  out.method = MinimaMethod::Reduced;
  out.bits = bits;
  out.slack = sqrt_upper(pow2(static_cast<int>(dim) - 1));
  BigRational denom = out.slack * sqrt_upper(ell.c_q);
  std::vector<Candidate> basis;
  BigRational running = 0;
  std::vector<BigRational> lowers;
  for (const auto& b : red.transform) {
    running = std::max(running, BigRational(sqrt_q(quadratic_form(ell.gram, b), 32).lower() / denom));
    lowers.push_back(running);
    basis.push_back({primitive_sign_normalized(b), evaluate_norm(norm, b)});
  }
  std::stable_sort(basis.begin(), basis.end(), [](const Candidate& a, const Candidate& b) {
    return a.n.value.upper() < b.n.value.upper();
  });
  for (std::size_t i = 0; i < dim; ++i) {
    out.lambdas.emplace_back(std::min(lowers[i], basis[i].n.value.upper()), basis[i].n.value.upper(), bits);
    out.witnesses.push_back(basis[i].z);
  }
  out.candidates = static_cast<long>(dim);
  return out;
}

}  // namespace dioph
