#include <algorithm>

#include "bodies_internal.hpp"

namespace dioph {

namespace {

constexpr int kVolumeBits = 64;

// Volume of the unit ball in R^k.
Enclosure unit_ball_volume(int k) {
  if (k == 0) return Enclosure(BigRational(1));
  if (k == 1) return Enclosure(BigRational(2));
  return unit_ball_volume(k - 2) * pi(kVolumeBits) * Enclosure(ratio(2, k));
}

// g^{k/2} for an enclosure g >= 0.
Enclosure half_power(const Enclosure& g, int k) {
  Enclosure p = pow(g, static_cast<unsigned>(k / 2));
  if (k % 2) p *= sqrt(g, kVolumeBits);
  return p;
}

// 2 * integral_0^a of f over a decreasing f, with a in [a_lo, a_hi]:
// right-endpoint sums bound from below, left-endpoint sums from above.
template <class F>
Enclosure symmetric_integral(const BigRational& a_lo, const BigRational& a_hi, int steps, F f) {
  BigRational lo = 0, hi = 0;
  BigRational h_lo = a_lo / steps, h_hi = a_hi / steps;
  for (int j = 1; j <= steps; ++j) lo += f(h_lo * j).lower();
  for (int j = 0; j < steps; ++j) hi += f(h_hi * j).upper();
  return Enclosure(2 * h_lo * std::max(lo, BigRational(0)), 2 * h_hi * hi, kVolumeBits);
}

Enclosure y_norm(const ThetaPoint& theta) {
  Enclosure s;
  for (const auto& c : theta.y(kVolumeBits)) s += square(c);
  return sqrt(s, kVolumeBits);
}

BigRational factorial(int m) {
  BigRational f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

Enclosure parallelepiped_volume(const BodySpec& spec) {
  if (spec.kind == BodyKind::Compound || spec.kind == BodyKind::SupNorm || spec.degree != 1)
    throw Error("parallelepiped volume needs a degree-1 primal/dual body or a box");
  auto f = detail::frame(spec, kVolumeBits);
  int m = spec.ambient_dim();
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  BigRational s = pow2(m);
  for (const auto& x : f.scales) s *= x;
  return abs(detail::minor(f.a, idx, idx)) * Enclosure(s);
}

Enclosure body_volume(const BodySpec& spec, int steps) {
  int m = spec.ambient_dim();
  switch (spec.kind) {
    case BodyKind::Box: {
      BigRational v = 1;
      for (const auto& w : spec.widths) v *= 2 * w;
      return Enclosure(v);
    }
    case BodyKind::Primal: {
      if (spec.degree != 1) break;
      // z = t y/|y| + w, w orthogonal: |t|^2 + |w|^2 <= U^2 and |w| <= r = V/|y|
      Enclosure r = Enclosure(spec.V) / y_norm(spec.theta);
      Enclosure r2 = square(r);
      BigRational u2 = spec.U * spec.U;
      auto f = [&](const BigRational& t) {
        Enclosure g = min(r2, Enclosure(BigRational(u2 - t * t)));
        return half_power(g, m - 1);
      };
      return symmetric_integral(spec.U, spec.U, steps, f) * unit_ball_volume(m - 1);
    }
    case BodyKind::Dual: {
      if (spec.degree != 1) break;
      // |t| <= V/|y| along y, and |w|^2 <= U^2 - t^2 orthogonally
      Enclosure a = min(Enclosure(spec.V) / y_norm(spec.theta), Enclosure(spec.U));
      BigRational u2 = spec.U * spec.U;
      auto f = [&](const BigRational& t) {
        return half_power(Enclosure(BigRational(std::max(BigRational(0), BigRational(u2 - t * t)))), m - 1);
      };
      return symmetric_integral(a.lower(), a.upper(), steps, f) * unit_ball_volume(m - 1);
    }
    case BodyKind::Compound: {
      // 2^D |det Lambda^k A| prod s_S, with det Lambda^k A = det(A)^C(m-1,k-1)
      auto f = detail::frame(spec, kVolumeBits);
      std::vector<int> idx(m);
      for (int i = 0; i < m; ++i) idx[i] = i;
      Enclosure det = abs(detail::minor(f.a, idx, idx));
      int k = spec.degree;
      BigRational s = pow2(static_cast<int>(binomial(m, k)));
      for (IndexMask S : subsets(m, k))
        for (int i : mask_indices(S)) s *= f.scales[i];
      return pow(det, static_cast<unsigned>(binomial(m - 1, k - 1))) * Enclosure(s);
    }
    case BodyKind::SupNorm:
      break;
  }
  throw Error("no volume formula for " + spec.describe());
}

MinkowskiCheck minkowski_check(const BodySpec& spec, const MinimaProfile& profile) {
  int m = spec.lattice_dim();
  MinkowskiCheck c;
  c.upper_bound = pow2(m);
  c.lower_bound = pow2(m) / factorial(m);
  Enclosure lam(BigRational(1));
  for (const auto& l : profile.lambdas) lam *= l;
  for (int steps = 4096; steps <= 1 << 16; steps *= 4) {
    c.volume = body_volume(spec, steps);
    c.product = lam * c.volume;
    c.lower_ok = certify_le(Enclosure(c.lower_bound), c.product);
    c.upper_ok = certify_le(c.product, Enclosure(c.upper_bound));
    if (c.lower_ok != Certificate::Undecided && c.upper_ok != Certificate::Undecided) break;
    if (spec.kind == BodyKind::Box) break;
  }
  return c;
}

void ComparabilityReport::add(MahlerInstance inst) {
  BigRational k = std::max(inst.ratio.upper(), BigRational(1 / inst.ratio.lower()));
  kappa_observed = std::max(kappa_observed, k);
  instances.push_back(std::move(inst));
}

MahlerInstance mahler_check(const BodySpec& base, int k, long node_budget, ComparabilityReport* report) {
  MahlerInstance inst;
  inst.body = base.describe();
  inst.k = k;
  auto bp = minima_exhaustive(base, node_budget);
  auto cp = first_minimum(compound_body(base, k), node_budget);
  inst.base_lambdas = bp.lambdas;
  inst.compound_lambdas = cp.lambdas;
  inst.product = Enclosure(BigRational(1));
  for (int i = 0; i < k; ++i) inst.product *= bp.lambdas[i];
  inst.ratio = cp.lambdas[0] / inst.product;
  if (report) report->add(inst);
  return inst;
}

std::vector<Generator> compound_generators(const BodySpec& compound, int bits) {
  if (compound.kind != BodyKind::Compound) throw Error("generators belong to compound bodies");
  auto f = detail::frame(compound, bits);
  int m = compound.ambient_dim(), k = compound.degree;
  EMatrix ca = detail::compound_matrix(f.a, k);
  const auto& subs = subsets(m, k);
  std::vector<Generator> out;
  for (std::size_t S = 0; S < subs.size(); ++S) {
    BigRational scale = 1;
    for (int i : mask_indices(subs[S])) scale *= f.scales[i];
    Generator g;
    g.subset = subs[S];
    for (std::size_t T = 0; T < subs.size(); ++T) g.coords.push_back(ca[T][S] * Enclosure(scale));
    out.push_back(std::move(g));
  }
  return out;
}

GeneratorConstants compound_generator_constants(const BodySpec& compound, int bits) {
  auto gens = compound_generators(compound, bits);
  int k = compound.degree;
  auto y = compound.theta.y(bits);
  bool primal = compound.base == BodyKind::Primal;
  if (!primal && compound.base != BodyKind::Dual) throw Error("generator constants need a primal or dual base");
  EMatrix err = primal ? (k < compound.ambient_dim() ? wedge_matrix(y, k) : EMatrix{}) : contract_matrix(y, k);
  BigRational norm_scale, err_scale;
  Enclosure err_factor(BigRational(1));
  if (primal) {
    norm_scale = compound.U * pow(Enclosure(compound.V), k - 1).lower();
    err_scale = pow(Enclosure(compound.V), k).lower();
  } else {
    norm_scale = pow(Enclosure(compound.U), k).lower();
    err_scale = compound.V * pow(Enclosure(compound.U), k - 1).lower();
    Enclosure ny2;
    for (const auto& c : y) ny2 += square(c);
    err_factor = ny2;
  }
  GeneratorConstants out;
  for (const auto& g : gens) {
    out.norm_ratio = max(out.norm_ratio, detail::norm2(g.coords, bits) / Enclosure(norm_scale));
    std::vector<Enclosure> e(err.size());
    for (std::size_t r = 0; r < err.size(); ++r)
      for (std::size_t c = 0; c < g.coords.size(); ++c) e[r] += err[r][c] * g.coords[c];
    out.error_ratio = max(out.error_ratio, detail::norm2(e, bits) / (Enclosure(err_scale) * err_factor));
  }
  return out;
}

}  // namespace dioph
