#include "dioph/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace dioph {

const char* to_string(SearchMode m) { return m == SearchMode::Exhaustive ? "EXHAUSTIVE" : "REDUCED"; }
const char* to_string(ErrorForm f) { return f == ErrorForm::Primal ? "PRIMAL" : "DUAL"; }

namespace {

constexpr int kRelativeBits = 40;

// Smallest dyadic number >= q with about `bits` significant bits.
BigRational round_up_relative(const BigRational& q, int bits) {
  if (q <= 0) return q;
  long e = ilog2(q);
  return ceil_to_grid(q, bits - static_cast<int>(e));
}

int body_bits(const BigRational& U, const BigRational& V) {
  long spread = ilog2(U) - ilog2(V);
  return static_cast<int>(std::max<long>(64, 40 + spread));
}

bool relatively_tight(const Enclosure& e) {
  return e.lower() > 0 && e.width() <= e.lower() * pow2(-kRelativeBits);
}

}  // namespace

BigRational dirichlet_floor(int n, int d) { return ratio(d + 1, n - d); }

std::vector<BigRational> height_grid(const BigRational& height, const BigRational& ratio) {
  if (height < 1) throw Error("height limit must be at least 1");
  if (ratio <= 1) throw Error("grid ratio must exceed 1");
  std::vector<BigRational> g;
  for (BigRational t = 1; t < height; t *= ratio) g.push_back(t);
  g.push_back(height);
  return g;
}

Enclosure instant_exponent(const Enclosure& norm, const Enclosure& error, int bits) {
  return -log(error, bits) / log(norm, bits);
}

ApproximationRecord make_record(const ThetaPoint& theta, IntegerMultivector X, ErrorForm form, int d, int precision_cap) {
  if (X.is_zero()) throw InvariantViolation("approximation records need a nonzero multivector");
  ApproximationRecord r;
  r.form = form;
  r.d = d;
  r.norm_sq = norm_sq(X);
  r.norm = sqrt_relative(Enclosure(BigRational(r.norm_sq)), 64);
  BigInt coeff_max = 1;
  for (const auto& [m, v] : X.terms()) coeff_max = std::max<BigInt>(coeff_max, abs(v));
  int start = 64 + static_cast<int>(mpz_sizeinbase(coeff_max.get_mpz_t(), 2));
  for (int bits = start;; bits *= 2) {
    auto y = theta.y(bits);
    r.error = form == ErrorForm::Primal ? wedge_error(y, X, kRelativeBits + 8) : contract_error(y, X, kRelativeBits + 8);
    if (r.error.upper() == 0 || relatively_tight(r.error)) break;
    if (bits >= precision_cap) throw PrecisionExhausted("cannot separate an approximation error from zero");
  }
  r.X = std::move(X);
  if (r.norm_sq > 1 && r.error.upper() > 0) r.instant_exponent = instant_exponent(r.norm, r.error);
  return r;
}

std::vector<ApproximationRecord> staircase(std::vector<ApproximationRecord> points, int /*precision_cap*/) {
  std::sort(points.begin(), points.end(), [](const ApproximationRecord& a, const ApproximationRecord& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    if (a.error.upper() != b.error.upper()) return a.error.upper() < b.error.upper();
    return lex_less(a.X.dense(), b.X.dense());
  });
  std::vector<ApproximationRecord> out;
  for (std::size_t i = 0; i < points.size();) {
    std::size_t j = i;
    while (j < points.size() && points[j].norm_sq == points[i].norm_sq) ++j;
    const auto& best = points[i];  // smallest error at this norm
    // strict decrease must be certified; overlapping enclosures do not count
    if (best.error.upper() > 0 && (out.empty() || best.error.upper() < out.back().error.lower()))
      out.push_back(best);
    i = j;
  }
  return out;
}

namespace {

RecordSearch exhaustive_search(const ThetaPoint& theta, int d, ErrorForm form, const BigRational& height,
                               const SearchOptions& opts) {
  int n = theta.n(), m = n + 1;
  int r = form == ErrorForm::Primal ? d + 1 : n - d;
  BigRational y1 = 0;
  for (const auto& c : theta.y(32)) y1 += abs_q(c.upper()) + abs_q(c.lower());
  RecordSearch out;
  out.search_height = height;
  std::map<ZVector, ApproximationRecord, bool (*)(const ZVector&, const ZVector&)> seen(lex_less);
  std::optional<BigRational> best;
  for (const auto& T : height_grid(height, opts.grid_ratio)) {
    BigRational v = round_up_relative(best ? *best : BigRational(y1 * T), 24);
    BodySpec s;
    s.kind = form == ErrorForm::Primal ? BodyKind::Primal : BodyKind::Dual;
    s.theta = theta;
    s.degree = r;
    s.U = T;
    s.V = v;
    auto cands = body_candidates(s, 1, opts.node_budget, body_bits(T, v));
    out.candidates += static_cast<long>(cands.size());
    BigRational t2 = T * T;
    for (auto& z : cands) {
      BigInt nz = 0;
      for (const auto& x : z) nz += x * x;
      if (BigRational(nz) > t2 || seen.count(z)) continue;
      auto X = IntegerMultivector::from_dense(m, r, z);
      if (r > 1 && r < m - 1 && !is_decomposable(X).decomposable) continue;
      auto rec = make_record(theta, std::move(X), form, d, opts.precision_cap);
      if (rec.error.upper() == 0) {
        if (!theta.has_rational_coordinate())
          throw InvariantViolation("certified zero approximation error for an independent point");
        out.degenerate = true;
        continue;
      }
      if (!best || rec.error.upper() < *best) best = rec.error.upper();
      seen.emplace(std::move(z), std::move(rec));
    }
    if (out.degenerate) break;
  }
  std::vector<ApproximationRecord> pts;
  for (auto& [z, rec] : seen) pts.push_back(std::move(rec));
  out.records = staircase(std::move(pts), opts.precision_cap);
  return out;
}

IntegerMultivector wedge_of(const std::vector<ZVector>& vs, std::size_t count) {
  int m = static_cast<int>(vs.front().size());
  IntegerMultivector x = IntegerMultivector::scalar(m, BigInt(1));
  for (std::size_t i = 0; i < count; ++i) x = wedge(x, int_vector(vs[i]));
  return x;
}

RecordSearch reduced_search(const ThetaPoint& theta, int d, ErrorForm form, const BigRational& height,
                            const SearchOptions& opts) {
  int n = theta.n();
  BigRational omega = dirichlet_floor(n, d);
  RecordSearch out;
  out.search_height = height;
  std::vector<ApproximationRecord> pts;
  for (const auto& H : height_grid(height, opts.grid_ratio)) {
    auto [U, V] = form == ErrorForm::Primal ? primal_parameters(H, omega, d) : dual_parameters(H, omega, n, d);
    BodySpec body = form == ErrorForm::Primal ? primal_body(theta, U, V) : dual_body(theta, U, V);
    auto prof = minima_reduced(body, body_bits(U, V));
    std::size_t count = form == ErrorForm::Primal ? static_cast<std::size_t>(d + 1) : static_cast<std::size_t>(n - d);
    IntegerMultivector X = sign_normalized(primitive_part(wedge_of(prof.witnesses, count)));
    out.candidates += 1;
    auto rec = make_record(theta, std::move(X), form, d, opts.precision_cap);
    if (rec.error.upper() == 0) {
      if (!theta.has_rational_coordinate())
        throw InvariantViolation("certified zero approximation error for an independent point");
      out.degenerate = true;
      break;
    }
    pts.push_back(std::move(rec));
  }
  out.records = staircase(std::move(pts), opts.precision_cap);
  return out;
}

void check_level(const ThetaPoint& theta, int d) {
  if (d < 0 || d > theta.n() - 1) throw DimensionMismatch("level d must satisfy 0 <= d <= n-1");
}

}  // namespace

RecordSearch record_search_primal(const ThetaPoint& theta, int d, const BigRational& height_limit,
                                  const SearchOptions& opts) {
  check_level(theta, d);
  return opts.mode == SearchMode::Exhaustive ? exhaustive_search(theta, d, ErrorForm::Primal, height_limit, opts)
                                             : reduced_search(theta, d, ErrorForm::Primal, height_limit, opts);
}

RecordSearch record_search_dual(const ThetaPoint& theta, int d, const BigRational& height_limit,
                                const SearchOptions& opts) {
  check_level(theta, d);
  return opts.mode == SearchMode::Exhaustive ? exhaustive_search(theta, d, ErrorForm::Dual, height_limit, opts)
                                             : reduced_search(theta, d, ErrorForm::Dual, height_limit, opts);
}

ExponentEstimate estimate_omega(const RecordSearch& search, int window) {
  if (search.records.empty() && !search.degenerate) throw Error("no records to estimate from");
  ExponentEstimate e;
  e.which = "omega_d";
  e.d = search.records.empty() ? 0 : search.records.front().d;
  e.witnesses = search.records;
  e.search_height = search.search_height;
  std::optional<Enclosure> sup;
  std::vector<Enclosure> instants;
  for (const auto& r : search.records) {
    if (!r.instant_exponent) continue;
    instants.push_back(*r.instant_exponent);
    const Enclosure& x = *r.instant_exponent;
    sup = sup ? Enclosure(std::max(sup->lower(), x.lower()), std::max(sup->upper(), x.upper()), 64) : x;
  }
  e.lower_bound = sup ? ExtendedReal(*sup) : ExtendedReal(Enclosure(BigRational(0)));
  std::size_t from = instants.size() > static_cast<std::size_t>(window) ? instants.size() - window : 0;
  e.trend.assign(instants.begin() + static_cast<long>(from), instants.end());
  if (e.trend.size() >= 2) {
    bool last_is_max = true;
    for (std::size_t i = 0; i + 1 < e.trend.size(); ++i)
      if (e.trend[i].midpoint() >= e.trend.back().midpoint()) last_is_max = false;
    if (last_is_max) e.flags.push_back("NONCONVERGED");
  }
  if (search.degenerate) {
    // a certified zero error: the exponent is infinite
    e.lower_bound = ExtendedReal::infinity();
    e.flags.push_back("DEGENERATE");
  }
  return e;
}

namespace {

Enclosure sup_error(const std::vector<Enclosure>& y, const ZVector& z, bool linear_form) {
  if (linear_form) {
    Enclosure s;
    for (std::size_t i = 0; i < z.size(); ++i) s += y[i] * Enclosure(BigRational(z[i]));
    return abs(s);
  }
  Enclosure worst;
  Enclosure x0{BigRational(z[0])};
  for (std::size_t i = 1; i < z.size(); ++i) worst = max(worst, abs(x0 * y[i] - Enclosure(BigRational(z[i]))));
  return worst;
}

Enclosure refined_sup_error(const ThetaPoint& theta, const ZVector& z, bool linear_form, int cap) {
  for (int bits = 64;; bits *= 2) {
    Enclosure e = sup_error(theta.y(bits), z, linear_form);
    if (e.upper() == 0 || relatively_tight(e)) return e;
    if (bits >= cap) throw PrecisionExhausted("cannot separate a uniform approximation error from zero");
  }
}

bool within_sup(const ZVector& z, const BigRational& X) {
  for (const auto& x : z)
    if (BigRational(abs(x)) > X) return false;
  return true;
}

}  // namespace

ExponentEstimate estimate_uniform(const ThetaPoint& theta, bool which_top, const std::vector<BigRational>& grid,
                                  const UniformOptions& opts) {
  if (grid.empty()) throw Error("empty uniform grid");
  int n = theta.n();
  ExponentEstimate e;
  e.uniform = true;
  e.which = which_top ? "omega_hat_top" : "omega_hat_0";
  e.d = which_top ? n - 1 : 0;
  e.search_height = grid.back();
  e.flags.push_back("HEURISTIC-UNIFORM");
  BigRational floor = which_top ? BigRational(n) : ratio(1, n);
  BigRational ymax = 0;
  for (const auto& c : theta.y(32)) ymax += std::max(abs_q(c.lower()), abs_q(c.upper()));
  std::optional<BigRational> prev;
  bool degenerate = false;
  for (const auto& X : grid) {
    ZVector best_z;
    Enclosure best;
    bool found = false;
    if (opts.mode == SearchMode::Exhaustive) {
      BigRational v = round_up_relative(prev ? *prev : BigRational(X * (ymax + 1)), 24);
      auto cands = body_candidates(sup_body(theta, which_top, X, v), 1, opts.node_budget, body_bits(X, v));
      BigRational lo_min, hi_min;
      for (const auto& z : cands) {
        if (!within_sup(z, X)) continue;
        Enclosure err = refined_sup_error(theta, z, which_top, opts.precision_cap);
        if (!found || err.lower() < lo_min) lo_min = err.lower();
        if (!found || err.upper() < hi_min || (err.upper() == hi_min && lex_less(z, best_z))) {
          hi_min = err.upper();
          best_z = z;
        }
        found = true;
      }
      if (found) best = Enclosure(lo_min, hi_min, 64);
    } else {
      BigRational v = pow_rational(Enclosure(X), BigRational(-floor), 64).upper();
      v = round_up_relative(v, 24);
      auto prof = minima_reduced(sup_body(theta, which_top, X, v), body_bits(X, v));
      for (const auto& z : prof.witnesses) {
        if (!within_sup(z, X)) continue;
        Enclosure err = refined_sup_error(theta, z, which_top, opts.precision_cap);
        if (!found || err.upper() < best.upper()) {
          best = err;
          best_z = z;
        }
        found = true;
      }
    }
    if (!found) throw Error("uniform search found no lattice point at X = " + to_string(X));
    UniformGridPoint g{X, best, best_z, std::nullopt};
    if (best.upper() == 0) {
      if (!theta.has_rational_coordinate())
        throw InvariantViolation("certified zero uniform error for an independent point");
      degenerate = true;
    } else if (X > 1) {
      g.exponent = instant_exponent(Enclosure(X), best);
    }
    prev = best.upper();
    e.grid.push_back(std::move(g));
  }
  BigRational tail_from = grid.back() / opts.tail_ratio;
  std::optional<Enclosure> lowest;
  for (const auto& g : e.grid) {
    if (g.X < tail_from || !g.exponent) continue;
    const Enclosure& x = *g.exponent;
    lowest = lowest ? Enclosure(std::min(lowest->lower(), x.lower()), std::min(lowest->upper(), x.upper()), 64) : x;
  }
  if (degenerate) {
    e.flags.push_back("DEGENERATE");
    e.lower_bound = ExtendedReal::infinity();
  } else if (lowest) {
    e.lower_bound = *lowest;
  } else {
    throw Error("uniform grid has no point above 1 in its tail");
  }
  return e;
}

namespace {

BigRational dyadic_power(const BigRational& H, const BigRational& exponent) {
  Enclosure p = pow_rational(Enclosure(H), exponent, 96);
  long e = ilog2(p.midpoint());
  return floor_to_grid(p.midpoint(), 80 - static_cast<int>(e));
}

void check_identity(const BigRational& value, const Enclosure& target, const char* what) {
  BigRational tol = target.upper() * pow2(-40);
  if (value < target.lower() - tol || value > target.upper() + tol)
    throw InvariantViolation(std::string("body parameter identity failed: ") + what);
}

}  // namespace

std::pair<BigRational, BigRational> primal_parameters(const BigRational& H, const BigRational& omega, int d) {
  BigRational U = dyadic_power(H, (d * omega + d + 1) / BigRational(d + 1));
  BigRational V = dyadic_power(H, -omega / BigRational(d + 1));
  BigRational vd = 1;
  for (int i = 0; i < d; ++i) vd *= V;
  check_identity(U * vd, Enclosure(H), "U V^d = H");
  check_identity(vd * V, pow_rational(Enclosure(H), -omega, 96), "V^{d+1} = H^-omega");
  return {U, V};
}

std::pair<BigRational, BigRational> dual_parameters(const BigRational& H, const BigRational& omega, int n, int d) {
  int k = n - d;
  BigRational U = dyadic_power(H, ratio(1, k));
  BigRational V = dyadic_power(H, -(k * omega + k - 1) / BigRational(k));
  BigRational uk = 1;
  for (int i = 0; i < k; ++i) uk *= U;
  check_identity(uk, Enclosure(H), "U^{n-d} = H");
  check_identity(V * uk / U, pow_rational(Enclosure(H), -omega, 96), "U^{n-d-1} V = H^-omega");
  return {U, V};
}

std::string staircase_csv(const std::vector<ApproximationRecord>& records) {
  std::ostringstream os;
  os << "log_norm,log_error,instant_exponent\n";
  os << std::setprecision(12);
  for (const auto& r : records) {
    double ln = std::log(r.norm.approx());
    double le = std::log(r.error.approx());
    os << ln << ',' << le << ',';
    if (r.instant_exponent) os << r.instant_exponent->approx();
    os << '\n';
  }
  return os.str();
}

}  // namespace dioph
