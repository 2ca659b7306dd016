#include "dioph/catalog.hpp"

#include <random>
#include <set>

#include "dioph/errors.hpp"
#include "dioph/polynomial.hpp"

namespace dioph {

const char* to_string(IndependenceCertificate c) {
  switch (c) {
    case IndependenceCertificate::AlgebraicProof: return "ALGEBRAIC-PROOF";
    case IndependenceCertificate::ByConstruction: return "BY-CONSTRUCTION";
    case IndependenceCertificate::Unchecked: return "UNCHECKED";
  }
  return "?";
}

namespace {

// Dirichlet floors and the uniform floors, which Schmidt's subspace theorem
// shows are attained at algebraic points with 1, theta_1, ..., theta_n independent.
ExponentVector algebraic_exponents(int n) {
  ExponentVector e;
  e.n = n;
  for (int d = 0; d < n; ++d) e.omega[d] = ratio(d + 1, n - d);
  e.omega_hat_0 = ratio(1, n);
  e.omega_hat_top = BigRational(n);
  e.provenance = Provenance::Asserted;
  e.note = "algebraic point: all exponents equal their Dirichlet floors (Schmidt's subspace theorem)";
  return e;
}

}  // namespace

CatalogEntry algebraic_point(const std::string& name, const std::vector<BigInt>& coeffs, const BigRational& lower,
                             const BigRational& upper, const std::vector<unsigned>& powers) {
  Polynomial p = Polynomial::from_integers(coeffs);
  int deg = p.degree();
  if (deg < 2) throw InvalidDescription("an algebraic point needs a polynomial of degree >= 2");
  if (deg > kMaxIrreducibilityDegree)
    throw InvalidDescription("irreducibility is checked only up to degree " +
                             std::to_string(kMaxIrreducibilityDegree));
  if (!is_irreducible_over_q(coeffs)) throw InvalidDescription("polynomial is reducible over Q");
  if (powers.empty()) throw InvalidDescription("no powers given");
  std::set<unsigned> seen;
  for (unsigned k : powers) {
    if (k < 1 || static_cast<int>(k) > deg - 1)
      throw InvalidDescription("powers must lie in 1..degree-1");
    if (!seen.insert(k).second) throw InvalidDescription("repeated power");
  }
  AlgebraicNumber alpha{coeffs, lower, upper};
  validate(alpha);
  std::vector<ThetaCoordinate> cs;
  for (unsigned k : powers) cs.push_back({alpha, k});
  CatalogEntry e;
  e.name = name;
  e.theta = ThetaPoint(std::move(cs));
  e.certificate = IndependenceCertificate::AlgebraicProof;
  e.expected = algebraic_exponents(e.theta.n());
  e.note = "irreducible of degree " + std::to_string(deg) + ", so 1, alpha, ..., alpha^" + std::to_string(deg - 1) +
           " are independent over Q";
  return e;
}

CatalogEntry liouville_point(const std::string& name, const BigInt& base, const Schedule& schedule, int n) {
  if (base < 2) throw InvalidDescription("base must be at least 2");
  if (n != 2) throw InvalidDescription("lacunary entries support n = 2 only");
  if (schedule.kind == Schedule::Kind::Explicit)
    throw InvalidDescription("a finite schedule gives a rational number");
  LacunarySeries xi{base, schedule};
  validate(xi);
  // a_{k+1} >= 2 a_k holds for all k once it holds on a prefix for power and factorial
  // schedules; affine schedules fail it eventually, which the prefix exposes
  for (long k = 1; k <= 12; ++k) {
    auto a = schedule.term(k), b = schedule.term(k + 1);
    if (!a || !b || *b < 2 * *a) throw InvalidDescription("schedule must satisfy a_{k+1} >= 2 a_k");
  }
  if (schedule.kind == Schedule::Kind::Affine) throw InvalidDescription("schedule must satisfy a_{k+1} >= 2 a_k");
  CatalogEntry e;
  e.name = name;
  e.theta = ThetaPoint({{xi, 1}, {xi, 2}});
  e.certificate = IndependenceCertificate::ByConstruction;
  e.note = "xi = sum " + base.get_str() + "^(-a_k), a_k = " + schedule.describe() +
           "; transcendence of xi is assumed from the literature, not proved here";
  return e;
}

CatalogEntry user_point(const std::string& name, const std::vector<RealDescription>& coords) {
  if (coords.empty()) throw InvalidDescription("a point needs at least one coordinate");
  std::vector<ThetaCoordinate> cs;
  for (const auto& c : coords) {
    validate(c);
    cs.push_back({c, 1});
  }
  CatalogEntry e;
  e.name = name;
  e.theta = ThetaPoint(std::move(cs));
  e.certificate = IndependenceCertificate::Unchecked;
  e.note = "independence waived by the user; verdicts are advisory";
  return e;
}

CatalogEntry random_point(const std::string& name, int n, std::uint64_t seed) {
  if (n < 1) throw InvalidDescription("n must be at least 1");
  std::mt19937_64 gen(seed);
  std::vector<RealDescription> cs;
  for (int i = 0; i < n; ++i) cs.push_back(RationalLiteral{ratio(BigInt(std::to_string(gen())), BigInt(1) << 64)});
  CatalogEntry e = user_point(name, cs);
  e.note = "64 random bits per coordinate, seed " + std::to_string(seed) + "; " + e.note;
  return e;
}

std::vector<std::string> builtin_names() {
  return {"cubic", "sqrt2", "quartic", "liouville3", "liouville-factorial"};
}

CatalogEntry builtin_entry(const std::string& name) {
  if (name == "cubic") return algebraic_point(name, {-1, -1, 0, 1}, 1, 2, {1, 2});
  if (name == "sqrt2") return algebraic_point(name, {-2, 0, 1}, 1, 2, {1});
  if (name == "quartic") return algebraic_point(name, {-2, 0, 0, 0, 1}, 1, 2, {1, 2, 3});
  if (name == "liouville3") {
    Schedule s;
    s.kind = Schedule::Kind::Power;
    s.a = 3;
    return liouville_point(name, 2, s);
  }
  if (name == "liouville-factorial") {
    Schedule s;
    s.kind = Schedule::Kind::Factorial;
    return liouville_point(name, 10, s);
  }
  throw ConfigError("unknown catalog entry '" + name + "'");
}

std::vector<TruncationWitness> truncation_witnesses(const CatalogEntry& entry, const BigRational& q_limit,
                                                    int precision_cap) {
  const auto& cs = entry.theta.coords();
  const auto* xi = std::get_if<LacunarySeries>(&cs.front().base);
  if (!xi || cs.front().power != 1) throw Error("truncation witnesses need a lacunary entry");
  std::vector<TruncationWitness> out;
  BigInt prev_a = 0, p = 0;
  for (long K = 1;; ++K) {
    auto a = xi->schedule.term(K), next = xi->schedule.term(K + 1);
    if (!a || !next) break;
    BigInt q;
    mpz_pow_ui(q.get_mpz_t(), xi->base.get_mpz_t(), a->get_ui());
    if (BigRational(q) > q_limit) break;
    // p_K = p_{K-1} base^{a_K - a_{K-1}} + 1
    BigInt shift;
    mpz_pow_ui(shift.get_mpz_t(), xi->base.get_mpz_t(), BigInt(*a - prev_a).get_ui());
    p = p * shift + 1;
    prev_a = *a;

    TruncationWitness w;
    w.K = K;
    w.p = p;
    w.q = q;
    BigInt tail;
    mpz_pow_ui(tail.get_mpz_t(), xi->base.get_mpz_t(), next->get_ui());
    w.designed_bound = ratio(2 * q, tail);
    long need = static_cast<long>(mpz_sizeinbase(tail.get_mpz_t(), 2)) * 2 + 64;
    for (int bits = 64;; bits *= 2) {
      if (bits > precision_cap) throw PrecisionExhausted("truncation error needs more precision");
      if (bits < need) continue;
      w.error = abs(Enclosure(BigRational(q)) * entry.theta.theta(1, bits) - Enclosure(BigRational(p)));
      if (w.error.lower() > 0) break;
    }
    w.verified = certify_le(w.error, Enclosure(w.designed_bound)) == Certificate::True;
    w.exponent = -log(w.error, 64) / log(Enclosure(BigRational(q)), 64);
    ZVector x{q * q, p * q, p * p};
    w.record = make_record(entry.theta, IntegerMultivector::from_dense(3, 1, x), ErrorForm::Primal, 0, precision_cap);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace dioph
