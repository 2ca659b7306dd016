#include "dioph/witness.hpp"

#include <algorithm>

#include "dioph/errors.hpp"

namespace dioph {

const char* to_string(Direction d) { return d == Direction::Up ? "UP" : "DOWN"; }

namespace {

constexpr int kBits = 64;

int body_bits(const BigRational& U, const BigRational& V) {
  return static_cast<int>(std::max<long>(64, 40 + ilog2(U) - ilog2(V)));
}

BigRational quantized_omega(const ApproximationRecord& r, const WitnessOptions& opts) {
  BigRational w;
  if (opts.omega_hint) {
    w = *opts.omega_hint;
  } else {
    if (!r.instant_exponent) throw Error("record has no instant exponent; an omega hint is required");
    w = floor_to_grid(r.instant_exponent->lower(), 30);
  }
  return std::max(w, BigRational(-1));
}

// Dyadic approximation of |X| used as the height H of the construction.
BigRational height_of(const ApproximationRecord& r) {
  return floor_to_grid(r.norm.midpoint(), 40);
}

Enclosure power(const Enclosure& base, const BigRational& e) { return pow_rational(base, e, kBits); }

MinimaProfile minima(const BodySpec& body, const WitnessOptions& opts) {
  int bits = body_bits(body.U, body.V);
  return opts.mode == SearchMode::Exhaustive ? minima_exhaustive(body, opts.node_budget, bits)
                                             : minima_reduced(body, bits);
}

// Wedge of the first `count` minima vectors, skipping dependent ones.
IntegerMultivector wedge_of_minima(const MinimaProfile& p, int count, std::vector<std::string>& notes) {
  int m = static_cast<int>(p.witnesses.front().size());
  IntegerMultivector x = IntegerMultivector::scalar(m, BigInt(1));
  int used = 0;
  for (std::size_t i = 0; i < p.witnesses.size() && used < count; ++i) {
    IntegerMultivector next = wedge(x, int_vector(p.witnesses[i]));
    if (next.is_zero()) {
      notes.push_back("skipped dependent minimum vector " + std::to_string(i + 1));
      continue;
    }
    x = std::move(next);
    ++used;
  }
  if (used < count) throw DependentVectors("minima vectors do not span the required rank");
  return x;
}

IntegerMultivector normalized(const IntegerMultivector& x) { return sign_normalized(primitive_part(x)); }

Enclosure lambda_product(const MinimaProfile& p, int count) {
  Enclosure s{BigRational(1)};
  for (int i = 0; i < count; ++i) s *= p.lambdas[i];
  return s;
}

std::optional<Enclosure> exponent_against(const Enclosure& error, const Enclosure& base) {
  if (error.upper() == 0 || !(base.lower() > 1)) return std::nullopt;
  return -log(error, kBits) / log(base, kBits);
}

}  // namespace

TransferWitness going_up_witness(const ThetaPoint& theta, const ApproximationRecord& record,
                                 const WitnessOptions& opts) {
  int n = theta.n();
  int d = record.X.degree() - 1;
  if (record.form != ErrorForm::Primal) throw Error("going up needs a primal record");
  if (d < 0 || d > n - 2) throw DimensionMismatch("going up needs 0 <= d <= n-2");
  TransferWitness w;
  w.direction = Direction::Up;
  w.input = record;
  BigRational om = quantized_omega(record, opts);
  w.omega = Enclosure(om);
  BigRational H = height_of(record);

  auto [U, V] = primal_parameters(H, om, d);
  if (V > U) V = U;
  auto prof = minima(primal_body(theta, U, V), opts);
  IntegerMultivector X2 = normalized(wedge_of_minima(prof, d + 2, w.notes));
  w.output = make_record(theta, std::move(X2), ErrorForm::Primal, d + 1, opts.precision_cap);

  Enclosure h{H};
  BigRational k = n - d;
  w.exponent_base = "output-norm";
  w.predicted_exponent = Enclosure((k * om + 1) / (k - 1));
  w.transfer_exponent = w.predicted_exponent;
  w.achieved_exponent = w.output.instant_exponent;
  w.constants_log["lambda_1..d+1"] = lambda_product(prof, d + 1);
  w.constants_log["lambda_d+2"] = prof.lambdas[d + 1];
  w.constants_log["lambda_d+2/bound"] =
      prof.lambdas[d + 1] / power(h, (k * om - d - 1) / ((d + 1) * k));
  w.constants_log["norm/bound"] = w.output.norm / power(h, (k - 1) / k);
  w.constants_log["error/bound"] = w.output.error / power(h, -(k * om + 1) / k);
  return w;
}

TransferWitness going_up_uniform_witness(const ThetaPoint& theta, const ApproximationRecord& record,
                                         const ZVector& x, const WitnessOptions& opts) {
  if (record.form != ErrorForm::Primal || record.X.degree() != 1)
    throw Error("the uniform going-up step starts from a simultaneous record");
  if (theta.n() < 2) throw DimensionMismatch("going up needs n >= 2");
  TransferWitness w;
  w.direction = Direction::Up;
  w.input = record;
  BigRational om = quantized_omega(record, opts);
  w.omega = Enclosure(om);
  if (content(record.X) != 1) throw InvariantViolation("the record vector is not primitive");
  IntegerMultivector xv = int_vector(x);
  BigInt nx = norm_sq(xv);
  if (nx >= record.norm_sq) throw Error("the uniform witness must be shorter than the record");
  IntegerMultivector X2 = wedge(record.X, xv);
  if (X2.is_zero()) throw InvariantViolation("a shorter vector is a multiple of a primitive record");
  w.notes.push_back("independence: the record is primitive and |x| < |X|");

  Enclosure ex = wedge_error(theta.y(kBits + 64), xv, kBits);
  Enclosure h = record.norm;
  auto hat = exponent_against(ex, h);
  if (!hat) throw Error("the uniform witness gives no exponent");
  w.omega_hat = hat;
  BigRational oh = floor_to_grid(hat->lower(), 30);
  w.output = make_record(theta, normalized(X2), ErrorForm::Primal, 1, opts.precision_cap);

  w.exponent_base = "output-norm";
  if (oh < 1) w.predicted_exponent = Enclosure((om + oh) / (1 - oh));
  w.transfer_exponent = w.predicted_exponent;
  w.achieved_exponent = w.output.instant_exponent;
  w.constants_log["norm/bound"] = w.output.norm / power(h, 1 - oh);
  w.constants_log["error/bound"] = w.output.error / power(h, -(om + oh));
  w.constants_log["uniform_error"] = ex;
  return w;
}

TransferWitness going_down_witness(const ThetaPoint& theta, const ApproximationRecord& record,
                                   const WitnessOptions& opts) {
  int n = theta.n();
  if (record.form != ErrorForm::Dual) throw Error("going down needs a dual record");
  int d = n - record.X.degree();
  if (d < 1 || d > n - 1) throw DimensionMismatch("going down needs 1 <= d <= n-1");
  TransferWitness w;
  w.direction = Direction::Down;
  w.input = record;
  BigRational om = quantized_omega(record, opts);
  w.omega = Enclosure(om);
  BigRational H = height_of(record);

  auto [U, V] = dual_parameters(H, om, n, d);
  if (V > U) V = U;
  auto prof = minima(dual_body(theta, U, V), opts);
  int k = n - d;
  IntegerMultivector X2 = normalized(wedge_of_minima(prof, k + 1, w.notes));
  w.output = make_record(theta, std::move(X2), ErrorForm::Dual, d - 1, opts.precision_cap);

  Enclosure h = record.norm;
  w.exponent_base = "input-norm";
  w.predicted_exponent = Enclosure(d * om / (d + 1));
  w.transfer_exponent = Enclosure(d * om / (om + d + 1));
  w.achieved_exponent = exponent_against(w.output.error, h);
  w.constants_log["lambda_1..n-d"] = lambda_product(prof, k);
  w.constants_log["lambda_n-d+1"] = prof.lambdas[k];
  w.constants_log["lambda_n-d+1/bound"] =
      prof.lambdas[k] / power(h, (k * om - d - 1) / BigRational(k * (d + 1)));
  w.constants_log["norm/bound"] = w.output.norm / power(h, (om + d + 1) / (d + 1));
  w.constants_log["error/bound"] = w.output.error / power(h, -d * om / (d + 1));
  return w;
}

TransferWitness going_down_uniform_witness(const ThetaPoint& theta, const ApproximationRecord& record,
                                           const ZVector& x, const WitnessOptions& opts) {
  int n = theta.n();
  if (record.form != ErrorForm::Dual || record.X.degree() != 1)
    throw Error("the uniform going-down step starts from a linear-form record");
  if (n < 2) throw DimensionMismatch("going down needs n >= 2");
  TransferWitness w;
  w.direction = Direction::Down;
  w.input = record;
  BigRational om = quantized_omega(record, opts);
  w.omega = Enclosure(om);
  if (content(record.X) != 1) throw InvariantViolation("the record vector is not primitive");
  IntegerMultivector xv = int_vector(x);
  Enclosure ex = contract_error(theta.y(kBits + 64), xv, kBits);
  // x = kX would give |y.x| >= |y.X|, so a strictly smaller error certifies independence
  if (certify_lt(ex, record.error) != Certificate::True)
    throw Error("the uniform witness must have a certified smaller linear-form value");
  IntegerMultivector X2 = wedge(record.X, xv);
  if (X2.is_zero()) throw InvariantViolation("primitivity argument failed");
  w.notes.push_back("independence: the record is primitive and |y.x| < |y.X|");

  Enclosure h = record.norm;
  Enclosure nx = euclidean_norm(xv, kBits);
  // |x| = |X|^{w/w^}
  Enclosure hat = Enclosure(om) * log(h, kBits) / log(nx, kBits);
  w.omega_hat = hat;
  BigRational oh = floor_to_grid(hat.lower(), 30);
  w.output = make_record(theta, normalized(X2), ErrorForm::Dual, n - 2, opts.precision_cap);

  w.exponent_base = "input-norm";
  w.predicted_exponent = Enclosure(om) - Enclosure(om / oh);
  w.transfer_exponent = Enclosure((oh - 1) * om / (om + oh));
  w.achieved_exponent = exponent_against(w.output.error, h);
  w.constants_log["norm/bound"] = w.output.norm / power(h, 1 + om / oh);
  w.constants_log["error/bound"] = w.output.error / power(h, -om + om / oh);
  w.constants_log["uniform_error"] = ex;
  return w;
}

}  // namespace dioph
