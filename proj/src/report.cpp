#include "dioph/report.hpp"

namespace dioph {

namespace {

template <class T>
Json list(const std::vector<T>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

Json strings(const std::vector<std::string>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(x);
  return a;
}

}  // namespace

Json to_json(const BigRational& q) { return to_string(q); }

Json to_json(const Enclosure& e) {
  Json j;
  j["approx"] = e.approx();
  j["lower"] = to_string(e.lower());
  j["upper"] = to_string(e.upper());
  return j;
}

Json to_json(const ExtendedReal& x) {
  if (x.is_infinite()) return "+inf";
  return to_json(x.value());
}

Json to_json(const ExtValue& x) {
  switch (x.kind) {
    case ExtValue::Kind::Finite: return to_json(x.value);
    case ExtValue::Kind::PlusInfinity: return "+inf";
    case ExtValue::Kind::MinusInfinity: return "-inf";
    case ExtValue::Kind::Undefined: return "undefined";
  }
  return nullptr;
}

Json to_json(const IntegerMultivector& x) {
  Json a = Json::array();
  for (const auto& [mask, c] : x.terms()) {
    Json idx = Json::array();
    for (int i : mask_indices(mask)) idx.push_back(i);
    a.push_back(Json::array({idx, c.get_str()}));
  }
  return a;
}

Json to_json(const ZVector& z) {
  Json a = Json::array();
  for (const auto& c : z) a.push_back(c.get_str());
  return a;
}

Json to_json(const ApproximationRecord& r) {
  Json j;
  j["form"] = to_string(r.form);
  j["d"] = r.d;
  j["X"] = to_json(r.X);
  j["norm_sq"] = r.norm_sq.get_str();
  j["norm"] = to_json(r.norm);
  j["error"] = to_json(r.error);
  j["instant_exponent"] = r.instant_exponent ? to_json(*r.instant_exponent) : Json(nullptr);
  return j;
}

Json to_json(const ExponentEstimate& e) {
  Json j;
  j["which"] = e.which;
  j["uniform"] = e.uniform;
  if (!e.uniform) j["d"] = e.d;
  j["lower_bound"] = to_json(e.lower_bound);
  j["search_height"] = to_json(e.search_height);
  j["flags"] = strings(e.flags);
  j["trend"] = list(e.trend);
  if (e.uniform) {
    Json g = Json::array();
    for (const auto& p : e.grid) {
      Json row;
      row["X"] = to_json(p.X);
      row["minimum"] = to_json(p.minimum);
      row["witness"] = to_json(p.witness);
      row["exponent"] = p.exponent ? to_json(*p.exponent) : Json(nullptr);
      g.push_back(row);
    }
    j["grid"] = g;
  } else {
    j["records"] = e.witnesses.size();
  }
  return j;
}

Json to_json(const ExponentVector& e) {
  Json j;
  j["n"] = e.n;
  j["provenance"] = to_string(e.provenance);
  Json om;
  for (const auto& [d, v] : e.omega) om[std::to_string(d)] = to_json(v);
  j["omega"] = om;
  j["omega_hat_0"] = e.omega_hat_0 ? to_json(*e.omega_hat_0) : Json(nullptr);
  j["omega_hat_top"] = e.omega_hat_top ? to_json(*e.omega_hat_top) : Json(nullptr);
  j["note"] = e.note;
  return j;
}

Json to_json(const InequalityVerdict& v) {
  Json j;
  j["name"] = v.name;
  j["statement"] = v.statement;
  j["lhs"] = to_json(v.lhs);
  j["rhs"] = to_json(v.rhs);
  j["margin"] = to_json(v.margin);
  j["verdict"] = to_string(v.verdict);
  j["advisory"] = v.advisory;
  j["flags"] = strings(v.flags);
  return j;
}

Json to_json(const ChainResult& c) {
  Json j;
  j["chained"] = to_json(c.chained);
  j["direct"] = to_json(c.direct);
  j["agrees"] = to_string(c.agrees);
  Json t = Json::array();
  for (const auto& s : c.trace) t.push_back(Json::array({s.label, to_json(s.value)}));
  j["trace"] = t;
  return j;
}

Json to_json(const Theorem1Parts& t) {
  Json j;
  j["lower"] = to_json(t.lower);
  j["upper"] = to_json(t.upper);
  j["upper_printed"] = to_json(t.upper_printed);
  j["lower_chain"] = to_json(t.lower_chain);
  j["upper_chain"] = to_json(t.upper_chain);
  j["forms_equivalent"] = t.forms_equivalent;
  return j;
}

Json to_json(const TransferWitness& w) {
  Json j;
  j["direction"] = to_string(w.direction);
  j["input"] = to_json(w.input);
  j["output"] = to_json(w.output);
  j["omega"] = to_json(w.omega);
  j["omega_hat"] = w.omega_hat ? to_json(*w.omega_hat) : Json(nullptr);
  j["exponent_base"] = w.exponent_base;
  j["predicted_exponent"] = to_json(w.predicted_exponent);
  j["achieved_exponent"] = w.achieved_exponent ? to_json(*w.achieved_exponent) : Json(nullptr);
  j["transfer_exponent"] = to_json(w.transfer_exponent);
  Json c;
  for (const auto& [k, v] : w.constants_log) c[k] = to_json(v);
  j["constants_log"] = c;
  j["notes"] = strings(w.notes);
  return j;
}

Json to_json(const MinimaProfile& p) {
  Json j;
  j["method"] = to_string(p.method);
  j["lambdas"] = list(p.lambdas);
  j["witnesses"] = list(p.witnesses);
  if (p.method == MinimaMethod::Exhaustive) {
    j["level"] = to_json(p.level);
    j["candidates"] = p.candidates;
  } else {
    j["slack"] = to_json(p.slack);
  }
  j["bits"] = p.bits;
  return j;
}

Json to_json(const MinkowskiCheck& c) {
  Json j;
  j["product_times_volume"] = to_json(c.product);
  j["volume"] = to_json(c.volume);
  j["lower_bound"] = to_json(c.lower_bound);
  j["upper_bound"] = to_json(c.upper_bound);
  j["lower_ok"] = to_string(c.lower_ok);
  j["upper_ok"] = to_string(c.upper_ok);
  return j;
}

Json to_json(const MahlerInstance& m) {
  Json j;
  j["body"] = m.body;
  j["k"] = m.k;
  j["base_lambdas"] = list(m.base_lambdas);
  j["compound_lambda_1"] = list(m.compound_lambdas);
  j["product"] = to_json(m.product);
  j["ratio"] = to_json(m.ratio);
  return j;
}

Json to_json(const ComparabilityReport& r) {
  Json j;
  j["kappa_observed"] = to_json(Enclosure(r.kappa_observed));
  j["instances"] = list(r.instances);
  return j;
}

Json to_json(const LawCount& l) {
  Json j;
  j["law"] = l.law;
  j["checked"] = l.checked;
  j["passed"] = l.passed;
  return j;
}

Json to_json(const AlgebraSelftest& a) {
  Json j;
  j["seed"] = a.seed;
  j["samples"] = a.samples;
  j["all_passed"] = a.all_passed();
  j["laws"] = list(a.laws);
  return j;
}

Json to_json(const MinimaSelftest& m) {
  Json j;
  j["seed"] = m.seed;
  j["bodies"] = m.cases.size();
  j["passed"] = m.passed;
  Json cs = Json::array();
  for (const auto& c : m.cases) {
    Json row;
    row["body"] = c.body;
    row["lambdas"] = list(c.lambdas);
    row["minkowski"] = to_json(c.check);
    row["passed"] = c.passed;
    cs.push_back(row);
  }
  j["cases"] = cs;
  j["mahler"] = to_json(m.mahler);
  return j;
}

Json to_json(const TruncationWitness& t) {
  Json j;
  j["K"] = t.K;
  j["p"] = t.p.get_str();
  j["q"] = t.q.get_str();
  j["error"] = to_json(t.error);
  j["designed_bound"] = to_json(t.designed_bound);
  j["verified"] = t.verified;
  j["exponent"] = to_json(t.exponent);
  j["simultaneous_record"] = to_json(t.record);
  return j;
}

Json to_json(const CatalogEntry& e) {
  Json j;
  j["name"] = e.name;
  j["theta"] = e.theta.describe();
  j["n"] = e.theta.n();
  j["certificate"] = to_string(e.certificate);
  j["expected"] = e.expected ? to_json(*e.expected) : Json(nullptr);
  j["note"] = e.note;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dioph
