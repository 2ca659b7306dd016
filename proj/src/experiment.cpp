#include "dioph/experiment.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "dioph/errors.hpp"

namespace dioph {

const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Estimate: return "ESTIMATE";
    case TaskKind::EstimateUniform: return "ESTIMATE-UNIFORM";
    case TaskKind::Validate: return "VALIDATE";
    case TaskKind::WitnessUp: return "WITNESS-UP";
    case TaskKind::WitnessDown: return "WITNESS-DOWN";
    case TaskKind::Truncation: return "TRUNCATION";
    case TaskKind::SelftestAlgebra: return "SELFTEST-ALGEBRA";
    case TaskKind::SelftestMinima: return "SELFTEST-MINIMA";
  }
  return "?";
}

namespace {

// ---- config parsing ----

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

const Json& required(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return j.at(key);
}

BigInt integer_of(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return BigInt(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    BigInt z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw ConfigError(where + ": not an integer");
    return z;
  }
  throw ConfigError(where + ": expected an integer");
}

BigRational rational_of(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return BigRational(integer_of(j, where));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": expected an exact rational (integer or \"p/q\" string)");
}

int int_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

ExtendedReal extended_of(const Json& j, const std::string& where) {
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "+inf"))
    return ExtendedReal::infinity();
  return rational_of(j, where);
}

Schedule schedule_of(const Json& j, const std::string& where) {
  check_keys(j, {"kind", "a", "b", "terms"}, where);
  Schedule s;
  std::string kind = required(j, "kind", where).get<std::string>();
  if (kind == "power") {
    s.kind = Schedule::Kind::Power;
    if (j.contains("a")) s.a = integer_of(j["a"], where + ".a");
  } else if (kind == "factorial") {
    s.kind = Schedule::Kind::Factorial;
  } else if (kind == "affine") {
    s.kind = Schedule::Kind::Affine;
    s.a = integer_of(required(j, "a", where), where + ".a");
    s.b = integer_of(required(j, "b", where), where + ".b");
  } else if (kind == "explicit") {
    s.kind = Schedule::Kind::Explicit;
    for (const auto& t : required(j, "terms", where)) s.terms.push_back(integer_of(t, where + ".terms"));
  } else {
    throw ConfigError(where + ": unknown schedule kind '" + kind + "'");
  }
  return s;
}

std::vector<BigInt> integers_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list");
  std::vector<BigInt> out;
  for (const auto& x : j) out.push_back(integer_of(x, where));
  return out;
}

RealDescription real_of(const Json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) throw ConfigError(where + ": expected one of rational, decimal, algebraic, lacunary");
  const auto& [kind, v] = *j.items().begin();
  if (kind == "rational") return RationalLiteral{rational_of(v, where)};
  if (kind == "decimal") {
    if (!v.is_string()) throw ConfigError(where + ": decimals are given as strings");
    return DecimalLiteral{v.get<std::string>()};
  }
  if (kind == "algebraic") {
    check_keys(v, {"coeffs", "lower", "upper"}, where);
    return AlgebraicNumber{integers_of(required(v, "coeffs", where), where + ".coeffs"),
                           rational_of(required(v, "lower", where), where + ".lower"),
                           rational_of(required(v, "upper", where), where + ".upper")};
  }
  if (kind == "lacunary") {
    check_keys(v, {"base", "schedule"}, where);
    return LacunarySeries{integer_of(required(v, "base", where), where + ".base"),
                          schedule_of(required(v, "schedule", where), where + ".schedule")};
  }
  throw ConfigError(where + ": unknown real kind '" + kind + "'");
}

CatalogEntry entry_of(const Json& j, const std::string& where, std::uint64_t seed) {
  std::string name = required(j, "name", where).get<std::string>();
  try {
    if (j.contains("builtin")) {
      CatalogEntry e = builtin_entry(j["builtin"].get<std::string>());
      e.name = name;
      return e;
    }
    std::string kind = required(j, "kind", where).get<std::string>();
    if (kind == "algebraic") {
      std::vector<unsigned> powers;
      for (const auto& p : required(j, "powers", where)) powers.push_back(static_cast<unsigned>(int_of(p, where)));
      return algebraic_point(name, integers_of(required(j, "coeffs", where), where + ".coeffs"),
                             rational_of(required(j, "lower", where), where + ".lower"),
                             rational_of(required(j, "upper", where), where + ".upper"), powers);
    }
    if (kind == "lacunary")
      return liouville_point(name, integer_of(required(j, "base", where), where + ".base"),
                             schedule_of(required(j, "schedule", where), where + ".schedule"));
    if (kind == "user") {
      std::vector<RealDescription> cs;
      for (const auto& c : required(j, "coords", where)) cs.push_back(real_of(c, where + ".coords"));
      return user_point(name, cs);
    }
    if (kind == "random") {
      std::uint64_t s = j.contains("seed") ? j["seed"].get<std::uint64_t>() : seed;
      return random_point(name, int_of(required(j, "n", where), where + ".n"), s);
    }
    throw ConfigError(where + ": unknown entry kind '" + kind + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ExponentVector vector_of(const Json& j, int n, const std::string& where) {
  check_keys(j, {"provenance", "omega", "omega_hat_0", "omega_hat_top", "note"}, where);
  ExponentVector e;
  e.n = n;
  std::string prov = j.value("provenance", "ASSERTED");
  if (prov == "ASSERTED") e.provenance = Provenance::Asserted;
  else if (prov == "ESTIMATED") e.provenance = Provenance::Estimated;
  else throw ConfigError(where + ": provenance must be ASSERTED or ESTIMATED");
  if (j.contains("omega")) {
    for (const auto& [k, v] : j["omega"].items()) {
      int d;
      try {
        d = std::stoi(k);
      } catch (const std::exception&) {
        throw ConfigError(where + ".omega: keys are levels d");
      }
      if (d < 0 || d >= n) throw ConfigError(where + ".omega: level " + k + " outside 0..n-1");
      e.omega[d] = extended_of(v, where + ".omega." + k);
    }
  }
  if (j.contains("omega_hat_0")) e.omega_hat_0 = extended_of(j["omega_hat_0"], where + ".omega_hat_0");
  if (j.contains("omega_hat_top")) e.omega_hat_top = extended_of(j["omega_hat_top"], where + ".omega_hat_top");
  e.note = j.value("note", "");
  return e;
}

SearchMode mode_of(const Json& j, const std::string& where) {
  std::string m = j.get<std::string>();
  if (m == "EXHAUSTIVE") return SearchMode::Exhaustive;
  if (m == "REDUCED") return SearchMode::Reduced;
  throw ConfigError(where + ": mode must be EXHAUSTIVE or REDUCED");
}

bool is_lacunary(const CatalogEntry& e) {
  return std::holds_alternative<LacunarySeries>(e.theta.coords().front().base);
}

TaskSpec task_of(const Json& j, const CatalogEntry* entry, const std::string& where) {
  check_keys(j, {"task", "d", "which", "uniform", "designed", "source", "vector", "per_case", "hodge_samples",
                 "bodies", "mahler_bodies", "kappa_bound"},
             where);
  TaskSpec t;
  std::string kind = required(j, "task", where).get<std::string>();
  static const std::map<std::string, TaskKind> kinds = {
      {"ESTIMATE", TaskKind::Estimate},         {"ESTIMATE-UNIFORM", TaskKind::EstimateUniform},
      {"VALIDATE", TaskKind::Validate},         {"WITNESS-UP", TaskKind::WitnessUp},
      {"WITNESS-DOWN", TaskKind::WitnessDown},  {"TRUNCATION", TaskKind::Truncation},
      {"SELFTEST-ALGEBRA", TaskKind::SelftestAlgebra}, {"SELFTEST-MINIMA", TaskKind::SelftestMinima}};
  auto it = kinds.find(kind);
  if (it == kinds.end()) throw ConfigError(where + ": unknown task '" + kind + "'");
  t.kind = it->second;
  bool selftest = t.kind == TaskKind::SelftestAlgebra || t.kind == TaskKind::SelftestMinima;
  if (selftest == (entry != nullptr))
    throw ConfigError(where + ": " + kind + (selftest ? " belongs in the top-level task list" : " needs an entry"));
  if (j.contains("d")) t.d = int_of(j["d"], where + ".d");
  if (j.contains("uniform")) t.uniform = j["uniform"].get<bool>();
  if (j.contains("designed")) t.designed = j["designed"].get<bool>();
  if (j.contains("per_case")) t.per_case = int_of(j["per_case"], where);
  if (j.contains("hodge_samples")) t.hodge_samples = int_of(j["hodge_samples"], where);
  if (j.contains("bodies")) t.bodies = int_of(j["bodies"], where);
  if (j.contains("mahler_bodies")) t.mahler_bodies = int_of(j["mahler_bodies"], where);
  if (j.contains("kappa_bound")) t.kappa_bound = rational_of(j["kappa_bound"], where + ".kappa_bound");
  if (selftest) return t;

  int n = entry->theta.n();
  auto need_d = [&](int lo, int hi) {
    if (!j.contains("d")) throw ConfigError(where + ": " + kind + " needs d");
    if (t.d < lo || t.d > hi)
      throw ConfigError(where + ": d = " + std::to_string(t.d) + " outside " + std::to_string(lo) + ".." +
                        std::to_string(hi) + " for n = " + std::to_string(n));
  };
  switch (t.kind) {
    case TaskKind::Estimate: need_d(0, n - 1); break;
    case TaskKind::WitnessUp: need_d(0, n - 2); break;
    case TaskKind::WitnessDown: need_d(1, n - 1); break;
    case TaskKind::EstimateUniform: {
      std::string w = j.value("which", "omega_hat_0");
      if (w != "omega_hat_0" && w != "omega_hat_top") throw ConfigError(where + ": which must be omega_hat_0 or omega_hat_top");
      t.top = w == "omega_hat_top";
      break;
    }
    case TaskKind::Truncation:
      if (!is_lacunary(*entry)) throw ConfigError(where + ": TRUNCATION needs a lacunary entry");
      break;
    case TaskKind::Validate: {
      std::string s = j.value("source", j.contains("vector") ? "given" : entry->expected ? "expected" : "estimated");
      if (s == "given") {
        t.source = VectorSource::Given;
        t.vector = vector_of(required(j, "vector", where), n, where + ".vector");
      } else if (s == "expected") {
        if (!entry->expected) throw ConfigError(where + ": entry '" + entry->name + "' has no expected exponents");
        t.source = VectorSource::Expected;
      } else if (s == "estimated") {
        t.source = VectorSource::Estimated;
      } else {
        throw ConfigError(where + ": source must be given, expected or estimated");
      }
      break;
    }
    default: break;
  }
  return t;
}

struct Defaults {
  BigRational height = 1000;
  SearchMode mode = SearchMode::Exhaustive;
  int precision_cap = kDefaultPrecisionCap;
  long node_budget = kDefaultEnumerationBudget;
  BigRational tolerance = BigRational(3, 20);
};

void apply_settings(const Json& j, const std::string& where, Defaults& d, std::optional<BigRational>* search_height) {
  if (j.contains("height")) d.height = rational_of(j["height"], where + ".height");
  if (j.contains("mode")) d.mode = mode_of(j["mode"], where + ".mode");
  if (j.contains("precision_cap")) d.precision_cap = int_of(j["precision_cap"], where + ".precision_cap");
  if (j.contains("node_budget")) d.node_budget = j["node_budget"].get<long>();
  if (j.contains("tolerance")) d.tolerance = rational_of(j["tolerance"], where + ".tolerance");
  if (search_height && j.contains("search_height"))
    *search_height = rational_of(j["search_height"], where + ".search_height");
  if (d.height < 1) throw ConfigError(where + ": height must be at least 1");
  if (d.precision_cap < 64) throw ConfigError(where + ": precision_cap must be at least 64");
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  check_keys(j, {"schema_version", "seed", "workers", "timings", "report", "csv_dir", "defaults", "entries", "tasks"},
             "config");
  if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion)
    throw ConfigError("config: unsupported schema_version");
  ExperimentConfig c;
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) c.workers = std::max(1, j["workers"].get<int>());
    if (j.contains("timings")) c.timings = j["timings"].get<bool>();
    if (j.contains("report")) c.report_path = j["report"].get<std::string>();
    if (j.contains("csv_dir")) c.csv_dir = j["csv_dir"].get<std::string>();
    Defaults base;
    if (j.contains("defaults")) {
      check_keys(j["defaults"], {"height", "mode", "precision_cap", "node_budget", "tolerance"}, "defaults");
      apply_settings(j["defaults"], "defaults", base, nullptr);
    }
    std::set<std::string> names;
    if (j.contains("entries")) {
      int i = 0;
      for (const auto& ej : j["entries"]) {
        std::string where = "entries[" + std::to_string(i++) + "]";
        check_keys(ej, {"name", "builtin", "kind", "coeffs", "lower", "upper", "powers", "base", "schedule", "coords",
                        "n", "seed", "height", "search_height", "mode", "precision_cap", "node_budget", "tolerance",
                        "tasks"},
                   where);
        EntryConfig e;
        e.entry = entry_of(ej, where, c.seed);
        if (!names.insert(e.entry.name).second) throw ConfigError(where + ": duplicate entry name '" + e.entry.name + "'");
        Defaults d = base;
        apply_settings(ej, where, d, &e.search_height);
        e.height = d.height;
        e.mode = d.mode;
        e.precision_cap = d.precision_cap;
        e.node_budget = d.node_budget;
        e.tolerance = d.tolerance;
        int k = 0;
        if (ej.contains("tasks"))
          for (const auto& tj : ej["tasks"])
            e.tasks.push_back(task_of(tj, &e.entry, where + ".tasks[" + std::to_string(k++) + "]"));
        c.entries.push_back(std::move(e));
      }
    }
    if (j.contains("tasks")) {
      int k = 0;
      for (const auto& tj : j["tasks"]) c.tasks.push_back(task_of(tj, nullptr, "tasks[" + std::to_string(k++) + "]"));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const Json::exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

namespace {

// ---- task execution ----

struct Outcome {
  Json result;
  std::vector<std::pair<std::string, std::string>> csv;
  long violated = 0;
  long invariant_failures = 0;
  std::string status = "OK";  // OK, PRECISION-EXHAUSTED, BUDGET-EXCEEDED, ERROR
  std::string error;
  double seconds = 0;
};

SearchOptions search_options(const EntryConfig& e) {
  SearchOptions o;
  o.mode = e.mode;
  o.node_budget = e.node_budget;
  o.precision_cap = e.precision_cap;
  return o;
}

// Primal staircase at level d; on a lacunary entry with d = 0 the truncation
// records up to the full height are merged in.
RecordSearch primal_with_designed(const EntryConfig& e, int d, bool designed, std::vector<TruncationWitness>* out) {
  RecordSearch s = record_search_primal(e.entry.theta, d, e.exhaustive_height(), search_options(e));
  if (designed && d == 0 && is_lacunary(e.entry)) {
    auto ws = truncation_witnesses(e.entry, e.height, e.precision_cap);
    for (const auto& w : ws) s.records.push_back(w.record);
    s.records = staircase(std::move(s.records), e.precision_cap);
    s.search_height = e.height;
    if (out) *out = std::move(ws);
  }
  return s;
}

ExponentEstimate estimate_primal(const EntryConfig& e, int d, bool designed, std::vector<TruncationWitness>* ws) {
  RecordSearch s = primal_with_designed(e, d, designed, ws);
  ExponentEstimate est = estimate_omega(s);
  if (ws && !ws->empty()) est.flags.push_back("DESIGNED-WITNESSES");
  return est;
}

ExponentEstimate estimate_uniform_of(const EntryConfig& e, bool top) {
  UniformOptions u;
  u.mode = e.mode;
  u.node_budget = e.node_budget;
  u.precision_cap = e.precision_cap;
  return estimate_uniform(e.entry.theta, top, height_grid(e.exhaustive_height(), 2), u);
}

ExponentVector estimated_vector(const EntryConfig& e, Json& evidence) {
  ExponentVector v;
  int n = e.entry.theta.n();
  v.n = n;
  v.provenance = Provenance::Estimated;
  for (int d = 0; d < n; ++d) {
    std::vector<TruncationWitness> ws;
    auto est = estimate_primal(e, d, true, &ws);
    v.omega[d] = est.lower_bound;
    evidence["omega_" + std::to_string(d)] = to_json(est);
  }
  auto h0 = estimate_uniform_of(e, false);
  auto ht = estimate_uniform_of(e, true);
  v.omega_hat_0 = h0.lower_bound;
  v.omega_hat_top = ht.lower_bound;
  evidence["omega_hat_0"] = to_json(h0);
  evidence["omega_hat_top"] = to_json(ht);
  v.note = "lower bounds from searches to height " + to_string(e.exhaustive_height());
  return v;
}

Json records_json(const std::vector<ApproximationRecord>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a;
}

std::string csv_name(const EntryConfig& e, std::size_t index, const std::string& what) {
  return e.entry.name + "_" + std::to_string(index) + "_" + what + ".csv";
}

Outcome run_validate(const EntryConfig& e, const TaskSpec& t) {
  Outcome o;
  ExponentVector v;
  Json evidence;
  switch (t.source) {
    case VectorSource::Given: v = *t.vector; break;
    case VectorSource::Expected: v = *e.entry.expected; break;
    case VectorSource::Estimated: v = estimated_vector(e, evidence); break;
  }
  CheckOptions opts;
  opts.tolerance = e.tolerance;
  opts.advisory = e.entry.certificate == IndependenceCertificate::Unchecked;
  auto verdicts = check_all(v, opts);
  o.result["source"] = t.source == VectorSource::Given ? "given" : t.source == VectorSource::Expected ? "expected" : "estimated";
  o.result["vector"] = to_json(v);
  if (!evidence.is_null()) o.result["evidence"] = evidence;
  Json vs = Json::array();
  std::map<std::string, long> tally;
  for (const auto& x : verdicts) {
    vs.push_back(to_json(x));
    ++tally[to_string(x.verdict)];
    if (x.verdict == Verdict::Violated) ++o.violated;
  }
  o.result["verdicts"] = vs;
  Json tj;
  for (const auto& [k, c] : tally) tj[k] = c;
  o.result["tally"] = tj;
  bool complete = static_cast<int>(v.omega.size()) == v.n && v.omega_hat_0 && v.omega_hat_top;
  if (v.n >= 2 && !complete) o.result["chains"] = "SKIPPED: the vector has missing values";
  if (v.n >= 2 && complete) {
    o.result["theorem1_from_parts"] = to_json(theorem1_from_parts(v, opts));
    auto comp = compose_level_chain(v, 0, v.n - 1);
    Json cj;
    cj["lower"] = to_json(comp.lower);
    cj["upper"] = to_json(comp.upper);
    o.result["level_chain_composition"] = cj;
  }
  return o;
}

Outcome run_witness(const EntryConfig& e, const TaskSpec& t) {
  Outcome o;
  const ThetaPoint& theta = e.entry.theta;
  int n = theta.n();
  bool up = t.kind == TaskKind::WitnessUp;
  RecordSearch s = up ? record_search_primal(theta, t.d, e.exhaustive_height(), search_options(e))
                      : record_search_dual(theta, t.d, e.exhaustive_height(), search_options(e));
  WitnessOptions wo;
  wo.mode = e.mode;
  wo.node_budget = e.node_budget;
  wo.precision_cap = e.precision_cap;
  Json ws = Json::array(), skipped = Json::array();
  auto attempt = [&](const std::function<TransferWitness()>& f, std::size_t i) {
    try {
      ws.push_back(to_json(f()));
    } catch (const PrecisionExhausted&) {
      throw;
    } catch (const BudgetExceeded&) {
      throw;
    } catch (const InvariantViolation& ex) {
      ++o.invariant_failures;
      skipped.push_back(Json::array({i, std::string("invariant: ") + ex.what()}));
    } catch (const Error& ex) {
      skipped.push_back(Json::array({i, ex.what()}));
    }
  };
  const auto& rs = s.records;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (!rs[i].instant_exponent || !(rs[i].norm.lower() > 1)) continue;
    attempt([&] { return up ? going_up_witness(theta, rs[i], wo) : going_down_witness(theta, rs[i], wo); }, i);
  }
  Json uniform = Json::array();
  if (t.uniform) {
    std::swap(ws, uniform);
    if (up && t.d == 0) {
      for (std::size_t i = 1; i < rs.size(); ++i) {
        if (!rs[i].instant_exponent || !(rs[i].norm.lower() > 1)) continue;
        attempt([&] { return going_up_uniform_witness(theta, rs[i], rs[i - 1].X.dense(), wo); }, i);
      }
    } else if (!up && t.d == n - 1) {
      for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
        if (!rs[i].instant_exponent || !(rs[i].norm.lower() > 1)) continue;
        attempt([&] { return going_down_uniform_witness(theta, rs[i], rs[i + 1].X.dense(), wo); }, i);
      }
    }
    std::swap(ws, uniform);
  }
  o.result["input_records"] = records_json(rs);
  o.result["witnesses"] = ws;
  if (t.uniform) o.result["uniform_witnesses"] = uniform;
  o.result["skipped"] = skipped;
  return o;
}

Outcome run_entry_task(const EntryConfig& e, const TaskSpec& t, std::size_t index) {
  Outcome o;
  switch (t.kind) {
    case TaskKind::Estimate: {
      std::vector<TruncationWitness> ws;
      auto est = estimate_primal(e, t.d, t.designed, &ws);
      o.result["estimate"] = to_json(est);
      o.result["staircase"] = records_json(est.witnesses);
      if (!ws.empty()) {
        Json a = Json::array();
        for (const auto& w : ws) a.push_back(to_json(w));
        o.result["designed_witnesses"] = a;
      }
      o.csv.emplace_back(csv_name(e, index, "omega_" + std::to_string(t.d)), staircase_csv(est.witnesses));
      break;
    }
    case TaskKind::EstimateUniform:
      o.result["estimate"] = to_json(estimate_uniform_of(e, t.top));
      break;
    case TaskKind::Validate: return run_validate(e, t);
    case TaskKind::WitnessUp:
    case TaskKind::WitnessDown: return run_witness(e, t);
    case TaskKind::Truncation: {
      auto ws = truncation_witnesses(e.entry, e.height, e.precision_cap);
      Json a = Json::array();
      for (const auto& w : ws) {
        a.push_back(to_json(w));
        if (!w.verified) ++o.invariant_failures;
      }
      o.result["witnesses"] = a;
      break;
    }
    default: throw Error("self-tests have no entry");
  }
  return o;
}

Outcome run_selftest(const TaskSpec& t, std::uint64_t seed, long node_budget) {
  Outcome o;
  if (t.kind == TaskKind::SelftestAlgebra) {
    auto a = algebra_selftest(seed, t.per_case);
    auto h = hodge_duality_selftest(seed + 1, t.hodge_samples);
    o.result["algebra"] = to_json(a);
    o.result["hodge_duality"] = to_json(h);
    if (!a.all_passed()) ++o.invariant_failures;
    if (h.passed != h.checked) ++o.invariant_failures;
  } else {
    auto m = minima_selftest(seed, t.bodies, t.mahler_bodies, node_budget);
    o.result = to_json(m);
    o.result["kappa_bound"] = to_json(t.kappa_bound);
    if (m.passed != static_cast<long>(m.cases.size())) ++o.invariant_failures;
    if (m.mahler.kappa_observed > t.kappa_bound) ++o.invariant_failures;
  }
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const PrecisionExhausted& e) {
    o.status = "PRECISION-EXHAUSTED";
    o.error = e.what();
  } catch (const BudgetExceeded& e) {
    o.status = "BUDGET-EXCEEDED";
    o.error = e.what();
  } catch (const InvariantViolation& e) {
    o.status = "INVARIANT-FAILURE";
    o.error = e.what();
    ++o.invariant_failures;
  } catch (const std::exception& e) {
    o.status = "ERROR";
    o.error = e.what();
    ++o.invariant_failures;
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

Json task_header(const TaskSpec& t, const CatalogEntry* entry) {
  Json j;
  j["task"] = to_string(t.kind);
  switch (t.kind) {
    case TaskKind::Estimate:
    case TaskKind::WitnessUp:
    case TaskKind::WitnessDown: j["d"] = t.d; break;
    case TaskKind::EstimateUniform: j["which"] = t.top ? "omega_hat_top" : "omega_hat_0"; break;
    default: break;
  }
  if (entry && (t.kind == TaskKind::WitnessUp || t.kind == TaskKind::WitnessDown)) j["uniform"] = t.uniform;
  return j;
}

}  // namespace

ReportBundle run(const ExperimentConfig& config) {
  struct Job {
    const EntryConfig* entry;
    const TaskSpec* task;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (const auto& e : config.entries)
    for (std::size_t i = 0; i < e.tasks.size(); ++i) jobs.push_back({&e, &e.tasks[i], i});
  for (std::size_t i = 0; i < config.tasks.size(); ++i) jobs.push_back({nullptr, &config.tasks[i], i});

  std::vector<Outcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < jobs.size();) {
      const Job& job = jobs[k];
      outcomes[k] = guarded([&] {
        return job.entry ? run_entry_task(*job.entry, *job.task, job.index)
                         : run_selftest(*job.task, config.seed + job.index, kDefaultEnumerationBudget);
      });
    }
  };
  int nthreads = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  ReportBundle b;
  Json& r = b.report;
  r["schema_version"] = kSchemaVersion;
  r["seed"] = config.seed;
  long violated = 0, failures = 0, precision = 0, budget = 0;
  auto task_json = [&](const Job& job, const Outcome& o) {
    Json tj = task_header(*job.task, job.entry ? &job.entry->entry : nullptr);
    if (!job.entry) tj["seed"] = config.seed + job.index;
    tj["status"] = o.status;
    if (!o.error.empty()) tj["error"] = o.error;
    if (!o.result.is_null()) tj["result"] = o.result;
    if (!o.csv.empty()) {
      Json names = Json::array();
      for (const auto& [name, text] : o.csv) {
        names.push_back(name);
        b.csv[name] = text;
      }
      tj["csv"] = names;
    }
    if (config.timings) tj["seconds"] = o.seconds;
    violated += o.violated;
    failures += o.invariant_failures;
    if (o.status == "PRECISION-EXHAUSTED") ++precision;
    if (o.status == "BUDGET-EXCEEDED") ++budget;
    return tj;
  };
  Json entries = Json::array();
  std::size_t k = 0;
  for (const auto& e : config.entries) {
    Json ej;
    ej["entry"] = to_json(e.entry);
    ej["height"] = to_json(e.height);
    ej["search_height"] = to_json(e.exhaustive_height());
    ej["mode"] = to_string(e.mode);
    ej["precision_cap"] = e.precision_cap;
    Json ts = Json::array();
    for (std::size_t i = 0; i < e.tasks.size(); ++i, ++k) ts.push_back(task_json(jobs[k], outcomes[k]));
    ej["tasks"] = ts;
    entries.push_back(ej);
  }
  r["entries"] = entries;
  Json global = Json::array();
  for (; k < jobs.size(); ++k) global.push_back(task_json(jobs[k], outcomes[k]));
  r["tasks"] = global;

  if (precision) b.exit_code = kExitPrecision;
  else if (budget) b.exit_code = kExitBudget;
  else if (violated || failures) b.exit_code = kExitViolated;
  Json s;
  s["violated"] = violated;
  s["invariant_failures"] = failures;
  s["precision_exhausted"] = precision;
  s["budget_exceeded"] = budget;
  s["exit_code"] = b.exit_code;
  r["summary"] = s;
  return b;
}

bool write_bundle(const ReportBundle& bundle, const ExperimentConfig& config, std::string* error) {
  namespace fs = std::filesystem;
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };
  std::error_code ec;
  fs::path report(config.report_path);
  if (report.has_parent_path()) fs::create_directories(report.parent_path(), ec);
  std::ofstream out(report, std::ios::binary);
  if (!out) return fail("cannot write '" + config.report_path + "'");
  out << dump(bundle.report);
  if (config.csv_dir.empty()) return true;
  fs::create_directories(config.csv_dir, ec);
  if (ec) return fail("cannot create '" + config.csv_dir + "'");
  for (const auto& [name, text] : bundle.csv) {
    std::ofstream c(fs::path(config.csv_dir) / name, std::ios::binary);
    if (!c) return fail("cannot write '" + name + "'");
    c << text;
  }
  return true;
}

ExperimentConfig full_suite_config(std::uint64_t seed) {
  Json j = Json::parse(R"({
    "schema_version": 1,
    "workers": 4,
    "entries": [
      {"name": "cubic", "builtin": "cubic", "height": 1000, "tasks": [
        {"task": "ESTIMATE", "d": 0}, {"task": "ESTIMATE", "d": 1},
        {"task": "ESTIMATE-UNIFORM", "which": "omega_hat_0"}, {"task": "ESTIMATE-UNIFORM", "which": "omega_hat_top"},
        {"task": "VALIDATE", "source": "expected"}, {"task": "VALIDATE", "source": "estimated"},
        {"task": "WITNESS-UP", "d": 0, "uniform": true}, {"task": "WITNESS-DOWN", "d": 1, "uniform": true}]},
      {"name": "sqrt2", "builtin": "sqrt2", "height": 100000, "tasks": [
        {"task": "ESTIMATE", "d": 0}, {"task": "VALIDATE", "source": "expected"}]},
      {"name": "quartic", "builtin": "quartic", "height": 60, "tasks": [
        {"task": "ESTIMATE", "d": 0}, {"task": "VALIDATE", "source": "expected"}]},
      {"name": "liouville3", "builtin": "liouville3", "height": 134217728, "search_height": 1000, "tasks": [
        {"task": "TRUNCATION"}, {"task": "ESTIMATE", "d": 0}, {"task": "VALIDATE", "source": "estimated"}]}
    ],
    "tasks": [
      {"task": "SELFTEST-ALGEBRA"},
      {"task": "SELFTEST-MINIMA", "bodies": 100, "mahler_bodies": 12}
    ]
  })");
  j["seed"] = seed;
  return parse_config(j);
}

}  // namespace dioph
