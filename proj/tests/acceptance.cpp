// One PASS/FAIL line per acceptance criterion. The exit status is nonzero when any
// criterion fails; the ctest registration states which lines must read PASS.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "dioph/catalog.hpp"
#include "dioph/experiment.hpp"
#include "dioph/selftest.hpp"
#include "dioph/transfer.hpp"
#include "dioph/witness.hpp"

using namespace dioph;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

Outcome algebra_laws() {
  AlgebraSelftest t = algebra_selftest(kSeed, 5);
  std::set<std::string> required{"gram determinant", "adjointness",          "contraction composition",
                                 "hodge involution", "hodge duality",        "alternation",
                                 "graded anticommutativity"};
  long checked = 0;
  for (const auto& l : t.laws) {
    checked += l.checked;
    if (l.checked > 0) required.erase(l.law);
  }
  bool ok = t.samples >= 1000 && t.all_passed() && required.empty();
  return {ok, std::to_string(t.samples) + " multivectors, " + std::to_string(checked) + " law instances, " +
                  std::to_string(required.size()) + " required laws unchecked"};
}

Outcome hodge_equivalence() {
  LawCount c = hodge_duality_selftest(kSeed, 200);
  return {c.checked >= 200 && c.passed == c.checked,
          std::to_string(c.passed) + "/" + std::to_string(c.checked) + " exact"};
}

struct MinimaRun {
  MinimaSelftest result;
  bool done = false;
};

MinimaRun& minima_run() {
  static MinimaRun r;
  if (!r.done) {
    r.result = minima_selftest(kSeed, 100, 12);
    r.done = true;
  }
  return r;
}

Outcome minkowski() {
  const auto& m = minima_run().result;
  bool ok = m.cases.size() >= 100 && m.passed == static_cast<long>(m.cases.size());
  return {ok, std::to_string(m.passed) + "/" + std::to_string(m.cases.size()) + " bodies certified"};
}

Outcome mahler() {
  const auto& rep = minima_run().result.mahler;
  bool ok = rep.instances.size() >= 20 && rep.kappa_observed <= 100;
  return {ok, std::to_string(rep.instances.size()) + " instances, kappa = " + fmt(rep.kappa_observed.get_d())};
}

Outcome dirichlet_floors() {
  CatalogEntry cubic = builtin_entry("cubic");
  BigRational H = 100000;
  auto w0 = estimate_omega(record_search_primal(cubic.theta, 0, H)).lower_bound.value();
  auto w1 = estimate_omega(record_search_primal(cubic.theta, 1, H)).lower_bound.value();
  auto grid = height_grid(H, 2);
  auto h0 = estimate_uniform(cubic.theta, false, grid).lower_bound.value();
  auto ht = estimate_uniform(cubic.theta, true, grid).lower_bound.value();
  bool ok = w0.lower() >= BigRational(35, 100) && w1.lower() >= BigRational(17, 10) &&
            h0.lower() >= BigRational(3, 10) && ht.lower() >= BigRational(18, 10);
  return {ok, "omega_0 " + fmt(w0.lower().get_d()) + ", omega_1 " + fmt(w1.lower().get_d()) + ", omega_hat_0 " +
                  fmt(h0.lower().get_d()) + ", omega_hat_1 " + fmt(ht.lower().get_d())};
}

Outcome transfer_identities() {
  std::mt19937_64 g(kSeed);
  int vectors = 500, good = 0;
  for (int i = 0; i < vectors; ++i) {
    int n = 2 + i % 4;
    ExponentVector e;
    e.n = n;
    e.provenance = Provenance::Asserted;
    for (int d = 0; d < n; ++d) e.omega[d] = BigRational(ratio(d + 1, n - d) + ratio(static_cast<long>(g() % 97), 13));
    e.omega_hat_0 = BigRational(ratio(1, n) + ratio(static_cast<long>(g() % 20), 20) * (1 - ratio(1, n)));
    e.omega_hat_top = BigRational(BigRational(n) + ratio(static_cast<long>(g() % 50), 7));
    auto [lo, hi] = level_chain_reproduces_khintchine(e);
    auto t = theorem1_from_parts(e);
    if (lo == Certificate::True && hi == Certificate::True && t.lower_chain.agrees == Certificate::True &&
        t.upper_chain.agrees == Certificate::True && t.forms_equivalent)
      ++good;
  }
  return {good == vectors, std::to_string(good) + "/" + std::to_string(vectors) + " vectors, n = 2..5"};
}

Outcome worked_instance() {
  BigRational half(1, 2);
  ExponentVector e;
  e.n = 2;
  e.omega[0] = half;
  e.omega[1] = BigRational(2);
  e.omega_hat_0 = half;
  e.omega_hat_top = BigRational(2);
  auto vs = check_all(e);
  int holds = 0;
  bool bounds = false;
  for (const auto& v : vs) {
    if (v.verdict == Verdict::Holds) ++holds;
    if (v.name == "khintchine-lower") bounds = v.lhs.is_finite() && v.lhs.value.is_exact() && v.lhs.value.lower() == half;
  }
  for (const auto& v : vs)
    if (v.name == "khintchine-upper")
      bounds = bounds && v.rhs.is_finite() && v.rhs.value.is_exact() && v.rhs.value.lower() == half;
  auto t = theorem1_from_parts(e);
  bool chains = t.lower_chain.agrees == Certificate::True && t.upper_chain.agrees == Certificate::True;
  return {holds == static_cast<int>(vs.size()) && bounds && chains,
          std::to_string(holds) + "/" + std::to_string(vs.size()) + " HOLDS, Khintchine bounds exactly 1/2"};
}

// Records with |X| >= 10: below that the implied constants dominate the exponents.
Outcome witnesses() {
  CatalogEntry cubic = builtin_entry("cubic");
  BigRational slack(1, 2);
  int up = 0, up_ok = 0, down = 0, down_ok = 0;
  bool finite = true;
  auto tally = [&](const TransferWitness& w, int& count, int& ok) {
    if (!w.achieved_exponent) return;
    ++count;
    if (w.achieved_exponent->lower() >= w.predicted_exponent.upper() - slack) ++ok;
    for (const auto& [k, v] : w.constants_log)
      if (!(v.upper() < BigRational(1000000))) finite = false;
  };
  for (const auto& r : record_search_primal(cubic.theta, 0, 1000).records)
    if (r.norm_sq >= 100) tally(going_up_witness(cubic.theta, r), up, up_ok);
  for (const auto& r : record_search_dual(cubic.theta, 1, 1000).records)
    if (r.norm_sq >= 100) tally(going_down_witness(cubic.theta, r), down, down_ok);
  bool ok = up > 0 && down > 0 && up == up_ok && down == down_ok && finite;
  return {ok, "up " + std::to_string(up_ok) + "/" + std::to_string(up) + ", down " + std::to_string(down_ok) + "/" +
                  std::to_string(down) + ", constants finite: " + (finite ? "yes" : "no")};
}

Outcome liouville() {
  Json cfg = Json::parse(R"({"entries": [{"name": "xi", "builtin": "liouville3", "height": 134217728,
      "search_height": 1000, "tasks": [{"task": "TRUNCATION"}, {"task": "ESTIMATE", "d": 0},
      {"task": "VALIDATE", "source": "estimated"}]}]})");
  ReportBundle b = run(parse_config(cfg));
  const Json& tasks = b.report["entries"][0]["tasks"];
  bool verified = true;
  int truncations = 0;
  for (const auto& w : tasks[0]["result"]["witnesses"]) {
    ++truncations;
    verified = verified && w["verified"].get<bool>();
  }
  const Json& est = tasks[1]["result"]["estimate"]["lower_bound"];
  BigRational lower = parse_rational(est["lower"].get<std::string>());
  int violated = 0;
  for (const auto& v : tasks[2]["result"]["verdicts"])
    if (v["verdict"] == "VIOLATED") ++violated;
  bool ok = truncations == 3 && verified && lower > 2 && violated == 0;
  return {ok, std::to_string(truncations) + " truncations verified: " + (verified ? "yes" : "no") +
                  ", estimate(omega_0) " + fmt(lower.get_d()) + " (needs > 2), VIOLATED " + std::to_string(violated)};
}

Outcome determinism() {
  ExperimentConfig c = full_suite_config(kSeed);
  ReportBundle a = run(c), b = run(c);
  std::string da = dump(a.report), db = dump(b.report);
  return {da == db && a.csv == b.csv && a.exit_code == kExitOk,
          std::to_string(da.size()) + " bytes, identical: " + (da == db ? "yes" : "no") +
              ", exit " + std::to_string(a.exit_code)};
}

}  // namespace

int main() {
  std::vector<std::function<Outcome()>> criteria{algebra_laws,    hodge_equivalence, minkowski, mahler,
                                                 dirichlet_floors, transfer_identities, worked_instance,
                                                 witnesses,        liouville,          determinism};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s  %s  [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
