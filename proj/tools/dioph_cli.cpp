#include <CLI11.hpp>

#include <iostream>

#include "dioph/errors.hpp"
#include "dioph/experiment.hpp"

using namespace dioph;

namespace {

struct Shortcut {
  std::string entry = "cubic";
  int d = 0;
  std::string height;
  std::string mode;
  int precision_cap = 0;
  std::uint64_t seed = 1;
  std::string out;
  bool timings = false;
};

void add_common(CLI::App* app, Shortcut& s, bool with_entry) {
  if (with_entry) {
    app->add_option("--entry", s.entry, "catalog entry (" + [] {
      std::string names;
      for (const auto& n : builtin_names()) names += (names.empty() ? "" : ", ") + n;
      return names;
    }() + ")");
    app->add_option("--height", s.height, "height limit, an integer or p/q");
    app->add_option("--mode", s.mode, "EXHAUSTIVE or REDUCED");
    app->add_option("--precision-cap", s.precision_cap, "working precision cap in bits");
  }
  app->add_option("--seed", s.seed, "seed for randomized inputs");
  app->add_option("--out", s.out, "report path (default: standard output)");
  app->add_flag("--timings", s.timings, "record wall-clock seconds per task");
}

Json entry_json(const Shortcut& s, Json tasks) {
  Json e;
  e["name"] = s.entry;
  e["builtin"] = s.entry;
  if (!s.height.empty()) e["height"] = s.height;
  if (!s.mode.empty()) e["mode"] = s.mode;
  if (s.precision_cap) e["precision_cap"] = s.precision_cap;
  e["tasks"] = std::move(tasks);
  return e;
}

Json base_config(const Shortcut& s) {
  Json c;
  c["schema_version"] = kSchemaVersion;
  c["seed"] = s.seed;
  c["timings"] = s.timings;
  return c;
}

int execute(ExperimentConfig config, const std::string& out) {
  ReportBundle b = run(config);
  if (out.empty() && config.report_path.empty()) {
    std::cout << dump(b.report);
  } else {
    if (!out.empty()) config.report_path = out;
    std::string err;
    if (!write_bundle(b, config, &err)) {
      std::cerr << "error: " << err << "\n";
      return kExitConfig;
    }
    const Json& s = b.report["summary"];
    std::cerr << "report: " << config.report_path << "  violated=" << s["violated"]
              << " invariant_failures=" << s["invariant_failures"] << " exit=" << b.exit_code << "\n";
  }
  return b.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diophantine exponent experiments over exterior powers"};
  app.require_subcommand(1);

  std::string config_path, run_out;
  int workers = 0;
  auto* run_cmd = app.add_subcommand("run", "run an experiment config");
  run_cmd->add_option("config", config_path, "JSON config file")->required();
  run_cmd->add_option("--out", run_out, "report path, overriding the config");
  run_cmd->add_option("--workers", workers, "worker threads, overriding the config");

  Shortcut st;
  bool full = false;
  auto* self_cmd = app.add_subcommand("selftest", "algebra and minima self-tests");
  add_common(self_cmd, st, false);
  self_cmd->add_flag("--full", full, "run the built-in suite over the whole catalog");

  Shortcut es;
  std::string uniform;
  auto* est_cmd = app.add_subcommand("estimate", "estimate omega_d or a uniform exponent");
  add_common(est_cmd, es, true);
  est_cmd->add_option("--d", es.d, "level d");
  est_cmd->add_option("--uniform", uniform, "omega_hat_0 or omega_hat_top instead of omega_d");

  Shortcut va;
  std::string source, vector_text;
  auto* val_cmd = app.add_subcommand("validate", "check the transfer inequalities on an exponent vector");
  add_common(val_cmd, va, true);
  val_cmd->add_option("--source", source, "expected, estimated or given");
  val_cmd->add_option("--vector", vector_text, "exponent vector as JSON, e.g. {\"omega\":{\"0\":\"1/10\"}}");

  Shortcut wi;
  std::string direction = "up";
  bool wuniform = false;
  auto* wit_cmd = app.add_subcommand("witness", "going-up or going-down witness constructions");
  add_common(wit_cmd, wi, true);
  wit_cmd->add_option("--d", wi.d, "level d of the input records");
  wit_cmd->add_option("--direction", direction, "up or down")->check(CLI::IsMember({"up", "down"}));
  wit_cmd->add_flag("--uniform", wuniform, "also run the uniform variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) {
      ExperimentConfig c = load_config(config_path);
      if (workers > 0) c.workers = workers;
      return execute(c, run_out);
    }
    if (*self_cmd) {
      ExperimentConfig c;
      if (full) {
        c = full_suite_config(st.seed);
        c.timings = st.timings;
      } else {
        Json j = base_config(st);
        j["tasks"] = Json::array({{{"task", "SELFTEST-ALGEBRA"}}, {{"task", "SELFTEST-MINIMA"}}});
        c = parse_config(j);
      }
      c.report_path.clear();
      return execute(c, st.out);
    }
    Json j;
    std::string out;
    if (*est_cmd) {
      Json task = uniform.empty() ? Json{{"task", "ESTIMATE"}, {"d", es.d}}
                                  : Json{{"task", "ESTIMATE-UNIFORM"}, {"which", uniform}};
      j = base_config(es);
      j["entries"] = Json::array({entry_json(es, Json::array({task}))});
      out = es.out;
    } else if (*val_cmd) {
      Json task{{"task", "VALIDATE"}};
      if (!source.empty()) task["source"] = source;
      if (!vector_text.empty()) {
        try {
          task["vector"] = Json::parse(vector_text);
        } catch (const Json::exception& e) {
          throw ConfigError(std::string("--vector: ") + e.what());
        }
      }
      j = base_config(va);
      j["entries"] = Json::array({entry_json(va, Json::array({task}))});
      out = va.out;
    } else {
      Json task{{"task", direction == "up" ? "WITNESS-UP" : "WITNESS-DOWN"}, {"d", wi.d}, {"uniform", wuniform}};
      j = base_config(wi);
      j["entries"] = Json::array({entry_json(wi, Json::array({task}))});
      out = wi.out;
    }
    ExperimentConfig c = parse_config(j);
    c.report_path.clear();
    return execute(c, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return kExitPrecision;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  }
}
