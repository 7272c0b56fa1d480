#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crosshair/crosshair.hpp"

namespace crosshair::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kProtocolError = 3, kAttackInfeasible = 4 };

using Json = nlohmann::ordered_json;

// --config reader. Top-level keys are global flags; an object keyed by a
// subcommand name holds that subcommand's flags, nesting as deep as the
// subcommands do:
//   {"seed": 7, "experiment": {"tradeoff": {"trials": 5, "epsilons": [100, 10]}}}
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool, bool, std::string) const override {
    nlohmann::json j;
    for (const auto* opt : app->get_options()) {
      if (opt->get_lnames().empty() || opt->count() == 0) continue;
      const auto& res = opt->results();
      j[opt->get_lnames().front()] = res.size() == 1 ? nlohmann::json(res.front()) : nlohmann::json(res);
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const nlohmann::json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto sub = parents;
        sub.push_back(key);
        collect(value, sub, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

// Hooks for embedding `serve` (tests, main). The server stops once `stop`
// becomes true; `on_listening` receives the bound port.
struct ServeControl {
  const std::atomic<bool>* stop = nullptr;
  std::function<void(std::uint16_t)> on_listening;
};

struct GlobalArgs {
  std::uint64_t seed = 0;
  std::string format;
};

struct ServeArgs {
  std::string zoo;
  std::uint16_t port = 0;
  std::optional<double> epsilon;
  std::string mode = "experiment";
  bool all_interfaces = false;
};

struct GridArgs {
  double acc_g = 0.001;
  double lat_g = 1.0;
  double l_up = 32.0;

  GranularityConfig config() const {
    GranularityConfig g{acc_g, lat_g, l_up};
    g.validate();
    return g;
  }
};

struct FingerprintArgs {
  std::string endpoint;
  GridArgs grid;
  bool tight = false;
  std::string out;
};

struct AttackArgs {
  std::string endpoint;
  GridArgs grid;
  double latency_budget = 0.0;
  std::uint64_t query_budget = 4000;
  std::string mode = "fingerprint";
  std::string zoo;
  std::string out;
};

struct ComplexityArgs {
  std::vector<std::size_t> sizes{10, 50, 100, 250, 500, 1000};
  std::size_t trials = 10;
  ZooGenSpec zoo;
  std::string out;
};

struct TradeoffArgs {
  std::string zoo;
  std::vector<double> budgets{13.0};
  std::vector<double> epsilons{1000.0, 100.0, 50.0, 10.0};
  std::size_t trials = 30;
  std::uint64_t query_budget = 4000;
  std::string out;
};

namespace detail {

inline Json granularity_json(const GranularityConfig& g) {
  return Json{{"acc_g", g.acc_g}, {"lat_g", g.lat_g}, {"l_up_ms", g.l_up}};
}

inline Json rows_json(const FrontierEstimate& est) {
  Json rows = Json::array();
  for (const auto& r : est.rows) rows.push_back(Json{{"accuracy", r.accuracy}, {"latency_ms", r.latency_ms}});
  return rows;
}

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Writes to --out when given, else to `out`.
inline void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

inline void header_lines(std::ostream& os, const Json& config) {
  for (const auto& [k, v] : config.items()) os << "# " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline int cmd_serve(const GlobalArgs& global, const ServeArgs& args, std::ostream& out,
                     const ServeControl& control) {
  const auto doc = load_zoo(args.zoo);
  net::ServerOptions opts;
  opts.mode = args.mode == "service" ? net::ServeMode::Service : net::ServeMode::Experiment;
  opts.granularity = doc.granularity;
  opts.epsilon = args.epsilon;
  opts.seed = global.seed;
  opts.dataset_seed = global.seed;
  net::Server server(opts);
  for (const auto& m : doc.models) server.register_model(m);
  server.start();
  const std::uint16_t port = server.listen(args.port, !args.all_interfaces);

  const auto& router = server.router();
  Json startup{{"event", "listening"},
               {"port", port},
               {"mode", args.mode},
               {"seed", global.seed},
               {"frontier_size", router.frontier().size()},
               {"granularity", detail::granularity_json(doc.granularity)}};
  if (args.epsilon) {
    const auto& d = router.defense();
    startup["defense"] = Json{{"epsilon", d.epsilon}, {"delta_acc", d.delta_acc}, {"delta_lat", d.delta_lat}};
  } else {
    startup["defense"] = nullptr;
  }
  out << startup.dump() << "\n";
  out.flush();

  server.start_background();
  if (control.on_listening) control.on_listening(port);
  while (!(control.stop && control.stop->load())) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  server.stop();
  return kOk;
}

inline int cmd_fingerprint(const GlobalArgs& global, const FingerprintArgs& args, std::ostream& out) {
  const auto g = args.grid.config();
  const auto [host, port] = net::parse_endpoint(args.endpoint);
  net::WireClient client(host, port, g);
  const auto t0 = std::chrono::steady_clock::now();
  const auto est = fingerprint(client, g, FingerprintOptions{args.tight, 0});
  const double wall = detail::elapsed_ms(t0);

  Json config{{"command", "fingerprint"},
              {"endpoint", args.endpoint},
              {"granularity", detail::granularity_json(g)},
              {"tight_latency_bound", args.tight},
              {"seed", global.seed}};
  std::ostringstream os;
  if (global.format == "csv") {
    os << "# crosshair report=fingerprint schema=1\n";
    detail::header_lines(os, config);
    os << "# queries_spent=" << est.queries_spent << "\n# monotone=" << (est.monotone() ? "true" : "false") << "\n";
    os << "# wall_clock_ms=" << detail::fmt(wall) << "\n";
    os << "rank,accuracy,latency_ms\n";
    for (std::size_t i = 0; i < est.rows.size(); ++i) {
      os << i << ',' << detail::fmt(est.rows[i].accuracy) << ',' << detail::fmt(est.rows[i].latency_ms) << "\n";
    }
  } else {
    Json report{{"report", "fingerprint"},
                {"schema", 1},
                {"config", config},
                {"rows", detail::rows_json(est)},
                {"queries_spent", est.queries_spent},
                {"monotone", est.monotone()},
                {"granularity", detail::granularity_json(g)},
                {"wall_clock_ms", wall}};
    os << report.dump(2) << "\n";
  }
  detail::emit(args.out, out, os.str());
  return kOk;
}

inline int cmd_attack(const GlobalArgs& global, const AttackArgs& args, std::ostream& out) {
  const auto g = args.grid.config();
  const AttackBudget budget{args.latency_budget, args.query_budget};
  budget.validate();
  const auto mode = args.mode == "naive" ? CampaignMode::Naive : CampaignMode::Fingerprint;
  // The zoo only feeds the surrogate metrics; the attack itself never sees it.
  std::optional<ParetoFrontier> frontier;
  if (!args.zoo.empty()) {
    const auto doc = load_zoo(args.zoo);
    frontier = build_frontier(doc.models, doc.granularity);
  }

  const auto [host, port] = net::parse_endpoint(args.endpoint);
  net::WireClient client(host, port, g);
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = run_campaign(client, budget, g, mode);
  const double wall = detail::elapsed_ms(t0);

  const auto pmf = result.trigger_pmf();
  Json surrogates = nullptr;
  if (frontier && !pmf.empty()) {
    surrogates = Json::object();
    surrogates["expected_label_accuracy"] = expected_label_accuracy(pmf, *frontier);
    if (const auto v = true_victim(*frontier, args.latency_budget)) {
      const auto& victim = (*frontier)[*v];
      double agreement = 0.0;
      for (const auto& [id, p] : pmf) {
        const auto& m = (*frontier)[frontier->index_of(id)];
        agreement += p * expected_agreement(victim.accuracy, m.accuracy, victim.num_classes);
      }
      surrogates["victim_id"] = victim.id;
      surrogates["victim_pmf"] = pmf.contains(victim.id) ? pmf.at(victim.id) : 0.0;
      surrogates["expected_agreement"] = agreement;
    }
  }

  Json config{{"command", "attack"},
              {"endpoint", args.endpoint},
              {"mode", args.mode},
              {"latency_budget_ms", args.latency_budget},
              {"query_budget", args.query_budget},
              {"granularity", detail::granularity_json(g)},
              {"zoo", args.zoo},
              {"seed", global.seed}};
  std::ostringstream os;
  if (global.format == "csv") {
    os << "# crosshair report=attack schema=1\n";
    detail::header_lines(os, config);
    os << "metric,value\n";
    os << "q_fingerprint," << result.queries_fingerprinting << "\n";
    os << "q_label," << result.queries_labeling << "\n";
    os << "q_success," << result.queries_successful << "\n";
    os << "q_fail," << result.queries_failed << "\n";
    if (result.victim) {
      os << "victim_accuracy," << detail::fmt(result.victim->acc_spec) << "\n";
      os << "victim_latency_ms," << detail::fmt(result.victim->lat_spec) << "\n";
    }
    for (const auto& [id, p] : pmf) os << "pmf." << id << ',' << detail::fmt(p) << "\n";
    if (surrogates.is_object()) {
      for (const auto& [k, v] : surrogates.items()) {
        os << k << ',' << (v.is_string() ? v.get<std::string>() : detail::fmt(v.get<double>())) << "\n";
      }
    }
    os << "wall_clock_ms," << detail::fmt(wall) << "\n";
  } else {
    Json report{{"report", "attack"}, {"schema", 1}, {"config", config}};
    report["queries"] = Json{{"fingerprinting", result.queries_fingerprinting},
                             {"labeling", result.queries_labeling},
                             {"successful", result.queries_successful},
                             {"failed", result.queries_failed}};
    report["victim"] = result.victim ? Json{{"accuracy", result.victim->acc_spec}, {"latency_ms", result.victim->lat_spec}}
                                     : Json(nullptr);
    report["estimate"] = Json{{"rows", detail::rows_json(result.estimate)}, {"monotone", result.estimate.monotone()}};
    report["trigger_histogram"] = Json::object();
    for (const auto& [id, n] : result.trigger_histogram) report["trigger_histogram"][id] = n;
    report["trigger_pmf"] = Json::object();
    for (const auto& [id, p] : pmf) report["trigger_pmf"][id] = p;
    const auto gp = result.labeling_goodput();
    report["labeling_goodput"] = gp ? Json(*gp) : Json(nullptr);
    report["surrogates"] = surrogates;
    report["seeds"] = Json{{"seed", global.seed}};
    report["wall_clock_ms"] = wall;
    os << report.dump(2) << "\n";
  }
  detail::emit(args.out, out, os.str());
  return kOk;
}

inline int cmd_complexity(const GlobalArgs& global, const ComplexityArgs& args, std::ostream& out) {
  ComplexityConfig cfg;
  cfg.sizes = args.sizes;
  cfg.trials = args.trials;
  cfg.zoo = args.zoo;
  cfg.seed = global.seed;
  const auto report = complexity_experiment(cfg);

  const auto& z = args.zoo;
  std::ostringstream os;
  if (global.format == "json") {
    Json j{{"experiment", "complexity"}, {"schema", kCsvSchemaVersion}};
    j["config"] = Json{{"seed", global.seed},
                       {"trials", args.trials},
                       {"sizes", args.sizes},
                       {"acc_range", {z.acc_lo, z.acc_hi}},
                       {"lat_range", {z.lat_lo, z.lat_hi}},
                       {"granularity", detail::granularity_json(z.granularity)}};
    j["records"] = Json::array();
    for (const auto& r : report.records) {
      j["records"].push_back(Json{{"n", r.n}, {"trial", r.trial}, {"queries", r.queries}, {"acc_g", r.acc_g},
                                  {"lat_g", r.lat_g}, {"seed", r.seed}});
    }
    j["mean_queries"] = Json::object();
    for (const auto& [n, q] : report.mean_queries) j["mean_queries"][std::to_string(n)] = q;
    j["fit"] = Json{{"slope", report.fit.slope}, {"intercept", report.fit.intercept}, {"r2", report.fit.r2}};
    os << j.dump(2) << "\n";
  } else {
    std::string sizes;
    for (const auto n : args.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(n);
    write_complexity_csv(os, report,
                         {"seed=" + std::to_string(global.seed), "trials=" + std::to_string(args.trials),
                          "sizes=" + sizes, "acc_range=" + detail::fmt(z.acc_lo) + ":" + detail::fmt(z.acc_hi),
                          "lat_range=" + detail::fmt(z.lat_lo) + ":" + detail::fmt(z.lat_hi),
                          "acc_g=" + detail::fmt(z.granularity.acc_g), "lat_g=" + detail::fmt(z.granularity.lat_g),
                          "l_up_ms=" + detail::fmt(z.granularity.l_up)});
  }
  detail::emit(args.out, out, os.str());
  return kOk;
}

inline int cmd_tradeoff(const GlobalArgs& global, const TradeoffArgs& args, std::ostream& out) {
  TradeoffConfig cfg;
  if (!args.zoo.empty()) {
    const auto doc = load_zoo(args.zoo);
    cfg.zoo = doc.models;
    cfg.granularity = doc.granularity;
  }
  cfg.budgets = args.budgets;
  cfg.epsilons = args.epsilons;
  cfg.trials = args.trials;
  cfg.query_budget = args.query_budget;
  cfg.seed = global.seed;
  const auto records = tradeoff_experiment(cfg);

  std::ostringstream os;
  if (global.format == "json") {
    Json j{{"experiment", "tradeoff"}, {"schema", kCsvSchemaVersion}};
    j["config"] = Json{{"seed", global.seed},
                       {"zoo", args.zoo.empty() ? "reference" : args.zoo},
                       {"budgets", args.budgets},
                       {"epsilons", args.epsilons},
                       {"trials", args.trials},
                       {"query_budget", args.query_budget},
                       {"granularity", detail::granularity_json(cfg.granularity)}};
    j["records"] = Json::array();
    for (const auto& r : records) {
      j["records"].push_back(Json{{"L", r.latency_budget},
                                  {"epsilon", r.epsilon},
                                  {"trial", r.trial},
                                  {"goodput", r.goodput},
                                  {"victim_pmf", r.victim_pmf},
                                  {"expected_label_acc", r.expected_label_acc},
                                  {"q_fingerprint", r.q_fingerprint},
                                  {"q_label", r.q_label},
                                  {"q_success", r.q_success},
                                  {"q_fail", r.q_fail},
                                  {"seed", r.seed}});
    }
    os << j.dump(2) << "\n";
  } else {
    const auto join = [](const std::vector<double>& v) {
      std::string s;
      for (const auto x : v) s += (s.empty() ? "" : ",") + detail::fmt(x);
      return s;
    };
    write_tradeoff_csv(os, records,
                       {"seed=" + std::to_string(global.seed), "zoo=" + (args.zoo.empty() ? "reference" : args.zoo),
                        "budgets=" + join(args.budgets), "epsilons=" + join(args.epsilons),
                        "trials=" + std::to_string(args.trials), "query_budget=" + std::to_string(args.query_budget),
                        "acc_g=" + detail::fmt(cfg.granularity.acc_g), "lat_g=" + detail::fmt(cfg.granularity.lat_g),
                        "l_up_ms=" + detail::fmt(cfg.granularity.l_up)});
  }
  detail::emit(args.out, out, os.str());
  return kOk;
}

inline void add_grid_flags(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("--acc-g", g.acc_g, "Accuracy granularity")->capture_default_str();
  cmd->add_option("--lat-g", g.lat_g, "Latency granularity, ms")->capture_default_str();
  cmd->add_option("--l-up", g.l_up, "Latency upper bound, ms")->capture_default_str();
}

// Entry point shared by the binary and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
               const ServeControl& control = {}) {
  CLI::App app{"Model-less inference serving lab: frontier fingerprinting and its Laplace defense"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with flag values; command-line flags take precedence");

  GlobalArgs global;
  app.add_option("--seed", global.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--format", global.format, "Report format (json or csv)")->check(CLI::IsMember({"json", "csv"}));

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run an inference server over a zoo file");
  serve_cmd->add_option("--zoo", serve.zoo, "Zoo JSON file")->required();
  serve_cmd->add_option("--port", serve.port, "TCP port; 0 picks a free one")->capture_default_str();
  serve_cmd->add_option("--epsilon", serve.epsilon, "Enable the Laplace defense with this epsilon")
      ->check(CLI::PositiveNumber);
  serve_cmd->add_option("--mode", serve.mode, "service (real latency, no telemetry) or experiment")
      ->check(CLI::IsMember({"service", "experiment"}))
      ->capture_default_str();
  serve_cmd->add_flag("--all-interfaces", serve.all_interfaces, "Listen on all interfaces instead of loopback");

  FingerprintArgs fp;
  auto* fp_cmd = app.add_subcommand("fingerprint", "Recover a server's Pareto frontier");
  fp_cmd->add_option("--endpoint", fp.endpoint, "host:port")->required();
  add_grid_flags(fp_cmd, fp.grid);
  fp_cmd->add_flag("--tight-latency", fp.tight, "Bound each latency search by the previous row");
  fp_cmd->add_option("--out", fp.out, "Write the report here instead of stdout");

  AttackArgs atk;
  auto* atk_cmd = app.add_subcommand("attack", "Run a labeling campaign within a query budget");
  atk_cmd->add_option("--endpoint", atk.endpoint, "host:port")->required();
  atk_cmd->add_option("--latency-budget", atk.latency_budget, "Latency budget L, ms")->required();
  atk_cmd->add_option("--query-budget", atk.query_budget, "Total queries")->capture_default_str();
  atk_cmd->add_option("--mode", atk.mode, "fingerprint or naive")
      ->check(CLI::IsMember({"fingerprint", "naive"}))
      ->capture_default_str();
  atk_cmd->add_option("--zoo", atk.zoo, "Zoo file used only to score surrogate metrics");
  add_grid_flags(atk_cmd, atk.grid);
  atk_cmd->add_option("--out", atk.out, "Write the report here instead of stdout");

  auto* exp_cmd = app.add_subcommand("experiment", "Run an in-process experiment suite");
  exp_cmd->fallthrough();
  exp_cmd->require_subcommand(1);

  ComplexityArgs cx;
  auto* cx_cmd = exp_cmd->add_subcommand("complexity", "Fingerprinting query count versus frontier size");
  cx_cmd->add_option("--sizes", cx.sizes, "Frontier sizes")->delimiter(',');
  cx_cmd->add_option("--trials", cx.trials, "Zoos per size")->capture_default_str();
  cx_cmd->add_option("--acc-g", cx.zoo.granularity.acc_g, "Accuracy granularity")->capture_default_str();
  cx_cmd->add_option("--lat-g", cx.zoo.granularity.lat_g, "Latency granularity, ms")->capture_default_str();
  cx_cmd->add_option("--l-up", cx.zoo.granularity.l_up, "Latency upper bound, ms")->capture_default_str();
  cx_cmd->add_option("--acc-lo", cx.zoo.acc_lo, "Lowest generated accuracy")->capture_default_str();
  cx_cmd->add_option("--acc-hi", cx.zoo.acc_hi, "Highest generated accuracy")->capture_default_str();
  cx_cmd->add_option("--lat-lo", cx.zoo.lat_lo, "Lowest generated latency, ms")->capture_default_str();
  cx_cmd->add_option("--lat-hi", cx.zoo.lat_hi, "Highest generated latency, ms")->capture_default_str();
  cx_cmd->add_option("--out", cx.out, "Write output here instead of stdout");

  TradeoffArgs tr;
  auto* tr_cmd = exp_cmd->add_subcommand("tradeoff", "Goodput and extraction quality versus epsilon");
  tr_cmd->add_option("--zoo", tr.zoo, "Zoo file (default: built-in 12-model reference zoo)");
  tr_cmd->add_option("--budgets", tr.budgets, "Latency budgets L, ms")->delimiter(',');
  tr_cmd->add_option("--epsilons", tr.epsilons, "Defense epsilons")->delimiter(',');
  tr_cmd->add_option("--trials", tr.trials, "Campaigns per (L, epsilon)")->capture_default_str();
  tr_cmd->add_option("--query-budget", tr.query_budget, "Queries per campaign")->capture_default_str();
  tr_cmd->add_option("--out", tr.out, "Write output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    if (*serve_cmd) return cmd_serve(global, serve, out, control);
    if (*fp_cmd) return cmd_fingerprint(global, fp, out);
    if (*atk_cmd) return cmd_attack(global, atk, out);
    if (*cx_cmd) return cmd_complexity(global, cx, out);
    if (*tr_cmd) return cmd_tradeoff(global, tr, out);
  } catch (const NoFeasibleVictim& e) {
    err << "attack infeasible: " << e.what() << "\n";
    return kAttackInfeasible;
  } catch (const BudgetExhausted& e) {
    err << "attack infeasible: " << e.what() << "\n";
    return kAttackInfeasible;
  } catch (const GranularityViolation& e) {
    err << "granularity violation: " << e.what() << "\n";
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InfeasibleSpec& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const EmptyFrontier& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const TransportError& e) {
    err << "protocol error: " << e.what() << "\n";
    return kProtocolError;
  } catch (const MalformedMessage& e) {
    err << "protocol error: " << e.what() << "\n";
    return kProtocolError;
  } catch (const OutOfRange& e) {
    err << "protocol error: " << e.what() << "\n";
    return kProtocolError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kConfigError;
}

}  // namespace crosshair::cli
