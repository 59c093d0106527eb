#include "conflictkb/cli.hpp"

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <vector>

#include <CLI11.hpp>

#include "conflictkb/http_server.hpp"
#include "conflictkb/json_io.hpp"
#include "conflictkb/service.hpp"

namespace conflictkb {

namespace {

std::string number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

GoalGraph load_kb(const std::string& path) { return kb_from_json(read_json_file(path)); }

void emit(std::ostream& out, const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    write_text_file(*path, text);
  } else {
    out << text;
  }
}

void print_findings(std::ostream& os, const ValidationReport& report) {
  for (const auto& f : report.findings) {
    os << to_string(f.kind) << ": " << f.message;
    if (!f.nodes.empty()) {
      os << " [";
      for (std::size_t i = 0; i < f.nodes.size(); ++i) os << (i ? " " : "") << f.nodes[i];
      os << "]";
    }
    os << "\n";
  }
}

int cmd_validate(const std::string& kb_path, std::ostream& out) {
  const GoalGraph kb = load_kb(kb_path);
  const auto report = validate(kb);
  if (!report.valid()) {
    print_findings(out, report);
    return kExitInvalid;
  }
  out << "valid: " << kb.nodes.size() << " nodes, " << kb.edges.size() << " edges, "
      << kb.groups.size() << " groups\n";
  return kExitOk;
}

void print_result_text(std::ostream& out, const Json& response) {
  if (response["semantics"] == "logic") {
    const Json& o = response["outcome"];
    for (const char* k : {"A", "A1", "B", "B1"}) out << k << "=" << number(o[k].get<double>()) << "\n";
    return;
  }
  const Json& r = response["result"];
  for (const char* k : {"g", "goal_a", "goal_b", "self_esteem_a", "self_esteem_b"}) {
    out << k << "=" << number(r[k].get<double>()) << "\n";
  }
  out << "winner=" << r["winner"].get<std::string>() << "\n";
  for (const auto& v : response["violations"]) {
    out << "warning: compatibility group #" << v["group"].get<std::size_t>()
        << " has several active members\n";
  }
}

void print_series_text(std::ostream& out, const Json& series) {
  out << "date,g,goal_a,goal_b,self_esteem_a,self_esteem_b,winner\n";
  for (std::size_t t = 0; t < series["timestamps"].size(); ++t) {
    out << series["timestamps"][t].get<std::string>();
    for (const char* k : {"g", "goal_a", "goal_b", "self_esteem_a", "self_esteem_b"}) {
      out << "," << number(series[k][t].get<double>());
    }
    out << "," << series["winner"][t].get<std::string>() << "\n";
  }
}

struct EvalOptions {
  std::string kb;
  std::string leaves;
  std::string semantics = "weighted";
  std::optional<double> epsilon;
  std::optional<std::string> series;
  std::optional<std::string> at;
  bool json = false;
};

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  const auto semantics = parse_semantics(opt.semantics);
  if (!semantics) {
    err << "--semantics must be logic or weighted\n";
    return kExitUsage;
  }
  std::optional<Date> at;
  if (opt.at) {
    at = Date::parse(*opt.at);
    if (!at) {
      err << "--at must be a YYYY-MM-DD date\n";
      return kExitUsage;
    }
    if (!opt.series) {
      err << "--at requires --series\n";
      return kExitUsage;
    }
  }

  Scenario scenario;
  scenario.kb = load_kb(opt.kb);
  const Json leaves = read_json_file(opt.leaves);
  if (opt.series) scenario.series = series_from_json(read_json_file(*opt.series));
  if (opt.epsilon) scenario.epsilon = *opt.epsilon;

  EvaluationRequest request;
  request.semantics = *semantics;
  request.timestamp = at;
  if (*semantics == Semantics::Logic) {
    if (auto report = validate(scenario.kb); !report.valid()) throw GraphError(report);
    static_cast<void>(common_grid(scenario.series));  // rejects mismatched grids
    request.values = leaves;
  } else {
    scenario.leaves = degrees_from_json(leaves);
    check_scenario(scenario);
  }

  Json response;
  if (*semantics == Semantics::Weighted && opt.series && !at) {
    response = evaluate_series(scenario);
    if (opt.json) {
      out << response.dump(2) << "\n";
    } else {
      print_series_text(out, response);
    }
    return kExitOk;
  }
  response = evaluate_request(&scenario, request);
  if (opt.json) {
    out << response.dump(2) << "\n";
  } else {
    print_result_text(out, response);
  }
  return kExitOk;
}

int cmd_truth_table(const std::string& side_name, bool json, std::ostream& out) {
  const Side side = side_name == "A" ? Side::A : Side::B;
  const auto names = side_variables(side);
  const auto rows = enumerate_truth_table(side);
  const std::string self = side == Side::A ? "A1" : "B1";
  const std::string ready = side == Side::A ? "A" : "B";
  std::size_t ready_count = 0;
  bool agree = true;
  for (const auto& r : rows) {
    ready_count += r.logic.readiness == Grade::one();
    agree = agree && r.logic == r.dnf;
  }
  if (json) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json a = Json::object();
      for (std::size_t i = 0; i < names.size(); ++i) a[std::string(names[i])] = r.assignment[i].value();
      arr.push_back({{"assignment", a},
                     {"logic", {{ready, r.logic.readiness.value()}, {self, r.logic.self_esteem.value()}}},
                     {"dnf", {{ready, r.dnf.readiness.value()}, {self, r.dnf.self_esteem.value()}}}});
    }
    out << Json{{"side", side_name}, {"rows", arr}, {"readiness_true", ready_count},
                {"forms_agree", agree}}.dump(2)
        << "\n";
    return kExitOk;
  }
  for (auto n : names) out << n << " ";
  out << "| " << self << " " << ready << " | " << self << "_dnf " << ready << "_dnf\n";
  for (const auto& r : rows) {
    for (const auto& g : r.assignment) out << number(g.value()) << "  ";
    out << "| " << number(r.logic.self_esteem.value()) << "  " << number(r.logic.readiness.value())
        << " | " << number(r.dnf.self_esteem.value()) << "      " << number(r.dnf.readiness.value())
        << "\n";
  }
  out << "rows=" << rows.size() << " " << ready << "_true=" << ready_count
      << " forms_agree=" << (agree ? "yes" : "no") << "\n";
  return kExitOk;
}

int cmd_ingest(const std::string& csv_path, const std::string& bindings_path,
               const std::optional<std::string>& kb_path, const std::optional<std::string>& output,
               std::ostream& out, std::ostream& err) {
  const auto topics = parse_topic_series(read_text_file(csv_path));
  const auto bindings = bindings_from_json(read_json_file(bindings_path));
  const BoundSeries bound = kb_path ? bind_series_to_leaves(load_kb(*kb_path), bindings, topics)
                                    : bind_series(bindings, topics);
  for (const auto& w : bound.warnings) err << "warning: " << w << "\n";
  static_cast<void>(common_grid(bound.leaves));  // rejects mismatched grids
  emit(out, output, series_to_json(bound.leaves).dump(2) + "\n");
  return kExitOk;
}

int cmd_aggregate(const std::string& estimates_path, const std::optional<std::string>& kb_path,
                  const std::optional<std::string>& output, std::ostream& out) {
  const auto estimates = estimates_from_json(read_json_file(estimates_path));
  const auto edges = aggregate_by_edge(estimates);
  if (!kb_path) {
    Json arr = Json::array();
    for (const auto& e : edges) {
      arr.push_back({{"child", e.child}, {"parent", e.parent}, {"weight", e.weight},
                     {"estimates", e.estimate_count}});
    }
    emit(out, output, arr.dump(2) + "\n");
    return kExitOk;
  }
  const GoalGraph kb = apply_edge_weights(load_kb(*kb_path), edges);
  auto report = validate(kb);
  if (!report.valid()) throw GraphError(std::move(report));
  emit(out, output, canonical_kb_document(kb));
  return kExitOk;
}

int cmd_serve(int port, const std::string& host, const std::optional<std::string>& scenario_path,
              std::ostream& out, std::ostream& err) {
  Service service;
  if (scenario_path) service.replace(scenario_from_json(read_json_file(*scenario_path)));
  HttpServer server(service);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    err << "cannot bind " << host << ":" << port << "\n";
    return kExitInvalid;
  }
  out << "listening on http://" << host << ":" << bound << "\n" << std::flush;
  return server.listen_after_bind() ? kExitOk : kExitInvalid;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-subject reflexive conflict knowledge base engine", "conflictkb"};
  app.require_subcommand(1);

  std::string kb_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a knowledge base document");
  validate_cmd->add_option("kb", kb_path, "KB document")->required();

  std::string subject_a;
  std::string subject_b;
  std::optional<std::string> output;
  auto* pattern_cmd = app.add_subcommand("pattern", "Emit the two-subject conflict pattern");
  pattern_cmd->add_option("--subject-a", subject_a, "Name of subject A")->required();
  pattern_cmd->add_option("--subject-b", subject_b, "Name of subject B")->required();
  pattern_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  std::string additions_path;
  auto* extend_cmd = app.add_subcommand("extend", "Complement a pattern KB with more goals");
  extend_cmd->add_option("kb", kb_path, "Pattern KB document")->required();
  extend_cmd->add_option("additions", additions_path, "Nodes/edges/groups to add")->required();
  extend_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a scenario");
  eval_cmd->add_option("kb", eval.kb, "KB document")->required();
  eval_cmd->add_option("--leaves", eval.leaves, "Flat name->value JSON")->required();
  eval_cmd->add_option("--semantics", eval.semantics, "logic or weighted")
      ->check(CLI::IsMember({"logic", "weighted"}));
  eval_cmd->add_option("--epsilon", eval.epsilon, "Draw band")->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--series", eval.series, "Leaf series JSON (from ingest)");
  eval_cmd->add_option("--at", eval.at, "Evaluate the series at one date");
  eval_cmd->add_flag("--json", eval.json, "JSON output");

  std::string side = "A";
  bool table_json = false;
  auto* table_cmd = app.add_subcommand("truth-table", "Enumerate one side's crisp assignments");
  table_cmd->add_option("--side", side, "A or B")->check(CLI::IsMember({"A", "B"}));
  table_cmd->add_flag("--json", table_json, "JSON output");

  std::string csv_path;
  std::string bindings_path;
  std::optional<std::string> opt_kb;
  auto* ingest_cmd = app.add_subcommand("ingest", "Turn topic counts into leaf series");
  ingest_cmd->add_option("csv", csv_path, "date,topic,count CSV")->required();
  ingest_cmd->add_option("--bindings", bindings_path, "Topic-to-leaf bindings JSON")->required();
  ingest_cmd->add_option("--kb", opt_kb, "KB to check bound leaves against");
  ingest_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  std::string estimates_path;
  auto* aggregate_cmd = app.add_subcommand("aggregate", "Aggregate expert edge estimates");
  aggregate_cmd->add_option("estimates", estimates_path, "Estimates JSON array")->required();
  aggregate_cmd->add_option("--kb", opt_kb, "Apply the weights to this KB");
  aggregate_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  int port = 8080;
  std::string host = "127.0.0.1";
  std::optional<std::string> scenario_path;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve_cmd->add_option("--port", port, "TCP port (0 picks one)")->required()->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--scenario", scenario_path, "Scenario document to load");
  serve_cmd->add_option("--host", host, "Bind address");

  std::vector<std::string> storage{"conflictkb"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(kb_path, out);
    if (pattern_cmd->parsed()) {
      const GoalGraph kb = build_pattern({subject_a}, {subject_b});
      emit(out, output, canonical_kb_document(kb));
      return kExitOk;
    }
    if (extend_cmd->parsed()) {
      const GoalGraph kb = extend_pattern(load_kb(kb_path),
                                          additions_from_json(read_json_file(additions_path)));
      emit(out, output, canonical_kb_document(kb));
      return kExitOk;
    }
    if (eval_cmd->parsed()) return cmd_eval(eval, out, err);
    if (table_cmd->parsed()) return cmd_truth_table(side, table_json, out);
    if (ingest_cmd->parsed()) return cmd_ingest(csv_path, bindings_path, opt_kb, output, out, err);
    if (aggregate_cmd->parsed()) return cmd_aggregate(estimates_path, opt_kb, output, out);
    if (serve_cmd->parsed()) return cmd_serve(port, host, scenario_path, out, err);
  } catch (const GraphError& e) {
    err << "error: invalid knowledge base\n";
    print_findings(err, e.report());
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}

}  // namespace conflictkb
