#include "conflictkb/service.hpp"

#include <algorithm>
#include <initializer_list>

namespace conflictkb {

namespace {

void reject_unknown_keys(const Json& doc, std::initializer_list<std::string_view> allowed,
                         std::string_view what) {
  for (const auto& [key, _] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw FormatError(std::string(what) + ": unknown key \"" + key + "\"");
    }
  }
}

}  // namespace

Scenario scenario_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("scenario must be a JSON object");
  auto kb = doc.find("kb");
  if (kb == doc.end()) throw FormatError("scenario: missing \"kb\"");
  reject_unknown_keys(doc, {"kb", "leaves", "series", "epsilon"}, "scenario");
  Scenario s;
  s.kb = kb_from_json(*kb);
  if (doc.contains("leaves")) s.leaves = degrees_from_json(doc["leaves"]);
  if (doc.contains("series")) s.series = series_from_json(doc["series"]);
  if (doc.contains("epsilon")) {
    const Json& e = doc["epsilon"];
    if (!e.is_number() || e.get<double>() < 0.0) {
      throw FormatError("scenario: \"epsilon\" must be a non-negative number");
    }
    s.epsilon = e.get<double>();
  }
  return s;
}

Json scenario_to_json(const Scenario& s) {
  return {{"kb", kb_to_json(s.kb)},
          {"leaves", degrees_to_json(s.leaves)},
          {"series", series_to_json(s.series)},
          {"epsilon", s.epsilon}};
}

void check_scenario(const Scenario& s) {
  const Propagator propagator(s.kb);
  require_pattern_roles(s.kb);
  if (!(s.epsilon >= 0.0)) throw InputError("draw band must be non-negative");
  propagator.check_leaves(s.leaves);
  const auto grid = common_grid(s.series);
  for (std::size_t t = 0; t < grid.size(); ++t) {
    propagator.check_leaves(leaves_at(s.series, t, {}));
  }
}

std::optional<Semantics> parse_semantics(std::string_view text) noexcept {
  if (text == "logic") return Semantics::Logic;
  if (text == "weighted") return Semantics::Weighted;
  return std::nullopt;
}

EvaluationRequest request_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("evaluation request must be a JSON object");
  EvaluationRequest r;
  if (doc.contains("semantics")) {
    const Json& s = doc["semantics"];
    const auto sem = s.is_string() ? parse_semantics(s.get<std::string>()) : std::nullopt;
    if (!sem) throw FormatError("\"semantics\" must be \"logic\" or \"weighted\"");
    r.semantics = *sem;
  }
  const char* key = r.semantics == Semantics::Logic ? "state" : "leaves";
  reject_unknown_keys(doc, {"semantics", key, "timestamp", "epsilon"}, "evaluation request");
  if (doc.contains(key)) {
    if (!doc[key].is_object()) throw FormatError(std::string("\"") + key + "\" must be an object");
    r.values = doc[key];
  }
  if (doc.contains("timestamp") && !doc["timestamp"].is_null()) {
    const Json& t = doc["timestamp"];
    const auto date = t.is_string() ? Date::parse(t.get<std::string>()) : std::nullopt;
    if (!date) throw FormatError("\"timestamp\" must be a YYYY-MM-DD date");
    r.timestamp = date;
  }
  if (doc.contains("epsilon")) {
    const Json& e = doc["epsilon"];
    if (!e.is_number() || e.get<double>() < 0.0) {
      throw FormatError("\"epsilon\" must be a non-negative number");
    }
    r.epsilon = e.get<double>();
  }
  return r;
}

namespace {

DegreeAssignment scenario_leaves(const Scenario& s, const std::optional<Date>& timestamp) {
  if (!timestamp) return s.leaves;
  const auto grid = common_grid(s.series);
  auto it = std::find(grid.begin(), grid.end(), *timestamp);
  if (it == grid.end()) {
    throw InputError("timestamp " + timestamp->to_string() + " is not on the series grid");
  }
  return leaves_at(s.series, static_cast<std::size_t>(it - grid.begin()), s.leaves);
}

Json evaluate_logic(const Scenario* scenario, const EvaluationRequest& request) {
  ReflexiveState state;
  if (scenario != nullptr) {
    for (const auto& [id, value] : scenario_leaves(*scenario, request.timestamp)) {
      if (auto field = find_reflexive_variable(id)) {
        try {
          state.**field = Grade(value);
        } catch (const std::domain_error& e) {
          throw InputError("leaf '" + id + "': " + e.what());
        }
      }
    }
  }
  overlay_state(state, request.values);
  Json out{{"semantics", "logic"},
           {"state", state_to_json(state)},
           {"outcome", outcome_to_json(evaluate_conflict_logic(state))}};
  if (request.timestamp) out["timestamp"] = request.timestamp->to_string();
  return out;
}

Json evaluate_weighted(const Scenario* scenario, const EvaluationRequest& request) {
  if (scenario == nullptr) throw NoScenarioError();
  DegreeAssignment leaves = scenario_leaves(*scenario, request.timestamp);
  for (const auto& [id, value] : degrees_from_json(request.values)) {
    leaves.insert_or_assign(id, value);
  }
  const double epsilon = request.epsilon.value_or(scenario->epsilon);
  const Propagator propagator(scenario->kb);
  const auto degrees = propagator.run(leaves);
  Json violations = Json::array();
  for (const auto& v : check_compatibility(scenario->kb, degrees)) {
    violations.push_back({{"group", v.group}, {"active", v.active_members}});
  }
  Json out{{"semantics", "weighted"},
           {"result", result_to_json(conflict_result(scenario->kb, degrees, epsilon))},
           {"degrees", degrees_to_json(degrees)},
           {"epsilon", epsilon},
           {"violations", violations}};
  if (request.timestamp) out["timestamp"] = request.timestamp->to_string();
  return out;
}

std::optional<std::pair<std::string, std::string>> parse_edge_key(std::string_view key) {
  const auto pos = key.find("->");
  if (pos == std::string_view::npos || pos == 0 || pos + 2 == key.size()) return std::nullopt;
  return std::pair{std::string(key.substr(0, pos)), std::string(key.substr(pos + 2))};
}

}  // namespace

Json evaluate_request(const Scenario* scenario, const EvaluationRequest& request) {
  return request.semantics == Semantics::Logic ? evaluate_logic(scenario, request)
                                               : evaluate_weighted(scenario, request);
}

Json evaluate_whatif(const Scenario* scenario, const EvaluationRequest& baseline,
                     const Json& overrides) {
  if (!overrides.is_object()) throw FormatError("\"overrides\" must be an object");
  EvaluationRequest adjusted = baseline;

  if (baseline.semantics == Semantics::Logic) {
    for (const auto& [key, value] : overrides.items()) {
      if (!find_reflexive_variable(key)) throw FormatError("unknown override key '" + key + "'");
      adjusted.values[key] = value;
    }
    const Json base = evaluate_request(scenario, baseline);
    const Json adj = evaluate_request(scenario, adjusted);
    Json delta = Json::object();
    for (const char* k : {"A", "A1", "B", "B1"}) {
      delta[k] = adj["outcome"][k].get<double>() - base["outcome"][k].get<double>();
    }
    return {{"baseline", base}, {"adjusted", adj}, {"delta", delta}};
  }

  if (scenario == nullptr) throw NoScenarioError();
  Scenario modified = *scenario;
  for (const auto& [key, value] : overrides.items()) {
    if (!value.is_number()) throw FormatError("override '" + key + "' must be a number");
    if (auto edge = parse_edge_key(key)) {
      auto it = std::find_if(modified.kb.edges.begin(), modified.kb.edges.end(),
                             [&](const InfluenceEdge& e) {
                               return e.child == edge->first && e.parent == edge->second;
                             });
      if (it == modified.kb.edges.end()) throw FormatError("unknown override key '" + key + "'");
      it->weight = value.get<double>();
      continue;
    }
    const GoalNode* node = scenario->kb.find_node(key);
    if (node == nullptr || node->kind != NodeKind::Leaf) {
      throw FormatError("unknown override key '" + key + "'");
    }
    adjusted.values[key] = value;
  }
  const Json base = evaluate_request(scenario, baseline);
  const Json adj = evaluate_request(&modified, adjusted);
  const double delta_g =
      adj["result"]["g"].get<double>() - base["result"]["g"].get<double>();
  return {{"baseline", base}, {"adjusted", adj}, {"delta", {{"g", delta_g}}}, {"delta_g", delta_g}};
}

Json evaluate_series(const Scenario& scenario) {
  const Propagator propagator(scenario.kb);
  const auto grid = common_grid(scenario.series);
  Json out{{"timestamps", Json::array()}, {"g", Json::array()},
           {"goal_a", Json::array()},     {"goal_b", Json::array()},
           {"self_esteem_a", Json::array()}, {"self_esteem_b", Json::array()},
           {"winner", Json::array()}};
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const auto degrees = propagator.run(leaves_at(scenario.series, t, scenario.leaves));
    const auto r = conflict_result(scenario.kb, degrees, scenario.epsilon);
    out["timestamps"].push_back(grid[t].to_string());
    out["g"].push_back(r.g_degree);
    out["goal_a"].push_back(r.goal_a_degree);
    out["goal_b"].push_back(r.goal_b_degree);
    out["self_esteem_a"].push_back(r.self_esteem_a_degree);
    out["self_esteem_b"].push_back(r.self_esteem_b_degree);
    out["winner"].push_back(std::string(to_string(r.winner)));
  }
  return out;
}

// --- Service -----------------------------------------------------------------

namespace {

Json findings_json(const ValidationReport& report) {
  Json arr = Json::array();
  for (const auto& f : report.findings) {
    arr.push_back({{"kind", std::string(to_string(f.kind))},
                   {"nodes", f.nodes},
                   {"message", f.message}});
  }
  return arr;
}

Service::Reply error_reply(int status, const std::string& message, Json extra = Json::object()) {
  extra["error"] = message;
  return {status, extra.dump()};
}

// Maps library exceptions onto HTTP statuses. @p invalid_status is used for
// documents that parse but fail validation.
template <class Fn>
Service::Reply guarded(Fn&& fn, int invalid_status = 400) {
  try {
    return {200, fn().dump()};
  } catch (const NoScenarioError& e) {
    return error_reply(409, e.what());
  } catch (const Json::exception& e) {
    return error_reply(400, std::string("malformed JSON: ") + e.what());
  } catch (const FormatError& e) {
    return error_reply(400, e.what());
  } catch (const ParseError& e) {
    return error_reply(400, e.what(), {{"line", e.line()}});
  } catch (const GraphError& e) {
    return error_reply(invalid_status, e.what(), {{"findings", findings_json(e.report())}});
  } catch (const PatternError& e) {
    return error_reply(invalid_status, e.what());
  } catch (const std::invalid_argument& e) {
    return error_reply(invalid_status, e.what());
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
}

Json parse_body(std::string_view body) { return Json::parse(body); }

}  // namespace

Service::Service(Scenario scenario) { replace(std::move(scenario)); }

std::shared_ptr<const Scenario> Service::snapshot() const {
  std::lock_guard lock(read_mutex_);
  return scenario_;
}

void Service::replace(Scenario scenario) {
  check_scenario(scenario);
  auto next = std::make_shared<const Scenario>(std::move(scenario));
  std::lock_guard lock(read_mutex_);
  scenario_.swap(next);
}

Service::Reply Service::get_kb() const {
  return guarded([&] {
    auto s = snapshot();
    if (!s) throw NoScenarioError();
    return kb_to_json(s->kb);
  });
}

Service::Reply Service::put_kb(std::string_view body) {
  std::lock_guard writer(write_mutex_);
  return guarded(
      [&] {
        const Json doc = parse_body(body);
        Scenario next;
        if (doc.is_object() && doc.contains("kb")) {
          next = scenario_from_json(doc);
        } else {
          if (auto current = snapshot()) next = *current;
          next.kb = kb_from_json(doc);
        }
        replace(std::move(next));
        return kb_to_json(snapshot()->kb);
      },
      422);
}

Service::Reply Service::evaluate(std::string_view body) const {
  return guarded([&] {
    const auto request = request_from_json(parse_body(body));
    auto s = snapshot();
    return evaluate_request(s.get(), request);
  });
}

Service::Reply Service::whatif(std::string_view body) const {
  return guarded([&] {
    const Json doc = parse_body(body);
    if (!doc.is_object()) throw FormatError("what-if request must be a JSON object");
    reject_unknown_keys(doc, {"baseline", "overrides"}, "what-if request");
    const auto baseline = request_from_json(doc.value("baseline", Json::object()));
    auto s = snapshot();
    return evaluate_whatif(s.get(), baseline, doc.value("overrides", Json::object()));
  });
}

Service::Reply Service::get_series() const {
  return guarded([&] {
    auto s = snapshot();
    if (!s) throw NoScenarioError();
    return series_to_json(s->series);
  });
}

Service::Reply Service::post_series(std::string_view body) {
  std::lock_guard writer(write_mutex_);
  return guarded(
      [&] {
        const Json doc = parse_body(body);
        auto current = snapshot();
        if (!current) throw NoScenarioError();
        Scenario next = *current;
        Json warnings = Json::array();
        if (doc.is_object() && doc.contains("csv")) {
          if (!doc["csv"].is_string()) throw FormatError("\"csv\" must be a string");
          const auto topics = parse_topic_series(doc["csv"].get<std::string>());
          const auto bindings = bindings_from_json(doc.value("bindings", Json::array()));
          auto bound = bind_series_to_leaves(next.kb, bindings, topics);
          next.series = std::move(bound.leaves);
          for (auto& w : bound.warnings) warnings.push_back(std::move(w));
        } else {
          next.series = series_from_json(doc);
        }
        replace(std::move(next));
        return Json{{"series", series_to_json(snapshot()->series)}, {"warnings", warnings}};
      },
      422);
}

Service::Reply Service::evaluate_series() const {
  return guarded([&] {
    auto s = snapshot();
    if (!s) throw NoScenarioError();
    return conflictkb::evaluate_series(*s);
  });
}

}  // namespace conflictkb
