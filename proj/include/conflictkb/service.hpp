#pragma once

/// @file
/// Scenario evaluation shared by the CLI and the HTTP service.
///
/// A scenario is a knowledge base plus constant leaf degrees, optional leaf
/// series and a draw band. Requests evaluate it either with the reflexive
/// formulas ("logic") or by propagation through the goal graph
/// ("weighted"). All numbers in responses come straight from the library.

#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "conflictkb/json_io.hpp"

namespace conflictkb {

struct Scenario {
  GoalGraph kb;
  DegreeAssignment leaves;
  SeriesMap series;
  double epsilon = kDefaultDrawBand;
};

/// {"kb": {...}, "leaves": {...}, "series": {...}, "epsilon": x}; only "kb"
/// is required. @throws FormatError
[[nodiscard]] Scenario scenario_from_json(const Json& doc);
[[nodiscard]] Json scenario_to_json(const Scenario& s);

/// Checks that the scenario can be evaluated: the graph carries the pattern
/// and every leaf value or series fits it on one timestamp grid.
/// @throws GraphError, PatternError, InputError
void check_scenario(const Scenario& s);

enum class Semantics { Logic, Weighted };

[[nodiscard]] std::optional<Semantics> parse_semantics(std::string_view text) noexcept;

struct EvaluationRequest {
  Semantics semantics = Semantics::Weighted;
  /// Flat name -> value map laid over the scenario: reflexive variables for
  /// logic, leaf degrees for weighted.
  Json values = Json::object();
  /// Read series-bound leaves at this date.
  std::optional<Date> timestamp;
  std::optional<double> epsilon;
};

/// {"semantics": "logic"|"weighted", "state"|"leaves": {...},
///  "timestamp": "YYYY-MM-DD", "epsilon": x}. @throws FormatError
[[nodiscard]] EvaluationRequest request_from_json(const Json& doc);

/// No scenario is loaded but the request needs one.
class NoScenarioError : public std::runtime_error {
 public:
  NoScenarioError() : std::runtime_error("no scenario loaded") {}
};

/// Evaluates @p request against @p scenario (may be null for logic
/// requests). Logic: the state is the scenario's reflexive leaves overlaid
/// with the request values. Weighted: leaves are the scenario constants,
/// then series values at the timestamp, then the request values.
/// @throws NoScenarioError, FormatError, InputError, GraphError, PatternError
[[nodiscard]] Json evaluate_request(const Scenario* scenario, const EvaluationRequest& request);

/// Evaluates the baseline and the baseline with @p overrides applied.
/// Weighted overrides name leaves, or edges as "child->parent" to replace a
/// weight. Logic overrides name reflexive variables.
/// Returns {"baseline", "adjusted", "delta"} plus "delta_g" when weighted.
/// @throws FormatError for unknown override keys, plus evaluate_request's.
[[nodiscard]] Json evaluate_whatif(const Scenario* scenario, const EvaluationRequest& baseline,
                                   const Json& overrides);

/// Per-timestamp main-goal and subject degrees over the scenario's series:
/// {"timestamps", "g", "goal_a", "goal_b", "self_esteem_a",
///  "self_esteem_b", "winner"}.
[[nodiscard]] Json evaluate_series(const Scenario& scenario);

/// Request handlers behind the HTTP endpoints. The scenario is held as an
/// immutable snapshot; writers build a new scenario and swap it in, so every
/// request observes exactly one scenario version.
class Service {
 public:
  struct Reply {
    int status = 200;
    std::string body;
  };

  Service() = default;
  /// @throws as check_scenario().
  explicit Service(Scenario scenario);

  [[nodiscard]] std::shared_ptr<const Scenario> snapshot() const;
  /// @throws as check_scenario().
  void replace(Scenario scenario);

  [[nodiscard]] Reply get_kb() const;
  /// Body is a scenario document (has "kb") or a bare KB document. A bare
  /// KB keeps everything else from the current scenario.
  Reply put_kb(std::string_view body);
  [[nodiscard]] Reply evaluate(std::string_view body) const;
  /// Body: {"baseline": request, "overrides": {name: value}}.
  [[nodiscard]] Reply whatif(std::string_view body) const;
  [[nodiscard]] Reply get_series() const;
  /// Body is a series document, or {"csv": text, "bindings": [...]} to
  /// ingest topic counts against the current KB.
  Reply post_series(std::string_view body);
  [[nodiscard]] Reply evaluate_series() const;

 private:
  mutable std::mutex read_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const Scenario> scenario_;
};

}  // namespace conflictkb
