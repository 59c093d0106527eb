#pragma once

/// @file
/// Knowledge base as a signed, weighted goal DAG.
///
/// Edges point from a child goal to the parent it influences. The weight is a
/// partial influence coefficient in [-1,1]\{0}; its sign is the polarity of
/// the influence. An internal goal's achievement degree is the sign-weighted
/// mean of its children normalized by the sum of absolute weights:
///
///     d(parent) = sum_i w_i * d(child_i) / sum_i |w_i|
///
/// so degrees stay inside [-1,1] without clamping.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conflictkb/date.hpp"

namespace conflictkb {

enum class NodeKind { Leaf, Internal };

/// Tag marking a node's place in the conflict design pattern.
enum class NodeRole { None, Main, SubjectGoal, SelfEsteem, ReflexiveLeaf, Custom };

[[nodiscard]] std::string_view to_string(NodeKind kind) noexcept;
[[nodiscard]] std::string_view to_string(NodeRole role) noexcept;
[[nodiscard]] std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept;
[[nodiscard]] std::optional<NodeRole> parse_node_role(std::string_view text) noexcept;

struct GoalNode {
  std::string id;
  std::string label;
  NodeKind kind = NodeKind::Leaf;
  NodeRole role = NodeRole::None;

  friend bool operator==(const GoalNode&, const GoalNode&) = default;
};

struct InfluenceEdge {
  std::string child;
  std::string parent;
  double weight = 1.0;

  friend bool operator==(const InfluenceEdge&, const InfluenceEdge&) = default;
};

/// XOR construct: at most one member should be active (degree above the
/// threshold) at a time. Checked after propagation, never alters degrees.
struct CompatibilityGroup {
  std::vector<std::string> members;
  double activity_threshold = 0.5;

  friend bool operator==(const CompatibilityGroup&,
                         const CompatibilityGroup&) = default;
};

struct GoalGraph {
  std::vector<GoalNode> nodes;
  std::vector<InfluenceEdge> edges;
  std::vector<CompatibilityGroup> groups;

  [[nodiscard]] const GoalNode* find_node(std::string_view id) const noexcept;

  friend bool operator==(const GoalGraph&, const GoalGraph&) = default;
};

enum class FindingKind {
  Cycle,
  DanglingEndpoint,
  WeightOutOfRange,
  DuplicateId,
  DuplicateEdge,
  EmptyId,
  GroupMemberUnknown,
  GroupTooSmall,
  ThresholdOutOfRange,
  InternalWithoutChildren,
  LeafWithIncomingEdge,
};

[[nodiscard]] std::string_view to_string(FindingKind kind) noexcept;

struct Finding {
  FindingKind kind;
  std::vector<std::string> nodes;  ///< ids involved, e.g. the members of a cycle
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  [[nodiscard]] bool valid() const noexcept { return findings.empty(); }
  [[nodiscard]] bool has(FindingKind kind) const noexcept;
};

/// Thrown when an operation needs a valid graph and gets an invalid one.
class GraphError : public std::runtime_error {
 public:
  explicit GraphError(ValidationReport report);
  [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Thrown for degree assignments or series that do not fit the graph.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lists every structural problem; an empty report means the graph is valid.
[[nodiscard]] ValidationReport validate(const GoalGraph& kb);

using DegreeAssignment = std::map<std::string, double, std::less<>>;
using DegreeMap = std::map<std::string, double, std::less<>>;

struct TimedDegree {
  Date date;
  double degree = 0.0;

  friend bool operator==(const TimedDegree&, const TimedDegree&) = default;
};
using DegreeSeries = std::vector<TimedDegree>;
using SeriesMap = std::map<std::string, DegreeSeries, std::less<>>;

/// Validated graph with a fixed evaluation plan. Reusable across many
/// evaluations of the same graph; immutable after construction.
class Propagator {
 public:
  /// @throws GraphError if @p kb is invalid.
  explicit Propagator(const GoalGraph& kb);

  /// Leaf degrees default to 0 when absent.
  /// @throws InputError for unknown or non-leaf keys and out-of-range values.
  [[nodiscard]] DegreeMap run(const DegreeAssignment& leaves) const;

  /// Same as run() but visits nodes in @p order.
  /// @throws InputError unless @p order is a topological order of all nodes.
  [[nodiscard]] DegreeMap run(const DegreeAssignment& leaves,
                              std::span<const std::string> order) const;

  [[nodiscard]] std::vector<std::string> topological_order() const;
  [[nodiscard]] const GoalGraph& graph() const noexcept { return kb_; }

  /// @throws InputError as run() does.
  void check_leaves(const DegreeAssignment& leaves) const;

 private:
  struct Incoming {
    std::size_t child;
    double weight;
  };

  [[nodiscard]] DegreeMap evaluate(const DegreeAssignment& leaves,
                                   std::span<const std::size_t> order) const;

  GoalGraph kb_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<Incoming>> incoming_;
  std::vector<double> abs_weight_sum_;
  std::vector<std::size_t> order_;
};

/// One-shot propagation. @throws GraphError, InputError.
[[nodiscard]] DegreeMap propagate(const GoalGraph& kb, const DegreeAssignment& leaves);

/// Deterministic topological order (Kahn, ties broken by declaration order).
/// @throws GraphError if @p kb is invalid.
[[nodiscard]] std::vector<std::string> topological_order(const GoalGraph& kb);

/// Propagates at every timestamp of a shared grid. Leaves without a series
/// take their value from @p constants, or 0. Series values take precedence
/// over constants for the same leaf.
/// @throws InputError if the series do not share one strictly increasing grid.
[[nodiscard]] SeriesMap propagate_series(const GoalGraph& kb,
                                         const SeriesMap& leaf_series,
                                         const DegreeAssignment& constants = {});

/// Common timestamp grid of @p series (empty if there are no series).
/// @throws InputError on mismatched or unsorted grids.
[[nodiscard]] std::vector<Date> common_grid(const SeriesMap& series);

/// Leaf values at grid position @p index, layered over @p constants.
[[nodiscard]] DegreeAssignment leaves_at(const SeriesMap& series, std::size_t index,
                                         const DegreeAssignment& constants);

struct GroupViolation {
  std::size_t group = 0;  ///< index into GoalGraph::groups
  std::vector<std::string> active_members;
};

/// Groups with two or more members above their activity threshold.
[[nodiscard]] std::vector<GroupViolation> check_compatibility(const GoalGraph& kb,
                                                              const DegreeMap& degrees);

}  // namespace conflictkb
