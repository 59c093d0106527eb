#pragma once

/// @file
/// Content-monitoring series and expert estimates feeding the knowledge base.
///
/// Topic publication counts become leaf degrees through min-max
/// normalization; expert estimates of an edge become its partial influence
/// coefficient through a competence-weighted mean.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conflictkb/date.hpp"
#include "conflictkb/goal_graph.hpp"

namespace conflictkb {

struct TopicSample {
  Date date;
  std::uint64_t count = 0;

  friend bool operator==(const TopicSample&, const TopicSample&) = default;
};

struct TopicSeries {
  std::string topic_id;
  std::vector<TopicSample> samples;  ///< strictly increasing dates
};

/// CSV problem, with the 1-based line it was found on.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::string_view kTopicCsvHeader = "date,topic,count";

/// Parses `date,topic,count` CSV. Topics are returned in order of first
/// appearance; samples are sorted by date.
/// @throws ParseError on the first bad line, including repeated
///         (date, topic) pairs.
[[nodiscard]] std::vector<TopicSeries> parse_topic_series(std::string_view csv);

enum class Normalization { MinMax };

struct NormalizedSeries {
  DegreeSeries points;
  /// Set for constant or single-sample input, which carries no directional
  /// signal and maps to 0.5 throughout.
  bool degenerate = false;
};

/// @throws std::invalid_argument for an empty series.
[[nodiscard]] NormalizedSeries normalize_series(const TopicSeries& series,
                                                Normalization method = Normalization::MinMax);

enum class LeafTransform { Identity, Complement };

[[nodiscard]] std::string_view to_string(LeafTransform t) noexcept;
[[nodiscard]] std::optional<LeafTransform> parse_leaf_transform(std::string_view text) noexcept;

struct LeafBinding {
  std::string topic_id;
  std::string leaf_id;
  LeafTransform transform = LeafTransform::Identity;
};

class BindingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BoundSeries {
  SeriesMap leaves;
  std::vector<std::string> warnings;  ///< one per degenerate topic
};

/// Normalizes each bound topic and assigns it to its leaf.
/// Every leaf must exist in @p kb as a leaf with role reflexive_leaf or
/// custom.
/// @throws BindingError if a topic or leaf cannot be matched, or a leaf is
///         bound twice.
[[nodiscard]] BoundSeries bind_series_to_leaves(const GoalGraph& kb,
                                                std::span<const LeafBinding> bindings,
                                                std::span<const TopicSeries> series);

/// Same without a knowledge base to check leaf ids against.
[[nodiscard]] BoundSeries bind_series(std::span<const LeafBinding> bindings,
                                      std::span<const TopicSeries> series);

struct ExpertEstimate {
  std::string expert_id;
  std::string child;
  std::string parent;
  double estimate = 0.0;    ///< in [-1,1]
  double competence = 1.0;  ///< > 0
};

class EstimateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Competence-weighted arithmetic mean sum(c*x)/sum(c) of estimates for one
/// edge.
///
/// Each value is taken at its shortest round-trip decimal representation and
/// the mean is computed in 50-digit decimal arithmetic, then rounded once to
/// double. Estimates typed as decimals therefore aggregate to the double
/// nearest the decimal answer (0.4 and 0.8 at competences 1 and 3 give
/// exactly 0.7), and the result is independent of input order.
/// @throws EstimateError for an empty list, mixed edges, an estimate outside
///         [-1,1] or a non-positive competence.
[[nodiscard]] double aggregate_expert_estimates(std::span<const ExpertEstimate> estimates);

struct AggregatedEdge {
  std::string child;
  std::string parent;
  double weight = 0.0;
  std::size_t estimate_count = 0;
};

/// Groups estimates by edge (first-appearance order) and aggregates each.
[[nodiscard]] std::vector<AggregatedEdge> aggregate_by_edge(
    std::span<const ExpertEstimate> estimates);

/// Sets the weight of each aggregated edge in @p kb.
/// @throws EstimateError if an edge is not in the graph.
[[nodiscard]] GoalGraph apply_edge_weights(const GoalGraph& kb,
                                           std::span<const AggregatedEdge> weights);

}  // namespace conflictkb
