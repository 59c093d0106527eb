#pragma once

/// @file
/// Two-subject conflict design pattern for the goal graph.
///
/// The main goal G is raised by subject A's goal and lowered by subject B's.
/// Each subject goal is raised by the shared environment influence a1 and
/// lowered by that subject's self-esteem. Self-esteem follows the disjunctive
/// form of the reflexive model: positive influence from the expected
/// environment influences, negative influence from the intentions and
/// impressions.
///
///   G      <- GoalA (+), GoalB (-)
///   GoalA  <- a1 (+), A1 (-)          GoalB <- a1 (+), B1 (-)
///   A1     <- a2, b2 (+); a3, b3, a4, b4 (-)
///   B1     <- c2, d2 (+); c3, d3, c4, d4 (-)
///
/// The sign of G's degree decides the conflict.

#include <stdexcept>
#include <string>
#include <string_view>

#include "conflictkb/goal_graph.hpp"

namespace conflictkb {

namespace pattern_ids {
inline constexpr std::string_view kMain = "G";
inline constexpr std::string_view kGoalA = "GoalA";
inline constexpr std::string_view kGoalB = "GoalB";
inline constexpr std::string_view kSelfEsteemA = "A1";
inline constexpr std::string_view kSelfEsteemB = "B1";
}  // namespace pattern_ids

struct SubjectSpec {
  std::string name;
};

/// Edge magnitudes of the pattern. Signs are fixed by the pattern; only the
/// magnitudes are configurable.
struct PatternWeights {
  double main = 1.0;         ///< G <- GoalA, G <- GoalB
  double environment = 1.0;  ///< GoalX <- a1
  double self_esteem = 1.0;  ///< GoalX <- X1
  double reflexive = 1.0;    ///< X1 <- reflexive leaves
};

enum class Winner { SubjectA, SubjectB, Draw };

[[nodiscard]] std::string_view to_string(Winner w) noexcept;

inline constexpr double kDefaultDrawBand = 1e-9;

struct ConflictResult {
  double g_degree = 0.0;
  double goal_a_degree = 0.0;
  double goal_b_degree = 0.0;
  double self_esteem_a_degree = 0.0;
  double self_esteem_b_degree = 0.0;
  Winner winner = Winner::Draw;
};

/// Pattern construction or extension was refused.
class PatternError : public std::invalid_argument {
 public:
  enum class Reason { InvalidSubjects, MissingRole, Cycle, DuplicateId, CoreEdge, Invalid };

  PatternError(Reason reason, const std::string& what)
      : std::invalid_argument(what), reason_(reason) {}

  [[nodiscard]] Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/// @throws PatternError if a name is empty or both names are equal.
[[nodiscard]] GoalGraph build_pattern(const SubjectSpec& a, const SubjectSpec& b,
                                      const PatternWeights& weights = {});

/// g > eps: A wins; g < -eps: B wins; otherwise a draw.
[[nodiscard]] Winner decide_outcome(double g, double epsilon = kDefaultDrawBand) noexcept;

/// Propagates @p leaves through @p kb and reads the five pattern degrees.
/// @throws PatternError (MissingRole) if the pattern nodes are absent,
///         GraphError / InputError from propagation.
[[nodiscard]] ConflictResult evaluate_conflict(const GoalGraph& kb,
                                               const DegreeAssignment& leaves,
                                               double epsilon = kDefaultDrawBand);

/// Reads the pattern degrees out of an already propagated degree map.
[[nodiscard]] ConflictResult conflict_result(const GoalGraph& kb, const DegreeMap& degrees,
                                             double epsilon = kDefaultDrawBand);

/// @throws PatternError (MissingRole) unless the five pattern nodes exist
/// with the right roles.
void require_pattern_roles(const GoalGraph& kb);

struct GraphAdditions {
  std::vector<GoalNode> nodes;
  std::vector<InfluenceEdge> edges;
  std::vector<CompatibilityGroup> groups;
};

/// Adds @p additions around the pattern, which stays untouched.
/// @throws PatternError if the result would be invalid. The reason names the
///         first problem found: a reused id, a new pattern role, an edge
///         between two pattern nodes, or a cycle.
[[nodiscard]] GoalGraph extend_pattern(const GoalGraph& kb, const GraphAdditions& additions);

}  // namespace conflictkb
