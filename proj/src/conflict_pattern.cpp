#include "conflictkb/conflict_pattern.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace conflictkb {

std::string_view to_string(Winner w) noexcept {
  switch (w) {
    case Winner::SubjectA: return "SubjectA";
    case Winner::SubjectB: return "SubjectB";
    case Winner::Draw: return "Draw";
  }
  return "Draw";
}

namespace {

struct LeafSpec {
  std::string_view id;
  double sign;
  // Label template; '@' is A's name, '#' is B's name.
  std::string_view label;
};

constexpr std::array<LeafSpec, 6> kSideA{{
    {"a2", +1, "Environment influence expected by @"},
    {"b2", +1, "Environment influence expected by # from the point of view of @"},
    {"a3", -1, "Intentions of @"},
    {"b3", -1, "Intentions of # from the point of view of @"},
    {"a4", -1, "Impression of @ of how # imagines the intentions of @"},
    {"b4", -1, "Impression of @ of how # imagines the intentions of #"},
}};

constexpr std::array<LeafSpec, 6> kSideB{{
    {"c2", +1, "Environment influence expected by #"},
    {"d2", +1, "Environment influence expected by @ from the point of view of #"},
    {"c3", -1, "Intentions of #"},
    {"d3", -1, "Intentions of @ from the point of view of #"},
    {"c4", -1, "Impression of # of how @ imagines the intentions of #"},
    {"d4", -1, "Impression of # of how @ imagines the intentions of @"},
}};

std::string fill(std::string_view tmpl, const std::string& a, const std::string& b) {
  std::string out;
  for (char c : tmpl) {
    if (c == '@') {
      out += a;
    } else if (c == '#') {
      out += b;
    } else {
      out += c;
    }
  }
  return out;
}

bool is_core_role(NodeRole role) noexcept {
  return role == NodeRole::Main || role == NodeRole::SubjectGoal ||
         role == NodeRole::SelfEsteem || role == NodeRole::ReflexiveLeaf;
}

}  // namespace

GoalGraph build_pattern(const SubjectSpec& a, const SubjectSpec& b,
                        const PatternWeights& weights) {
  if (a.name.empty() || b.name.empty()) {
    throw PatternError(PatternError::Reason::InvalidSubjects, "subject names must be non-empty");
  }
  if (a.name == b.name) {
    throw PatternError(PatternError::Reason::InvalidSubjects,
                       "subjects must differ, both are named '" + a.name + "'");
  }
  using namespace pattern_ids;
  const std::string& na = a.name;
  const std::string& nb = b.name;

  GoalGraph kb;
  auto node = [&](std::string_view id, std::string label, NodeKind kind, NodeRole role) {
    kb.nodes.push_back({std::string(id), std::move(label), kind, role});
  };
  auto edge = [&](std::string_view child, std::string_view parent, double w) {
    kb.edges.push_back({std::string(child), std::string(parent), w});
  };

  node(kMain, "Conflict outcome: " + na + " versus " + nb, NodeKind::Internal, NodeRole::Main);
  node(kGoalA, "Goal of " + na, NodeKind::Internal, NodeRole::SubjectGoal);
  node(kGoalB, "Goal of " + nb, NodeKind::Internal, NodeRole::SubjectGoal);
  node(kSelfEsteemA, "Self-esteem of " + na + " in the conflict with " + nb, NodeKind::Internal,
       NodeRole::SelfEsteem);
  node(kSelfEsteemB, "Self-esteem of " + nb + " in the conflict with " + na, NodeKind::Internal,
       NodeRole::SelfEsteem);
  node("a1", "Influence of the environment on both subjects", NodeKind::Leaf,
       NodeRole::ReflexiveLeaf);
  for (const auto& side : {kSideA, kSideB}) {
    for (const auto& leaf : side) {
      node(leaf.id, fill(leaf.label, na, nb), NodeKind::Leaf, NodeRole::ReflexiveLeaf);
    }
  }

  edge(kGoalA, kMain, +weights.main);
  edge(kGoalB, kMain, -weights.main);
  edge("a1", kGoalA, +weights.environment);
  edge(kSelfEsteemA, kGoalA, -weights.self_esteem);
  edge("a1", kGoalB, +weights.environment);
  edge(kSelfEsteemB, kGoalB, -weights.self_esteem);
  for (const auto& leaf : kSideA) edge(leaf.id, kSelfEsteemA, leaf.sign * weights.reflexive);
  for (const auto& leaf : kSideB) edge(leaf.id, kSelfEsteemB, leaf.sign * weights.reflexive);

  auto report = validate(kb);
  if (!report.valid()) throw GraphError(std::move(report));
  return kb;
}

Winner decide_outcome(double g, double epsilon) noexcept {
  if (g > epsilon) return Winner::SubjectA;
  if (g < -epsilon) return Winner::SubjectB;
  return Winner::Draw;
}

void require_pattern_roles(const GoalGraph& kb) {
  using namespace pattern_ids;
  const std::array<std::pair<std::string_view, NodeRole>, 5> required{{
      {kMain, NodeRole::Main},
      {kGoalA, NodeRole::SubjectGoal},
      {kGoalB, NodeRole::SubjectGoal},
      {kSelfEsteemA, NodeRole::SelfEsteem},
      {kSelfEsteemB, NodeRole::SelfEsteem},
  }};
  for (const auto& [id, role] : required) {
    const GoalNode* n = kb.find_node(id);
    if (n == nullptr || n->role != role) {
      throw PatternError(PatternError::Reason::MissingRole,
                         "knowledge base lacks pattern node '" + std::string(id) +
                             "' with role " + std::string(to_string(role)));
    }
  }
}

ConflictResult conflict_result(const GoalGraph& kb, const DegreeMap& degrees, double epsilon) {
  using namespace pattern_ids;
  require_pattern_roles(kb);
  auto at = [&](std::string_view id) { return degrees.find(id)->second; };
  ConflictResult r;
  r.g_degree = at(kMain);
  r.goal_a_degree = at(kGoalA);
  r.goal_b_degree = at(kGoalB);
  r.self_esteem_a_degree = at(kSelfEsteemA);
  r.self_esteem_b_degree = at(kSelfEsteemB);
  r.winner = decide_outcome(r.g_degree, epsilon);
  return r;
}

ConflictResult evaluate_conflict(const GoalGraph& kb, const DegreeAssignment& leaves,
                                 double epsilon) {
  require_pattern_roles(kb);
  return conflict_result(kb, propagate(kb, leaves), epsilon);
}

GoalGraph extend_pattern(const GoalGraph& kb, const GraphAdditions& additions) {
  require_pattern_roles(kb);
  if (!validate(kb).valid()) {
    throw PatternError(PatternError::Reason::Invalid, "base knowledge base is invalid");
  }

  auto is_core = [&](std::string_view id) {
    const GoalNode* n = kb.find_node(id);
    return n != nullptr && is_core_role(n->role);
  };

  for (const auto& n : additions.nodes) {
    if (kb.find_node(n.id) != nullptr) {
      throw PatternError(PatternError::Reason::DuplicateId,
                         "node id '" + n.id + "' already exists");
    }
    if (is_core_role(n.role)) {
      throw PatternError(PatternError::Reason::CoreEdge,
                         "added node '" + n.id + "' may not take pattern role " +
                             std::string(to_string(n.role)));
    }
  }
  for (const auto& e : additions.edges) {
    if (is_core(e.child) && is_core(e.parent)) {
      throw PatternError(PatternError::Reason::CoreEdge,
                         "edge " + e.child + " -> " + e.parent + " touches the pattern core");
    }
  }

  GoalGraph result = kb;
  result.nodes.insert(result.nodes.end(), additions.nodes.begin(), additions.nodes.end());
  result.edges.insert(result.edges.end(), additions.edges.begin(), additions.edges.end());
  result.groups.insert(result.groups.end(), additions.groups.begin(), additions.groups.end());

  auto report = validate(result);
  if (report.valid()) return result;
  const auto& first = report.findings.front();
  auto reason = PatternError::Reason::Invalid;
  if (report.has(FindingKind::Cycle)) {
    reason = PatternError::Reason::Cycle;
  } else if (report.has(FindingKind::DuplicateId)) {
    reason = PatternError::Reason::DuplicateId;
  }
  std::string what = "extension rejected: " + first.message;
  for (const auto& f : report.findings) {
    if (f.kind == FindingKind::Cycle) what = "extension rejected: " + f.message;
  }
  throw PatternError(reason, what);
}

}  // namespace conflictkb
