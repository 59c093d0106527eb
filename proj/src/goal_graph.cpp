#include "conflictkb/goal_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

namespace conflictkb {

std::string_view to_string(NodeKind kind) noexcept {
  return kind == NodeKind::Leaf ? "leaf" : "internal";
}

std::string_view to_string(NodeRole role) noexcept {
  switch (role) {
    case NodeRole::None: return "";
    case NodeRole::Main: return "main";
    case NodeRole::SubjectGoal: return "subject_goal";
    case NodeRole::SelfEsteem: return "self_esteem";
    case NodeRole::ReflexiveLeaf: return "reflexive_leaf";
    case NodeRole::Custom: return "custom";
  }
  return "";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) noexcept {
  if (text == "leaf") return NodeKind::Leaf;
  if (text == "internal") return NodeKind::Internal;
  return std::nullopt;
}

std::optional<NodeRole> parse_node_role(std::string_view text) noexcept {
  for (auto role : {NodeRole::None, NodeRole::Main, NodeRole::SubjectGoal,
                    NodeRole::SelfEsteem, NodeRole::ReflexiveLeaf, NodeRole::Custom}) {
    if (to_string(role) == text) return role;
  }
  return std::nullopt;
}

std::string_view to_string(FindingKind kind) noexcept {
  switch (kind) {
    case FindingKind::Cycle: return "cycle";
    case FindingKind::DanglingEndpoint: return "dangling_endpoint";
    case FindingKind::WeightOutOfRange: return "weight_out_of_range";
    case FindingKind::DuplicateId: return "duplicate_id";
    case FindingKind::DuplicateEdge: return "duplicate_edge";
    case FindingKind::EmptyId: return "empty_id";
    case FindingKind::GroupMemberUnknown: return "group_member_unknown";
    case FindingKind::GroupTooSmall: return "group_too_small";
    case FindingKind::ThresholdOutOfRange: return "threshold_out_of_range";
    case FindingKind::InternalWithoutChildren: return "internal_without_children";
    case FindingKind::LeafWithIncomingEdge: return "leaf_with_incoming_edge";
  }
  return "unknown";
}

const GoalNode* GoalGraph::find_node(std::string_view id) const noexcept {
  auto it = std::find_if(nodes.begin(), nodes.end(),
                         [&](const GoalNode& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

bool ValidationReport::has(FindingKind kind) const noexcept {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.kind == kind; });
}

namespace {

std::string describe(const ValidationReport& report) {
  std::ostringstream os;
  os << "invalid goal graph";
  for (const auto& f : report.findings) os << "; " << f.message;
  return os.str();
}

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

// Tarjan's strongly connected components over index adjacency.
class CycleFinder {
 public:
  explicit CycleFinder(const std::vector<std::vector<std::size_t>>& out)
      : out_(out), index_(out.size(), kUnvisited), low_(out.size(), 0),
        on_stack_(out.size(), false) {}

  std::vector<std::vector<std::size_t>> run() {
    for (std::size_t v = 0; v < out_.size(); ++v) {
      if (index_[v] == kUnvisited) visit(v);
    }
    return std::move(cycles_);
  }

 private:
  static constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);

  void visit(std::size_t v) {
    index_[v] = low_[v] = next_++;
    stack_.push_back(v);
    on_stack_[v] = true;
    for (std::size_t w : out_[v]) {
      if (index_[w] == kUnvisited) {
        visit(w);
        low_[v] = std::min(low_[v], low_[w]);
      } else if (on_stack_[w]) {
        low_[v] = std::min(low_[v], index_[w]);
      }
    }
    if (low_[v] != index_[v]) return;
    std::vector<std::size_t> component;
    std::size_t w = 0;
    do {
      w = stack_.back();
      stack_.pop_back();
      on_stack_[w] = false;
      component.push_back(w);
    } while (w != v);
    const bool self_loop =
        std::find(out_[v].begin(), out_[v].end(), v) != out_[v].end();
    if (component.size() > 1 || self_loop) {
      std::sort(component.begin(), component.end());
      cycles_.push_back(std::move(component));
    }
  }

  const std::vector<std::vector<std::size_t>>& out_;
  std::vector<std::size_t> index_;
  std::vector<std::size_t> low_;
  std::vector<bool> on_stack_;
  std::vector<std::size_t> stack_;
  std::size_t next_ = 0;
  std::vector<std::vector<std::size_t>> cycles_;
};

}  // namespace

GraphError::GraphError(ValidationReport report)
    : std::runtime_error(describe(report)), report_(std::move(report)) {}

ValidationReport validate(const GoalGraph& kb) {
  ValidationReport report;
  auto add = [&](FindingKind kind, std::vector<std::string> ids, std::string msg) {
    report.findings.push_back({kind, std::move(ids), std::move(msg)});
  };

  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < kb.nodes.size(); ++i) {
    const auto& id = kb.nodes[i].id;
    if (id.empty()) {
      add(FindingKind::EmptyId, {}, "node #" + std::to_string(i) + " has an empty id");
      continue;
    }
    if (!index.emplace(id, i).second) {
      add(FindingKind::DuplicateId, {id}, "duplicate node id '" + id + "'");
    }
  }

  std::vector<std::vector<std::size_t>> out(kb.nodes.size());
  std::vector<std::size_t> in_degree(kb.nodes.size(), 0);
  std::set<std::pair<std::string_view, std::string_view>> seen_edges;
  for (const auto& e : kb.edges) {
    const std::string name = e.child + " -> " + e.parent;
    if (!(std::isfinite(e.weight) && e.weight != 0.0 && std::abs(e.weight) <= 1.0)) {
      std::ostringstream os;
      os << "edge " << name << " has weight " << e.weight
         << " outside [-1,1] or equal to zero";
      add(FindingKind::WeightOutOfRange, {e.child, e.parent}, os.str());
    }
    auto c = index.find(e.child);
    auto p = index.find(e.parent);
    if (c == index.end() || p == index.end()) {
      std::vector<std::string> missing;
      if (c == index.end()) missing.push_back(e.child);
      if (p == index.end()) missing.push_back(e.parent);
      add(FindingKind::DanglingEndpoint, missing,
          "edge " + name + " references unknown node(s) " + join(missing));
      continue;
    }
    if (!seen_edges.emplace(e.child, e.parent).second) {
      add(FindingKind::DuplicateEdge, {e.child, e.parent}, "duplicate edge " + name);
    }
    out[c->second].push_back(p->second);
    ++in_degree[p->second];
  }

  for (auto& cycle : CycleFinder(out).run()) {
    std::vector<std::string> ids;
    for (std::size_t i : cycle) ids.push_back(kb.nodes[i].id);
    add(FindingKind::Cycle, ids, "cycle through " + join(ids));
  }

  for (std::size_t i = 0; i < kb.nodes.size(); ++i) {
    const auto& n = kb.nodes[i];
    if (n.kind == NodeKind::Internal && in_degree[i] == 0) {
      add(FindingKind::InternalWithoutChildren, {n.id},
          "internal node '" + n.id + "' has no incoming influence");
    }
    if (n.kind == NodeKind::Leaf && in_degree[i] > 0) {
      add(FindingKind::LeafWithIncomingEdge, {n.id},
          "leaf node '" + n.id + "' has incoming influence");
    }
  }

  for (std::size_t g = 0; g < kb.groups.size(); ++g) {
    const auto& group = kb.groups[g];
    const std::string name = "compatibility group #" + std::to_string(g);
    if (group.members.size() < 2) {
      add(FindingKind::GroupTooSmall, group.members, name + " has fewer than 2 members");
    }
    for (const auto& m : group.members) {
      if (!index.contains(m)) {
        add(FindingKind::GroupMemberUnknown, {m}, name + " references unknown node '" + m + "'");
      }
    }
    if (!std::isfinite(group.activity_threshold) || std::abs(group.activity_threshold) > 1.0) {
      add(FindingKind::ThresholdOutOfRange, group.members,
          name + " has a threshold outside [-1,1]");
    }
  }
  return report;
}

Propagator::Propagator(const GoalGraph& kb) : kb_(kb) {
  auto report = validate(kb_);
  if (!report.valid()) throw GraphError(std::move(report));

  const std::size_t n = kb_.nodes.size();
  for (std::size_t i = 0; i < n; ++i) index_.emplace(kb_.nodes[i].id, i);
  incoming_.resize(n);
  abs_weight_sum_.assign(n, 0.0);
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> pending(n, 0);
  for (const auto& e : kb_.edges) {
    const std::size_t c = index_.find(e.child)->second;
    const std::size_t p = index_.find(e.parent)->second;
    incoming_[p].push_back({c, e.weight});
    abs_weight_sum_[p] += std::abs(e.weight);
    out[c].push_back(p);
    ++pending[p];
  }

  // Kahn; the ready set is ordered by declaration index so the plan is
  // deterministic.
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) ready.insert(i);
  }
  while (!ready.empty()) {
    const std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    order_.push_back(v);
    for (std::size_t w : out[v]) {
      if (--pending[w] == 0) ready.insert(w);
    }
  }
}

void Propagator::check_leaves(const DegreeAssignment& leaves) const {
  for (const auto& [id, value] : leaves) {
    auto it = index_.find(id);
    if (it == index_.end()) throw InputError("unknown leaf '" + id + "'");
    const auto& node = kb_.nodes[it->second];
    if (node.kind != NodeKind::Leaf) {
      throw InputError("'" + id + "' is an internal node, not a leaf");
    }
    const double lo = node.role == NodeRole::ReflexiveLeaf ? 0.0 : -1.0;
    if (!std::isfinite(value) || value < lo || value > 1.0) {
      std::ostringstream os;
      os << "degree " << value << " for leaf '" << id << "' is outside [" << lo << ",1]";
      throw InputError(os.str());
    }
  }
}

DegreeMap Propagator::evaluate(const DegreeAssignment& leaves,
                               std::span<const std::size_t> order) const {
  check_leaves(leaves);
  std::vector<double> degree(kb_.nodes.size(), 0.0);
  for (std::size_t v : order) {
    const auto& node = kb_.nodes[v];
    if (node.kind == NodeKind::Leaf) {
      auto it = leaves.find(node.id);
      degree[v] = it == leaves.end() ? 0.0 : it->second;
      continue;
    }
    double sum = 0.0;
    for (const auto& in : incoming_[v]) sum += in.weight * degree[in.child];
    degree[v] = sum / abs_weight_sum_[v];
  }
  DegreeMap result;
  for (std::size_t i = 0; i < kb_.nodes.size(); ++i) {
    result.emplace(kb_.nodes[i].id, degree[i]);
  }
  return result;
}

DegreeMap Propagator::run(const DegreeAssignment& leaves) const {
  return evaluate(leaves, order_);
}

DegreeMap Propagator::run(const DegreeAssignment& leaves,
                          std::span<const std::string> order) const {
  const std::size_t n = kb_.nodes.size();
  if (order.size() != n) throw InputError("evaluation order does not cover every node");
  std::vector<std::size_t> position(n, n);
  std::vector<std::size_t> indices;
  indices.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto it = index_.find(order[k]);
    if (it == index_.end() || position[it->second] != n) {
      throw InputError("evaluation order is not a permutation of the nodes");
    }
    position[it->second] = k;
    indices.push_back(it->second);
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (const auto& in : incoming_[p]) {
      if (position[in.child] > position[p]) {
        throw InputError("evaluation order visits '" + kb_.nodes[p].id + "' before its child '" +
                         kb_.nodes[in.child].id + "'");
      }
    }
  }
  return evaluate(leaves, indices);
}

std::vector<std::string> Propagator::topological_order() const {
  std::vector<std::string> ids;
  ids.reserve(order_.size());
  for (std::size_t v : order_) ids.push_back(kb_.nodes[v].id);
  return ids;
}

DegreeMap propagate(const GoalGraph& kb, const DegreeAssignment& leaves) {
  return Propagator(kb).run(leaves);
}

std::vector<std::string> topological_order(const GoalGraph& kb) {
  return Propagator(kb).topological_order();
}

std::vector<Date> common_grid(const SeriesMap& series) {
  if (series.empty()) return {};
  const auto& [first_id, first] = *series.begin();
  std::vector<Date> grid;
  grid.reserve(first.size());
  for (const auto& point : first) {
    if (!grid.empty() && !(grid.back() < point.date)) {
      throw InputError("series '" + first_id + "' is not strictly increasing at " +
                       point.date.to_string());
    }
    grid.push_back(point.date);
  }
  for (const auto& [id, s] : series) {
    const bool same = s.size() == grid.size() &&
                      std::equal(s.begin(), s.end(), grid.begin(),
                                 [](const TimedDegree& p, Date d) { return p.date == d; });
    if (!same) {
      throw InputError("series '" + id + "' does not share the timestamp grid of '" +
                       first_id + "'");
    }
  }
  return grid;
}

DegreeAssignment leaves_at(const SeriesMap& series, std::size_t index,
                           const DegreeAssignment& constants) {
  DegreeAssignment leaves = constants;
  for (const auto& [id, s] : series) leaves.insert_or_assign(id, s.at(index).degree);
  return leaves;
}

SeriesMap propagate_series(const GoalGraph& kb, const SeriesMap& leaf_series,
                           const DegreeAssignment& constants) {
  const Propagator propagator(kb);
  const auto grid = common_grid(leaf_series);
  SeriesMap result;
  for (const auto& node : kb.nodes) result[node.id].reserve(grid.size());
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const auto degrees = propagator.run(leaves_at(leaf_series, t, constants));
    for (const auto& [id, d] : degrees) result[id].push_back({grid[t], d});
  }
  return result;
}

std::vector<GroupViolation> check_compatibility(const GoalGraph& kb,
                                                const DegreeMap& degrees) {
  std::vector<GroupViolation> violations;
  for (std::size_t g = 0; g < kb.groups.size(); ++g) {
    const auto& group = kb.groups[g];
    GroupViolation v{g, {}};
    for (const auto& m : group.members) {
      auto it = degrees.find(m);
      if (it != degrees.end() && it->second > group.activity_threshold) {
        v.active_members.push_back(m);
      }
    }
    if (v.active_members.size() >= 2) violations.push_back(std::move(v));
  }
  return violations;
}

}  // namespace conflictkb
