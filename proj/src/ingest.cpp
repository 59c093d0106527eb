#include "conflictkb/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace conflictkb {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_count(std::string_view text, std::size_t line) {
  if (text.empty()) throw ParseError(line, "empty count");
  if (text.front() == '-') {
    throw ParseError(line, "negative count " + std::string(text));
  }
  if (!std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError(line, "count '" + std::string(text) + "' is not a non-negative integer");
  }
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line, "count '" + std::string(text) + "' is out of range");
  }
  return value;
}

}  // namespace

std::vector<TopicSeries> parse_topic_series(std::string_view csv) {
  auto lines = split(csv, '\n');
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  if (lines.empty() || lines.front() != kTopicCsvHeader) {
    throw ParseError(1, "expected header '" + std::string(kTopicCsvHeader) + "'");
  }

  std::vector<TopicSeries> result;
  std::map<std::string, std::size_t, std::less<>> by_topic;
  std::map<std::pair<std::string, Date>, std::size_t> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != 3) {
      throw ParseError(line, "expected 3 fields, got " + std::to_string(fields.size()));
    }
    const auto date = Date::parse(fields[0]);
    if (!date) throw ParseError(line, "invalid date '" + std::string(fields[0]) + "'");
    if (fields[1].empty()) throw ParseError(line, "empty topic");
    std::string topic(fields[1]);
    const std::uint64_t count = parse_count(fields[2], line);

    auto [it, inserted] = seen.emplace(std::pair{topic, *date}, line);
    if (!inserted) {
      throw ParseError(line, "duplicate sample for topic '" + topic + "' on " +
                                 date->to_string() + " (first on line " +
                                 std::to_string(it->second) + ")");
    }
    auto [slot, added] = by_topic.emplace(topic, result.size());
    if (added) result.push_back({topic, {}});
    result[slot->second].samples.push_back({*date, count});
  }
  for (auto& s : result) {
    std::sort(s.samples.begin(), s.samples.end(),
              [](const TopicSample& x, const TopicSample& y) { return x.date < y.date; });
  }
  return result;
}

NormalizedSeries normalize_series(const TopicSeries& series, Normalization /*method*/) {
  if (series.samples.empty()) {
    throw std::invalid_argument("topic '" + series.topic_id + "' has no samples");
  }
  const auto [lo, hi] = std::minmax_element(
      series.samples.begin(), series.samples.end(),
      [](const TopicSample& x, const TopicSample& y) { return x.count < y.count; });
  NormalizedSeries out;
  out.degenerate = lo->count == hi->count;
  const double min = static_cast<double>(lo->count);
  const double range = static_cast<double>(hi->count) - min;
  for (const auto& s : series.samples) {
    const double v = out.degenerate ? 0.5 : (static_cast<double>(s.count) - min) / range;
    out.points.push_back({s.date, v});
  }
  return out;
}

std::string_view to_string(LeafTransform t) noexcept {
  return t == LeafTransform::Identity ? "identity" : "complement";
}

std::optional<LeafTransform> parse_leaf_transform(std::string_view text) noexcept {
  if (text == "identity") return LeafTransform::Identity;
  if (text == "complement") return LeafTransform::Complement;
  return std::nullopt;
}

namespace {

BoundSeries bind_impl(const GoalGraph* kb, std::span<const LeafBinding> bindings,
                      std::span<const TopicSeries> series) {
  BoundSeries out;
  for (const auto& b : bindings) {
    if (kb != nullptr) {
      const GoalNode* node = kb->find_node(b.leaf_id);
      if (node == nullptr) throw BindingError("binding targets unknown leaf '" + b.leaf_id + "'");
      if (node->kind != NodeKind::Leaf) {
        throw BindingError("binding targets internal node '" + b.leaf_id + "'");
      }
      if (node->role != NodeRole::ReflexiveLeaf && node->role != NodeRole::Custom) {
        throw BindingError("leaf '" + b.leaf_id + "' has role '" +
                           std::string(to_string(node->role)) +
                           "'; only reflexive_leaf or custom leaves can be bound");
      }
    }
    auto topic = std::find_if(series.begin(), series.end(),
                              [&](const TopicSeries& s) { return s.topic_id == b.topic_id; });
    if (topic == series.end()) throw BindingError("binding references unknown topic '" + b.topic_id + "'");
    if (out.leaves.contains(b.leaf_id)) {
      throw BindingError("leaf '" + b.leaf_id + "' is bound more than once");
    }
    auto normalized = normalize_series(*topic);
    if (normalized.degenerate) {
      out.warnings.push_back("topic '" + b.topic_id +
                             "' is constant or has a single sample; mapped to 0.5");
    }
    if (b.transform == LeafTransform::Complement) {
      for (auto& p : normalized.points) p.degree = 1.0 - p.degree;
    }
    out.leaves.emplace(b.leaf_id, std::move(normalized.points));
  }
  return out;
}

using Decimal = boost::multiprecision::cpp_dec_float_50;

Decimal to_decimal(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return Decimal(std::string(buf, ptr));
}

double to_double(const Decimal& x) {
  const std::string text = x.str(45, std::ios_base::scientific);
  return std::strtod(text.c_str(), nullptr);
}

}  // namespace

BoundSeries bind_series_to_leaves(const GoalGraph& kb, std::span<const LeafBinding> bindings,
                                  std::span<const TopicSeries> series) {
  return bind_impl(&kb, bindings, series);
}

BoundSeries bind_series(std::span<const LeafBinding> bindings,
                        std::span<const TopicSeries> series) {
  return bind_impl(nullptr, bindings, series);
}

double aggregate_expert_estimates(std::span<const ExpertEstimate> estimates) {
  if (estimates.empty()) throw EstimateError("no expert estimates to aggregate");
  const auto& first = estimates.front();
  Decimal weighted = 0;
  Decimal total = 0;
  for (const auto& e : estimates) {
    if (e.child != first.child || e.parent != first.parent) {
      throw EstimateError("estimates mix edges " + first.child + " -> " + first.parent +
                          " and " + e.child + " -> " + e.parent);
    }
    if (!std::isfinite(e.estimate) || std::abs(e.estimate) > 1.0) {
      throw EstimateError("estimate of expert '" + e.expert_id + "' is outside [-1,1]");
    }
    if (!std::isfinite(e.competence) || e.competence <= 0.0) {
      throw EstimateError("competence of expert '" + e.expert_id + "' must be positive");
    }
    const Decimal c = to_decimal(e.competence);
    weighted += c * to_decimal(e.estimate);
    total += c;
  }
  return to_double(weighted / total);
}

std::vector<AggregatedEdge> aggregate_by_edge(std::span<const ExpertEstimate> estimates) {
  std::vector<std::vector<ExpertEstimate>> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  for (const auto& e : estimates) {
    auto [it, added] = slot.emplace(std::pair{e.child, e.parent}, groups.size());
    if (added) groups.emplace_back();
    groups[it->second].push_back(e);
  }
  std::vector<AggregatedEdge> out;
  for (const auto& g : groups) {
    out.push_back({g.front().child, g.front().parent, aggregate_expert_estimates(g), g.size()});
  }
  return out;
}

GoalGraph apply_edge_weights(const GoalGraph& kb, std::span<const AggregatedEdge> weights) {
  GoalGraph result = kb;
  for (const auto& w : weights) {
    auto it = std::find_if(result.edges.begin(), result.edges.end(), [&](const InfluenceEdge& e) {
      return e.child == w.child && e.parent == w.parent;
    });
    if (it == result.edges.end()) {
      throw EstimateError("edge " + w.child + " -> " + w.parent + " is not in the knowledge base");
    }
    it->weight = w.weight;
  }
  return result;
}

}  // namespace conflictkb
