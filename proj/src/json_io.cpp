#include "conflictkb/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace conflictkb {

namespace {

const Json& member(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(where + ": missing \"" + key + "\"");
  return *it;
}

std::string get_string(const Json& obj, const char* key, const std::string& where) {
  const Json& v = member(obj, key, where);
  if (!v.is_string()) throw FormatError(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

double get_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw FormatError(where + " must be a number");
  return v.get<double>();
}

const Json& get_array(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  static const Json kEmpty = Json::array();
  if (it == obj.end()) return kEmpty;
  if (!it->is_array()) throw FormatError(where + ": \"" + key + "\" must be an array");
  return *it;
}

void require_object(const Json& doc, const std::string& what) {
  if (!doc.is_object()) throw FormatError(what + " must be a JSON object");
}

}  // namespace

Json kb_to_json(const GoalGraph& kb) {
  Json nodes = Json::array();
  for (const auto& n : kb.nodes) {
    Json j{{"id", n.id}, {"label", n.label}, {"kind", std::string(to_string(n.kind))}};
    if (n.role != NodeRole::None) j["role"] = std::string(to_string(n.role));
    nodes.push_back(std::move(j));
  }
  Json edges = Json::array();
  for (const auto& e : kb.edges) {
    edges.push_back({{"child", e.child}, {"parent", e.parent}, {"weight", e.weight}});
  }
  Json groups = Json::array();
  for (const auto& g : kb.groups) {
    groups.push_back({{"members", g.members}, {"threshold", g.activity_threshold}});
  }
  return {{"nodes", nodes}, {"edges", edges}, {"groups", groups}};
}

GoalGraph kb_from_json(const Json& doc) {
  require_object(doc, "knowledge base");
  GoalGraph kb;
  for (const auto& j : get_array(doc, "nodes", "knowledge base")) {
    const std::string where = "node #" + std::to_string(kb.nodes.size());
    require_object(j, where);
    GoalNode n;
    n.id = get_string(j, "id", where);
    n.label = j.contains("label") ? get_string(j, "label", where) : n.id;
    const auto kind = parse_node_kind(get_string(j, "kind", where));
    if (!kind) throw FormatError(where + ": kind must be \"leaf\" or \"internal\"");
    n.kind = *kind;
    if (j.contains("role") && !j["role"].is_null()) {
      const auto role = parse_node_role(get_string(j, "role", where));
      if (!role) throw FormatError(where + ": unknown role \"" + j["role"].get<std::string>() + "\"");
      n.role = *role;
    }
    kb.nodes.push_back(std::move(n));
  }
  for (const auto& j : get_array(doc, "edges", "knowledge base")) {
    const std::string where = "edge #" + std::to_string(kb.edges.size());
    require_object(j, where);
    kb.edges.push_back({get_string(j, "child", where), get_string(j, "parent", where),
                        get_number(member(j, "weight", where), where + " weight")});
  }
  for (const auto& j : get_array(doc, "groups", "knowledge base")) {
    const std::string where = "group #" + std::to_string(kb.groups.size());
    require_object(j, where);
    CompatibilityGroup g;
    const Json& members = member(j, "members", where);
    if (!members.is_array()) throw FormatError(where + ": members must be an array");
    for (const auto& m : members) {
      if (!m.is_string()) throw FormatError(where + ": members must be strings");
      g.members.push_back(m.get<std::string>());
    }
    if (j.contains("threshold")) g.activity_threshold = get_number(j["threshold"], where + " threshold");
    kb.groups.push_back(std::move(g));
  }
  return kb;
}

std::string canonical_kb_document(const GoalGraph& kb) {
  GoalGraph sorted = kb;
  std::sort(sorted.nodes.begin(), sorted.nodes.end(),
            [](const GoalNode& x, const GoalNode& y) { return x.id < y.id; });
  std::sort(sorted.edges.begin(), sorted.edges.end(),
            [](const InfluenceEdge& x, const InfluenceEdge& y) {
              return std::tie(x.parent, x.child) < std::tie(y.parent, y.child);
            });
  std::sort(sorted.groups.begin(), sorted.groups.end(),
            [](const CompatibilityGroup& x, const CompatibilityGroup& y) {
              return x.members < y.members;
            });
  return kb_to_json(sorted).dump(2) + "\n";
}

DegreeAssignment degrees_from_json(const Json& doc) {
  require_object(doc, "leaf degrees");
  DegreeAssignment out;
  for (const auto& [name, value] : doc.items()) {
    out.emplace(name, get_number(value, "degree of '" + name + "'"));
  }
  return out;
}

Json degrees_to_json(const DegreeMap& degrees) {
  Json j = Json::object();
  for (const auto& [id, d] : degrees) j[id] = d;
  return j;
}

ReflexiveState state_from_json(const Json& doc) {
  ReflexiveState s;
  overlay_state(s, doc);
  return s;
}

void overlay_state(ReflexiveState& s, const Json& doc) {
  require_object(doc, "reflexive state");
  for (const auto& [name, value] : doc.items()) {
    const auto field = find_reflexive_variable(name);
    if (!field) throw FormatError("unknown reflexive variable '" + name + "'");
    try {
      s.**field = Grade(get_number(value, "value of '" + name + "'"));
    } catch (const std::domain_error& e) {
      throw FormatError("variable '" + name + "': " + e.what());
    }
  }
}

Json state_to_json(const ReflexiveState& s) {
  Json j = Json::object();
  for (const auto& v : kReflexiveVariables) j[std::string(v.name)] = (s.*v.member).value();
  return j;
}

Json outcome_to_json(const ReflexiveOutcome& o) {
  return {{"A", o.readiness_a.value()},
          {"A1", o.self_esteem_a.value()},
          {"B", o.readiness_b.value()},
          {"B1", o.self_esteem_b.value()}};
}

Json result_to_json(const ConflictResult& r) {
  return {{"g", r.g_degree},
          {"goal_a", r.goal_a_degree},
          {"goal_b", r.goal_b_degree},
          {"self_esteem_a", r.self_esteem_a_degree},
          {"self_esteem_b", r.self_esteem_b_degree},
          {"winner", std::string(to_string(r.winner))}};
}

SeriesMap series_from_json(const Json& doc) {
  require_object(doc, "series document");
  SeriesMap out;
  for (const auto& [leaf, points] : doc.items()) {
    if (!points.is_array()) throw FormatError("series '" + leaf + "' must be an array");
    DegreeSeries s;
    for (const auto& p : points) {
      const std::string where = "series '" + leaf + "' point #" + std::to_string(s.size());
      require_object(p, where);
      const std::string text = get_string(p, "date", where);
      const auto date = Date::parse(text);
      if (!date) throw FormatError(where + ": invalid date '" + text + "'");
      s.push_back({*date, get_number(member(p, "degree", where), where + " degree")});
    }
    out.emplace(leaf, std::move(s));
  }
  return out;
}

Json series_to_json(const SeriesMap& series) {
  Json j = Json::object();
  for (const auto& [leaf, points] : series) {
    Json arr = Json::array();
    for (const auto& p : points) arr.push_back({{"date", p.date.to_string()}, {"degree", p.degree}});
    j[leaf] = std::move(arr);
  }
  return j;
}

std::vector<ExpertEstimate> estimates_from_json(const Json& doc) {
  if (!doc.is_array()) throw FormatError("expert estimates must be a JSON array");
  std::vector<ExpertEstimate> out;
  for (const auto& j : doc) {
    const std::string where = "estimate #" + std::to_string(out.size());
    require_object(j, where);
    out.push_back({get_string(j, "expert_id", where), get_string(j, "child", where),
                   get_string(j, "parent", where),
                   get_number(member(j, "estimate", where), where + " estimate"),
                   get_number(member(j, "competence", where), where + " competence")});
  }
  return out;
}

std::vector<LeafBinding> bindings_from_json(const Json& doc) {
  if (!doc.is_array()) throw FormatError("bindings must be a JSON array");
  std::vector<LeafBinding> out;
  for (const auto& j : doc) {
    const std::string where = "binding #" + std::to_string(out.size());
    require_object(j, where);
    LeafBinding b{get_string(j, "topic", where), get_string(j, "leaf", where),
                  LeafTransform::Identity};
    if (j.contains("transform")) {
      const auto t = parse_leaf_transform(get_string(j, "transform", where));
      if (!t) throw FormatError(where + ": transform must be \"identity\" or \"complement\"");
      b.transform = *t;
    }
    out.push_back(std::move(b));
  }
  return out;
}

GraphAdditions additions_from_json(const Json& doc) {
  const GoalGraph g = kb_from_json(doc);
  return {g.nodes, g.edges, g.groups};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("failed writing " + path.string());
}

}  // namespace conflictkb
