#pragma once

/// @file
/// JSON documents: knowledge base, flat leaf/state maps, degree series,
/// expert estimates and topic bindings. Numbers are written with the
/// shortest representation that round-trips to the same double.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conflictkb/conflict_pattern.hpp"
#include "conflictkb/goal_graph.hpp"
#include "conflictkb/ingest.hpp"
#include "conflictkb/reflexive.hpp"

namespace conflictkb {

using Json = nlohmann::json;

/// Document does not match the expected schema.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"nodes": [{id, label, kind, role}], "edges": [{child, parent, weight}],
///  "groups": [{members, threshold}]}. "role" is omitted for untagged nodes.
[[nodiscard]] Json kb_to_json(const GoalGraph& kb);
/// Structural checks only; call validate() for graph invariants.
/// @throws FormatError
[[nodiscard]] GoalGraph kb_from_json(const Json& doc);

/// Nodes sorted by id, edges by (parent, child), groups by member list,
/// rendered with two-space indentation and a trailing newline.
[[nodiscard]] std::string canonical_kb_document(const GoalGraph& kb);

/// Flat {name: number} object. @throws FormatError
[[nodiscard]] DegreeAssignment degrees_from_json(const Json& doc);
[[nodiscard]] Json degrees_to_json(const DegreeMap& degrees);

/// Flat {variable: grade} object over the 13 reflexive variables; missing
/// variables are 0. @throws FormatError for unknown names or values outside
/// [0,1].
[[nodiscard]] ReflexiveState state_from_json(const Json& doc);
/// Writes the variables named in @p doc into @p state. @throws FormatError
void overlay_state(ReflexiveState& state, const Json& doc);
[[nodiscard]] Json state_to_json(const ReflexiveState& s);

/// {"A": .., "A1": .., "B": .., "B1": ..}
[[nodiscard]] Json outcome_to_json(const ReflexiveOutcome& o);
[[nodiscard]] Json result_to_json(const ConflictResult& r);

/// {leaf: [{"date": "YYYY-MM-DD", "degree": x}, ...]} @throws FormatError
[[nodiscard]] SeriesMap series_from_json(const Json& doc);
[[nodiscard]] Json series_to_json(const SeriesMap& series);

/// [{expert_id, child, parent, estimate, competence}] @throws FormatError
[[nodiscard]] std::vector<ExpertEstimate> estimates_from_json(const Json& doc);

/// [{topic, leaf, transform}] with transform "identity" (default) or
/// "complement". @throws FormatError
[[nodiscard]] std::vector<LeafBinding> bindings_from_json(const Json& doc);

[[nodiscard]] GraphAdditions additions_from_json(const Json& doc);

/// @throws FormatError if the file cannot be read or is not JSON.
[[nodiscard]] Json read_json_file(const std::filesystem::path& path);
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace conflictkb
