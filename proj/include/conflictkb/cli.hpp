#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace conflictkb {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalid = 2;

/// Runs one CLI invocation. @p args excludes the program name.
///
///   validate <kb>
///   pattern --subject-a <name> --subject-b <name> [-o <file>]
///   extend <kb> <additions> [-o <file>]
///   eval <kb> --leaves <file> [--semantics logic|weighted] [--epsilon x]
///        [--series <file> [--at <date>]] [--json]
///   truth-table [--side A|B] [--json]
///   ingest <csv> --bindings <file> [--kb <file>] [-o <file>]
///   aggregate <estimates.json> [--kb <file> [-o <file>]]
///   serve --port <n> [--scenario <file>] [--host <addr>]
///
/// Returns 0 on success. Usage errors give 1; bad input gives 2.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace conflictkb
