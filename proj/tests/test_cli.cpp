#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "conflictkb/cli.hpp"
#include "conflictkb/json_io.hpp"

using namespace conflictkb;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) {
  return (fs::path(CONFLICTKB_TEST_DATA) / "fixtures" / name).string();
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("conflictkb_cli_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  [[nodiscard]] std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("pattern writes an 18-node document") {
  TempDir tmp;
  const auto r = run({"pattern", "--subject-a", "Alice", "--subject-b", "Bob", "-o", tmp.file("kb.json")});
  REQUIRE(r.code == 0);
  const auto kb = kb_from_json(read_json_file(tmp.file("kb.json")));
  CHECK(kb.nodes.size() == 18);
  CHECK(kb.edges.size() == 18);
  CHECK(run({"validate", tmp.file("kb.json")}).out == "valid: 18 nodes, 18 edges, 0 groups\n");

  CHECK(run({"pattern", "--subject-a", "Same", "--subject-b", "Same"}).code == 2);
}

TEST_CASE("eval on all-zero leaves is a draw") {
  TempDir tmp;
  REQUIRE(run({"pattern", "--subject-a", "A", "--subject-b", "B", "-o", tmp.file("kb.json")}).code == 0);
  write_text_file(tmp.file("zeros.json"), "{}");
  const auto r = run({"eval", tmp.file("kb.json"), "--leaves", tmp.file("zeros.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("g=0\n") != std::string::npos);
  CHECK(r.out.find("winner=Draw\n") != std::string::npos);

  write_text_file(tmp.file("a2.json"), R"({"a2": 1})");
  const auto j = run({"eval", tmp.file("kb.json"), "--leaves", tmp.file("a2.json"), "--json"});
  REQUIRE(j.code == 0);
  CHECK(Json::parse(j.out)["result"]["winner"] == "SubjectB");

  const auto logic = run({"eval", tmp.file("kb.json"), "--leaves", tmp.file("zeros.json"), "--semantics", "logic"});
  CHECK(logic.out == "A=0\nA1=1\nB=0\nB1=1\n");

  write_text_file(tmp.file("bad.json"), R"({"a2": 3})");
  CHECK(run({"eval", tmp.file("kb.json"), "--leaves", tmp.file("bad.json")}).code == 2);
}

TEST_CASE("validate reports cycles") {
  const auto r = run({"validate", fixture("cyclic_kb.json")});
  CHECK(r.code == 2);
  CHECK(r.out.find("cycle") != std::string::npos);
  CHECK(r.out.find("x") != std::string::npos);
  CHECK(r.out.find("y") != std::string::npos);
}

TEST_CASE("pipeline through ingest") {
  TempDir tmp;
  REQUIRE(run({"pattern", "--subject-a", "A", "--subject-b", "B", "-o", tmp.file("kb.json")}).code == 0);
  const auto ingest = run({"ingest", fixture("topics.csv"), "--bindings", fixture("bindings.json"), "--kb",
                           tmp.file("kb.json"), "-o", tmp.file("series.json")});
  REQUIRE(ingest.code == 0);
  const auto series = series_from_json(read_json_file(tmp.file("series.json")));
  CHECK(series.size() == 3);
  CHECK(series.at("a3")[0].degree == 1.0);

  const auto r = run({"eval", tmp.file("kb.json"), "--leaves", fixture("leaves.json"), "--series",
                      tmp.file("series.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out.starts_with("date,g,goal_a,goal_b,self_esteem_a,self_esteem_b,winner\n"));
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

  const auto at = run({"eval", tmp.file("kb.json"), "--leaves", fixture("leaves.json"), "--series",
                       tmp.file("series.json"), "--at", "2024-03-09"});
  CHECK(at.code == 2);

  const auto unknown = run({"ingest", fixture("topics.csv"), "--bindings", fixture("bindings.json"), "--kb",
                            fixture("cyclic_kb.json")});
  CHECK(unknown.code == 2);
}

TEST_CASE("aggregate and truth-table") {
  const auto agg = run({"aggregate", fixture("estimates.json")});
  REQUIRE(agg.code == 0);
  CHECK(Json::parse(agg.out)[0]["weight"] == 0.7);

  const auto tt = run({"truth-table", "--side", "B"});
  REQUIRE(tt.code == 0);
  CHECK(tt.out.ends_with("rows=128 B_true=65 forms_agree=yes\n"));
  const auto tj = run({"truth-table", "--json"});
  CHECK(Json::parse(tj.out)["rows"].size() == 128);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"eval"}).code == 1);
  CHECK(run({"pattern", "--subject-a", "A"}).code == 1);
  CHECK(run({"truth-table", "--side", "C"}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"validate", "/no/such/file.json"}).code == 2);
}

TEST_CASE("the built binary reports exit codes") {
  const std::string cli = CONFLICTKB_CLI;
  int status = std::system((cli + " validate " + fixture("cyclic_kb.json") + " > /dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 2);
  status = std::system((cli + " frobnicate > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 1);
}
