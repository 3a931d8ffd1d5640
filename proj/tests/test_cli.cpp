#include <catch_amalgamated.hpp>

#include "common.hpp"
#include "kgraph/cli.hpp"

using namespace kgraph;

namespace {

Command cmd(std::string name, std::vector<std::string> args) {
  Command c;
  c.name = std::move(name);
  for (auto& a : args)
    if (a.find(".json") != std::string::npos && a.find('/') == std::string::npos) a = fixture(a);
  c.args = std::move(args);
  return c;
}

std::string cli_file(const std::string& name) { return fixture("cli/" + name); }

}  // namespace

TEST_CASE("basic commands", "[cli]") {
  auto v = run(cmd("validate", {"tt2.json"}));
  CHECK(exit_code(v) == 0);
  CHECK(v["result"]["rank"] == 2);
  CHECK(v["result"]["flags"]["finitely_aligned"] == true);
  CHECK(v["result"]["squares"] == 2);

  auto m = run(cmd("mce", {"t2.json", "b", "r"}));
  CHECK(m["result"]["mce"] == json::array({"b.r"}));

  auto p = run(cmd("paths", {"tt2.json", "1,1"}));
  CHECK(p["result"]["count"] == 2);

  auto kp = run(cmd("kp-check", {"t2.json"}));
  CHECK(exit_code(kp) == 0);
  CHECK(kp["reports"]["kp"]["checks"].size() == 4);

  auto om = run(cmd("validate", {"omega2.json"}));
  CHECK(om["result"]["omega"] == 2);
}

TEST_CASE("errors are reports", "[cli]") {
  auto u = run(cmd("frobnicate", {"t2.json"}));
  CHECK(u["error"]["kind"] == "UnknownCommand");
  CHECK(exit_code(u) == 2);

  auto bad = run(cmd("validate", {cli_file("malformed.json")}));
  CHECK(bad["error"]["kind"] == "ParseError");
  // line:column of the offending token
  CHECK(bad["error"]["detail"].get<std::string>().find("malformed.json:3:") != std::string::npos);

  auto cube = run(cmd("validate", {"cube3_bad.json"}));
  CHECK(cube["error"]["kind"] == "CubeConditionFailure");

  Command ring = cmd("kp-check", {"t2.json"});
  ring.ring = "r";
  CHECK(run(ring)["error"]["kind"] == "ParseError");
  ring.ring = "z/5";
  CHECK(exit_code(run(ring)) == 0);

  CHECK(run(cmd("coe-check", {"t2.json"}))["error"]["kind"] == "ParseError");
}

TEST_CASE("verifier commands", "[cli]") {
  Command coe = cmd("coe-check", {"omega1.json", "omega2.json"});
  coe.map = cli_file("diag.json");
  auto r = run(coe);
  CHECK(exit_code(r) == 0);
  CHECK(r["reports"]["coe"]["pass"] == true);
  CHECK(r["reports"]["period"]["pass"] == true);

  Command rel = cmd("coe-check", {"t2.json", "t2_relabeled.json"});
  rel.map = cli_file("t2_relabel.json");
  CHECK(exit_code(run(rel)) == 0);

  Command ev = cmd("eventual-check", {"tt2.json", "tt2_commuting.json"});
  ev.map = cli_file("skeleton.json");
  auto e = run(ev);
  CHECK(exit_code(e) == 1);
  auto w = e["reports"]["eventual"]["checks"][0]["witnesses"];
  REQUIRE_FALSE(w.empty());
  CHECK(w[0].get<std::string>().find("m=") != std::string::npos);

  Command conj = cmd("conjugacy-check", {"tt2.json", "tt2.json"});
  conj.code = cli_file("tt2_shift_code.json");
  auto cj = run(conj);
  CHECK(exit_code(cj) == 0);
  CHECK(cj["result"]["delay"] == json::array({1, 0}));
  conj.code = cli_file("tt2_broken_partition.json");
  CHECK(run(conj)["error"]["kind"] == "EquivalenceClassMismatch");
  conj.code = cli_file("tt2_broken_table.json");
  CHECK(run(conj)["error"]["kind"] == "WindowInconsistency");

  CHECK(exit_code(run(cmd("stab-iso-check", {"t2.json"}))) == 0);
  CHECK(exit_code(run(cmd("stabilize", {"strip.json"}))) == 0);
  CHECK(run(cmd("aperiodicity", {"t2.json"}))["result"]["verdict"] == "Periodic");
}

TEST_CASE("reports are byte-identical for a fixed seed", "[cli][determinism]") {
  Command g = cmd("groupoid", {"tt2.json"});
  g.seed = 5;
  g.samples = 60;
  CHECK(run(g).dump() == run(g).dump());
  Command other = g;
  other.seed = 6;
  CHECK(run(g).dump() != run(other).dump());
}
