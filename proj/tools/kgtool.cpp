#include <iostream>

#include <CLI11.hpp>

#include "kgraph/cli.hpp"

int main(int argc, char** argv) {
  kgraph::Command cmd;
  CLI::App app{"k-graph path categories, groupoids and equivalence verifiers"};
  app.add_option("command", cmd.name, "validate | paths | mce | kp-check | groupoid | coe-check | eventual-check | "
                                      "stabilize | stab-iso-check | conjugacy-check | aperiodicity")
      ->required();
  app.add_option("args", cmd.args, "graph files and path literals");
  app.add_option("--depth", cmd.depth, "search and tabulation depth")->capture_default_str();
  app.add_option("--seed", cmd.seed, "sampling seed")->capture_default_str();
  app.add_option("--ring", cmd.ring, "z, q or z/n")->capture_default_str();
  app.add_option("--samples", cmd.samples, "number of sampled points or arrows");
  app.add_option("--degrees", cmd.degrees, "degree box, e.g. 2 or 2,1");
  app.add_option("--map", cmd.map, "map description (JSON)");
  app.add_option("--family", cmd.family, "cocycle family tables (JSON)");
  app.add_option("--samples-file", cmd.sample_file, "sample points (JSON)");
  app.add_option("--code", cmd.code, "block codes and partition (JSON)");
  app.add_option("--lag", cmd.lag, "constant lag for eventual-check");
  app.add_flag("--timing", cmd.timing, "add wall time to the report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  kgraph::json report = kgraph::run(cmd);
  std::cout << report.dump(2) << "\n";
  return kgraph::exit_code(report);
}
