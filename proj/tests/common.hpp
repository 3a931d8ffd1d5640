#pragma once

#include <string>

#include "kgraph/io.hpp"
#include "oracles.hpp"

inline std::string fixture(const std::string& name) { return std::string(KGRAPH_FIXTURES) + "/" + name; }

inline kgraph::KGraph load_fixture(const std::string& name) { return kgraph::load_graph(fixture(name)); }

inline oracle::RawGraph raw_fixture(const std::string& name) {
  return oracle::RawGraph(kgraph::graph_spec_from_json(kgraph::read_json_file(fixture(name))));
}
