#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "kgraph/kgraph.hpp"

namespace kgraph {

using json = nlohmann::json;

inline json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // locate the byte offset as line:column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail("ParseError", where + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                           "malformed JSON");
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("ParseError", path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

inline Vec vec_from_json(const json& j) {
  if (!j.is_array()) fail("ParseError", "expected an integer array, got " + j.dump());
  Vec v;
  for (const auto& x : j) {
    if (!x.is_number_integer()) fail("ParseError", "expected an integer array, got " + j.dump());
    v.push_back(x.get<std::int64_t>());
  }
  return v;
}

inline json vec_to_json(const Vec& v) {
  json j = json::array();
  for (auto x : v) {
    if (x >= kInf)
      j.push_back("inf");
    else
      j.push_back(x);
  }
  return j;
}

inline GraphSpec graph_spec_from_json(const json& j) {
  GraphSpec spec;
  try {
    spec.rank = j.at("rank").get<int>();
    for (const auto& v : j.at("vertices")) spec.vertices.push_back(v.get<std::string>());
    for (const auto& e : j.at("edges"))
      spec.edges.push_back({e.at("id").get<std::string>(), e.at("color").get<int>(),
                            e.at("src").get<std::string>(), e.at("tgt").get<std::string>()});
    if (j.contains("squares"))
      for (const auto& s : j.at("squares")) {
        GraphSpec::SquareSpec sq;
        sq.first = {s.at("first").at(0).get<std::string>(), s.at("first").at(1).get<std::string>()};
        sq.second = {s.at("second").at(0).get<std::string>(), s.at("second").at(1).get<std::string>()};
        spec.squares.push_back(sq);
      }
  } catch (const json::exception& e) {
    fail("ParseError", std::string("graph description: ") + e.what());
  }
  return spec;
}

inline json graph_spec_to_json(const KGraph& g) {
  json j;
  j["rank"] = g.rank();
  j["vertices"] = g.vertex_names();
  json edges = json::array();
  for (const Edge& e : g.edges())
    edges.push_back({{"id", e.id}, {"color", e.color + 1}, {"src", g.vertex_name(e.src)},
                     {"tgt", g.vertex_name(e.tgt)}});
  j["edges"] = edges;
  return j;
}

// A graph file describes either a finite presentation, a finite Omega_{k,m}
// ({"omega": k, "extent": [...]}) or the infinite Omega_{k,inf} ({"omega": k}).
struct OmegaInfinite {
  int k = 1;
};

using GraphSource = std::variant<KGraph, OmegaInfinite>;

inline GraphSource graph_from_json(const json& j, const std::string& name) {
  if (j.is_object() && j.contains("omega")) {
    int k = j.at("omega").get<int>();
    if (k < 1) fail("ParseError", name + ": omega rank must be positive");
    if (!j.contains("extent")) return OmegaInfinite{k};
    KGraph g = build_omega(k, vec_from_json(j.at("extent")));
    g.set_name(name);
    return g;
  }
  KGraph g = validate(graph_spec_from_json(j));
  g.set_name(name);
  return g;
}

inline GraphSource load_graph_source(const std::string& path) {
  return graph_from_json(read_json_file(path), path);
}

inline KGraph load_graph(const std::string& path) {
  GraphSource src = load_graph_source(path);
  if (auto* g = std::get_if<KGraph>(&src)) return *g;
  fail("InfiniteDegreeUnsupportedHere", path + " describes Omega_{k,inf}; a finite graph is needed");
}

}  // namespace kgraph
