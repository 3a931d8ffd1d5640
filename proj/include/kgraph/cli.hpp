#pragma once

// Command dispatch for kgtool. run() never throws: failures become an
// "error" member so that every invocation yields one JSON document.

#include <chrono>

#include "kgraph/io.hpp"
#include "kgraph/steinberg.hpp"
#include "kgraph/suites.hpp"
#include "kgraph/twosided.hpp"

namespace kgraph {

struct Command {
  std::string name;
  std::vector<std::string> args;
  int depth = 3;
  std::uint64_t seed = 0;
  std::string ring = "z";
  std::size_t samples = 0;  // 0: the command's default
  std::string degrees;      // box bound, one integer or a vector
  std::string map, family, sample_file, code, lag;
  bool timing = false;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate",      "paths",           "mce",         "kp-check",
                                              "groupoid",      "coe-check",       "eventual-check", "stabilize",
                                              "stab-iso-check", "conjugacy-check", "aperiodicity"};
  return names;
}

inline json report_json(const Report& r) {
  json env = json::object();
  for (const auto& [k, v] : r.envelope) env[k] = v;
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"checked", c.checked}, {"failed", c.failed}, {"pass", c.pass()},
                      {"witnesses", c.witnesses}});
  return {{"pass", r.pass()}, {"envelope", env}, {"checks", checks}};
}

namespace cli {

inline void need_args(const Command& c, std::size_t n, const char* usage) {
  if (c.args.size() < n) fail("ParseError", c.name + " expects " + usage);
}

inline std::size_t samples_or(const Command& c, std::size_t d) { return c.samples ? c.samples : d; }

inline std::vector<Vec> degree_box(const Command& c, int k, std::int64_t d) {
  if (c.degrees.empty()) return box(Vec(static_cast<std::size_t>(k), d));
  Vec v = parse_vec(c.degrees);
  if (v.size() == 1) v.assign(static_cast<std::size_t>(k), v[0]);
  if (static_cast<int>(v.size()) != k) fail("ParseError", "--degrees needs 1 or " + std::to_string(k) + " entries");
  return box(v);
}

inline std::vector<Vec> merge(std::vector<Vec> a, const std::vector<Vec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

inline json boundary_list(const KGraph& g, const std::vector<BoundaryPath>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(format_boundary(g, x));
  return out;
}

inline std::string get_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) fail("ParseError", where + ": missing string field '" + key + "'");
  return j.at(key).get<std::string>();
}

inline int vertex_of(const KGraph& g, const std::string& name) {
  if (!g.has_vertex(name)) fail("ParseError", "unknown vertex '" + name + "' in " + g.name());
  return g.vertex_index(name);
}

inline int edge_of(const KGraph& g, const std::string& name) {
  if (!g.has_edge(name)) fail("ParseError", "unknown edge '" + name + "' in " + g.name());
  return g.edge_index(name);
}

// {"v": "w", ...} -> index vector; an absent table maps by position
inline std::vector<int> name_map(const json& j, const char* key, std::size_t n, const std::function<int(const std::string&, bool)>& idx) {
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<int>(i);
  if (!j.contains(key)) return out;
  std::vector<bool> set(n, false);
  for (const auto& [a, b] : j.at(key).items()) {
    if (!b.is_string()) fail("ParseError", std::string("map.") + key + " values must be names");
    auto from = static_cast<std::size_t>(idx(a, true));
    out[from] = idx(b.get<std::string>(), false);
    set[from] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!set[i]) fail("ParseError", std::string("map.") + key + " must list every entry");
  return out;
}

inline std::pair<std::vector<int>, std::vector<int>> relabel_tables(const json& j, const KGraph& g1, const KGraph& g2) {
  auto vm = name_map(j, "vertices", g1.num_vertices(),
                     [&](const std::string& s, bool first) { return vertex_of(first ? g1 : g2, s); });
  auto em = name_map(j, "edges", g1.edges().size(),
                     [&](const std::string& s, bool first) { return edge_of(first ? g1 : g2, s); });
  return {vm, em};
}

inline BoundaryMap<BoundaryPath, BoundaryPath> graph_map(const json& j, const KGraph& g1, const KGraph& g2) {
  std::string kind = get_string(j, "kind", "map");
  if (kind == "identity") {
    if (&g1 != &g2 && graph_spec_to_json(g1) != graph_spec_to_json(g2)) fail("NotAnIsomorphism", "identity between different graphs");
    return identity_map<BoundaryPath>();
  }
  if (kind == "relabel") {
    auto [vm, em] = relabel_tables(j, g1, g2);
    return relabel_map(g1, g2, vm, em);
  }
  if (kind == "same_skeleton") return same_skeleton_homeo(g1, g2);
  if (kind == "perturb_first") {
    if (graph_spec_to_json(g1) != graph_spec_to_json(g2)) fail("NotAnIsomorphism", "perturb_first maps a graph to itself");
    if (!j.contains("color") || !j.at("color").is_number_integer()) fail("ParseError", "map: perturb_first needs a color");
    return perturb_first_edge(g1, j.at("color").get<int>() - 1, relabel_tables(j, g1, g1).second);
  }
  fail("ParseError", "map kind '" + kind + "' is not defined between finite graphs");
}

inline OmegaBijection omega_map(const json& j, int k1, int k2) {
  std::string kind = get_string(j, "kind", "map");
  OmegaBijection b;
  if (kind == "identity" || kind == "omega_identity")
    b = omega_identity(k1);
  else if (kind == "diagonal" || kind == "omega_diagonal")
    b = omega_diagonal(k1, k2);
  else if (kind == "swap" || kind == "omega_swap")
    b = omega_swap();
  else
    fail("ParseError", "map kind '" + kind + "' is not defined between Omega spaces");
  if (b.k1 != k1 || b.k2 != k2) fail("RankMismatch", "map " + b.name + " does not go from rank " + std::to_string(k1) + " to " + std::to_string(k2));
  return b;
}

// rows {"m": [..], "cylinder": path, "N": [..], "f": [..], "g": [..]}
inline CocycleTable<GraphSpace> table_from_json(const json& rows, const KGraph& g, const std::string& where) {
  CocycleTable<GraphSpace> t;
  if (!rows.is_array()) fail("ParseError", where + " must be an array of rows");
  for (const auto& r : rows) {
    if (!r.contains("m") || !r.contains("N") || !r.contains("f") || !r.contains("g"))
      fail("ParseError", where + ": rows need m, cylinder, N, f and g");
    Vec m = vec_from_json(r.at("m"));
    Path l = g.parse_path(get_string(r, "cylinder", where));
    t.rows[m].push_back({{l, vec_from_json(r.at("N"))}, vec_from_json(r.at("f")), vec_from_json(r.at("g"))});
  }
  return t;
}

inline std::vector<BoundaryPath> points_from_json(const json& j, const char* key, const KGraph& g) {
  std::vector<BoundaryPath> out;
  if (!j.contains(key)) return out;
  for (const auto& s : j.at(key)) {
    if (!s.is_string()) fail("ParseError", std::string("samples.") + key + " must hold path literals");
    out.push_back(parse_boundary(g, s.get<std::string>()));
  }
  return out;
}

inline json run_validate(const Command& c) {
  need_args(c, 1, "<graph.json>");
  GraphSource src = load_graph_source(c.args[0]);
  if (auto* o = std::get_if<OmegaInfinite>(&src))
    return {{"result", {{"omega", o->k}, {"rank", o->k}, {"vertices", "infinite"}}}};
  const KGraph& g = std::get<KGraph>(src);
  const auto& f = g.flags();
  std::size_t squares = 0;
  for (int a = 0; a < g.rank(); ++a)
    for (int b = a + 1; b < g.rank(); ++b)
      for (std::size_t v = 0; v < g.num_vertices(); ++v)
        squares += g.paths(static_cast<int>(v), unit_vec(g.rank(), a) + unit_vec(g.rank(), b)).size();
  json flags = {{"row_finite", f.row_finite},           {"has_sources", f.has_sources},
                {"has_sinks", f.has_sinks},             {"finitely_aligned", f.finitely_aligned},
                {"locally_convex", f.locally_convex},   {"finite_vertices", f.finite_vertices}};
  return {{"result",
           {{"rank", g.rank()}, {"vertices", g.num_vertices()}, {"edges", g.edges().size()}, {"squares", squares},
            {"flags", flags}}}};
}

inline json run_paths(const Command& c) {
  need_args(c, 2, "<graph.json> <degree> [vertex]");
  KGraph g = load_graph(c.args[0]);
  Vec n = parse_vec(c.args[1]);
  if (static_cast<int>(n.size()) != g.rank()) fail("RankMismatch", "degree " + to_string(n) + " in a rank " + std::to_string(g.rank()) + " graph");
  json out = json::array();
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (c.args.size() > 2 && static_cast<int>(v) != vertex_of(g, c.args[2])) continue;
    for (const Path& p : g.paths(static_cast<int>(v), n)) out.push_back(g.format(p));
  }
  return {{"result", {{"degree", vec_to_json(n)}, {"count", out.size()}, {"paths", out}}}};
}

inline json run_mce(const Command& c) {
  need_args(c, 3, "<graph.json> <path> <path>");
  KGraph g = load_graph(c.args[0]);
  Path a = g.parse_path(c.args[1]), b = g.parse_path(c.args[2]);
  json mce = json::array(), mins = json::array();
  for (const Path& p : g.mce(a, b)) mce.push_back(g.format(p));
  for (const auto& [x, y] : g.lambda_min(a, b)) mins.push_back({g.format(x), g.format(y)});
  return {{"result", {{"mce", mce}, {"lambda_min", mins}}}};
}

inline json run_kp(const Command& c) {
  need_args(c, 1, "<graph.json>");
  KGraph g = load_graph(c.args[0]);
  Report r;
  if (c.ring == "z")
    r = verify_kp(g, IntRing{}, c.depth);
  else if (c.ring == "q")
    r = verify_kp(g, RatRing{}, c.depth);
  else if (c.ring.rfind("z/", 0) == 0)
    r = verify_kp(g, ModRing(parse_vec(c.ring.substr(2)).at(0)), c.depth);
  else
    fail("ParseError", "--ring must be z, q or z/n, got '" + c.ring + "'");
  return {{"reports", {{"kp", report_json(r)}}}};
}

inline json run_groupoid(const Command& c) {
  need_args(c, 1, "<graph.json>");
  KGraph g = load_graph(c.args[0]);
  auto arrows = arrow_samples(g, samples_or(c, 200), c.seed);
  auto bis = sample_from(small_bisections(g), 12, c.seed);
  return {{"reports",
           {{"axioms", report_json(check_groupoid(g, arrows))},
            {"bisection_product", report_json(check_bisection_products(g, arrows, bis))}}}};
}

inline json run_coe(const Command& c) {
  need_args(c, 2, "<g1.json> <g2.json> --map map.json");
  if (c.map.empty()) fail("ParseError", "coe-check needs --map");
  json mj = read_json_file(c.map);
  GraphSource a = load_graph_source(c.args[0]), b = load_graph_source(c.args[1]);
  auto* oa = std::get_if<OmegaInfinite>(&a);
  auto* ob = std::get_if<OmegaInfinite>(&b);
  if (oa && ob) {
    if (!c.family.empty()) fail("ParseError", "Omega families are determined by the map; drop --family");
    OmegaCoe o = omega_coe(omega_map(mj, oa->k, ob->k), 12);
    auto n = samples_or(c, 50);
    auto p1 = o.s1.points(n, c.seed), p2 = o.s2.points(n, c.seed);
    auto d1 = degree_box(c, oa->k, 3), d2 = degree_box(c, ob->k, 3);
    return {{"reports",
             {{"coe", report_json(check_coe(o.s1, o.s2, o.h, o.fam, p1, p2, d1, d2))},
              {"period", report_json(check_period_preserving(o.s1, o.s2, o.h, o.fam, p1, p2, c.depth))}}},
            {"result", {{"map", o.h.name}, {"samples", p1.size()}}}};
  }
  if (oa || ob) fail("RankMismatch", "coe-check compares two finite graphs or two Omega spaces");
  const KGraph &g1 = std::get<KGraph>(a), &g2 = std::get<KGraph>(b);
  GraphSpace s1(g1), s2(g2);
  auto h = graph_map(mj, g1, g2);
  auto n = samples_or(c, 25);
  auto p1 = s1.points(n, c.seed), p2 = s2.points(n, c.seed);
  if (!c.sample_file.empty()) {
    json sj = read_json_file(c.sample_file);
    auto q1 = points_from_json(sj, "points", g1), q2 = points_from_json(sj, "points2", g2);
    if (!q1.empty()) p1 = q1;
    if (!q2.empty()) p2 = q2;
  }
  auto d1 = degree_box(c, g1.rank(), 2), d2 = degree_box(c, g2.rank(), 2);
  json reports;
  if (!c.family.empty()) {
    json fj = read_json_file(c.family);
    if (!fj.contains("table1") || !fj.contains("table2")) fail("ParseError", c.family + ": needs table1 and table2");
    auto t1 = table_from_json(fj.at("table1"), g1, "table1"), t2 = table_from_json(fj.at("table2"), g2, "table2");
    auto fam = family_from_tables(s1, t1, s2, t2);
    reports["coe"] = report_json(check_coe(s1, s2, h, fam, p1, p2, d1, d2));
    reports["period"] = report_json(check_period_preserving(s1, s2, h, fam, p1, p2, c.depth));
    return {{"reports", reports}};
  }
  // no family given: read one off the conjugacy's groupoid map
  auto phi = conjugacy_arrow_map(s1, s2, h);
  auto arrows = s1.arrows(samples_or(c, 25) * 2, c.seed);
  std::vector<Arrow<BoundaryPath>> images;
  for (const auto& x : arrows) images.push_back(phi.fwd(x));
  auto e1 = merge(merge(d1, arrow_degrees(s1, arrows)), period_degrees(s1, p1, c.depth));
  auto e2 = merge(merge(d2, arrow_degrees(s2, images)), period_degrees(s2, p2, c.depth));
  auto iso = cocycles_from_iso(s1, s2, phi, e1, e2, c.depth);
  auto fam = family_from_tables(s1, iso.table1, s2, iso.table2);
  reports["coe"] = report_json(check_coe(s1, s2, iso.h, fam, p1, p2, d1, d2));
  reports["period"] = report_json(check_period_preserving(s1, s2, iso.h, fam, p1, p2, c.depth));
  auto induced = induced_groupoid_hom(s1, s2, iso.h, fam);
  Check agree("induced_matches_map");
  for (const auto& x : arrows) {
    agree.record(induced.fwd(x) == phi.fwd(x), [&] { return format_arrow(s1, x); });
    agree.record(induced.fwd(unit_arrow(s1, x.x)) == unit_arrow(s2, iso.h.fwd(x.x)), [&] { return "unit at " + s1.format(x.x); });
  }
  Report ind;
  ind.envelope = {{"arrows", std::to_string(arrows.size())}};
  ind.checks = {agree};
  reports["induced"] = report_json(ind);
  return {{"reports", reports}, {"result", {{"map", h.name}, {"table_refinement", {iso.table1.refinement, iso.table2.refinement}}}}};
}

inline json run_eventual(const Command& c) {
  need_args(c, 2, "<g1.json> <g2.json> --map map.json");
  if (c.map.empty()) fail("ParseError", "eventual-check needs --map");
  KGraph g1 = load_graph(c.args[0]), g2 = load_graph(c.args[1]);
  GraphSpace s1(g1), s2(g2);
  auto h = graph_map(read_json_file(c.map), g1, g2);
  Vec lag = c.lag.empty() ? zero_vec(g1.rank()) : parse_vec(c.lag);
  auto n = samples_or(c, 30);
  Report r = check_eventual_conjugacy(s1, s2, h, constant_lag<BoundaryPath>(lag), constant_lag<BoundaryPath>(lag),
                                      s1.points(n, c.seed), s2.points(n, c.seed), degree_box(c, g1.rank(), 2));
  return {{"reports", {{"eventual", report_json(r)}}}, {"result", {{"map", h.name}, {"lag", vec_to_json(lag)}}}};
}

inline json run_stabilize(const Command& c) {
  need_args(c, 1, "<graph.json>");
  KGraph g = load_graph(c.args[0]);
  auto sg = stabilize(g);
  StabSpace s(g, c.depth);
  Vec bound(static_cast<std::size_t>(g.rank()), c.depth);
  json mus = json::array();
  for (std::size_t v = 0; v < g.num_vertices(); ++v) mus.push_back(sg.format(sg.mu(static_cast<int>(v), bound)));
  Check action("shift_action"), deg("shift_degree");
  for (const auto& p : s.points(samples_or(c, 30), c.seed))
    for (const Vec& a : box(ones_vec(g.rank())))
      for (const Vec& b : box(ones_vec(g.rank()))) {
        if (!leq(a + b, s.degree(p))) continue;
        action.record(s.shift(s.shift(p, a), b) == s.shift(p, a + b), [&] { return s.format(p); });
        deg.record(s.degree(s.shift(p, a)) == s.degree(p) - a || s.degree(p)[0] >= kInf, [&] { return s.format(p); });
      }
  Report r;
  r.envelope = {{"level_bound", std::to_string(c.depth)}};
  r.checks = {action, deg};
  return {{"reports", {{"stabilized_shift", report_json(r)}}},
          {"result", {{"rank", sg.rank()}, {"vertices_below_bound", sg.count_vertices(bound)}, {"mu_at_bound", mus}}}};
}

inline json run_stab_iso(const Command& c) {
  need_args(c, 1, "<graph.json>");
  KGraph g = load_graph(c.args[0]);
  StabSpace s(g, c.depth);
  auto us = product_samples(g, samples_or(c, 200), c.depth, c.seed);
  return {{"reports", {{"stab_iso", report_json(check_stab_iso(s, us))}}}};
}

inline BlockCode code_from_json(const json& j, const KGraph& g1, const KGraph& g2, const std::string& where) {
  std::string kind = get_string(j, "kind", where);
  if (kind == "identity") {
    if (graph_spec_to_json(g1) != graph_spec_to_json(g2)) fail("NotAnIsomorphism", where + ": identity between different graphs");
    BlockCode h = identity_block_code(g1);
    h.to = &g2;
    return h;
  }
  if (kind == "relabel") return relabel_block_code(g1, g2, relabel_tables(j, g1, g2).second);
  if (kind == "shift") {
    if (&g1 != &g2 && graph_spec_to_json(g1) != graph_spec_to_json(g2)) fail("NotAnIsomorphism", where + ": shift code needs one graph");
    BlockCode h = shift_block_code(g1, vec_from_json(j.at("m")));
    h.to = &g2;
    return h;
  }
  if (kind == "table") {
    BlockCode h{&g1, &g2, vec_from_json(j.at("window")), {}};
    for (const auto& r : j.at("table")) h.table[g1.parse_path(get_string(r, "window", where))] = g2.parse_path(get_string(r, "image", where));
    return h;
  }
  fail("ParseError", where + ": code kind '" + kind + "' unknown");
}

// rows {"window": path, "modulus": c, "residue": j}: A = {n : r(n) mod c = j}
// with f(n) = r(n) div c in the graded enumeration
inline PartitionData partition_from_json(const json& rows, const KGraph& g) {
  PartitionData out;
  const int k = g.rank();
  for (const auto& r : rows) {
    auto c = r.at("modulus").get<std::uint64_t>(), j = r.at("residue").get<std::uint64_t>();
    if (c == 0) fail("ParseError", "partition modulus must be positive");
    out.rows.push_back({g.parse_path(get_string(r, "window", "partition")),
                        [c, j](const Vec& n) { return rk_to_r(n) % c == j; },
                        [c, k](const Vec& n) { return r_to_rk(rk_to_r(n) / c, k); },
                        [c, j, k](const Vec& n) { return r_to_rk(rk_to_r(n) * c + j, k); }});
  }
  return out;
}

inline json run_conjugacy(const Command& c) {
  need_args(c, 2, "<g1.json> <g2.json> --code code.json");
  if (c.code.empty()) fail("ParseError", "conjugacy-check needs --code");
  KGraph g1 = load_graph(c.args[0]), g2 = load_graph(c.args[1]);
  json cj = read_json_file(c.code);
  if (!cj.contains("forward") || !cj.contains("inverse")) fail("ParseError", c.code + ": needs forward and inverse codes");
  BlockCode h = code_from_json(cj.at("forward"), g1, g2, "forward");
  BlockCode hinv = code_from_json(cj.at("inverse"), g2, g1, "inverse");
  std::vector<Vec> shifts;
  for (const Vec& v : box(Vec(static_cast<std::size_t>(g1.rank()), 2))) shifts.push_back(v - ones_vec(g1.rank()));
  Report two = check_two_sided_conjugacy(h, hinv, bi_samples(g1, samples_or(c, 20), c.seed), shifts);
  json reports = {{"two_sided", report_json(two)}};
  auto delay = code_delay(h, hinv);
  if (!delay) return {{"reports", reports}};
  PartitionData part = cj.contains("partition") ? partition_from_json(cj.at("partition"), g1)
                                                : default_partition(window_classes(h, *delay), g1.rank());
  StabSpace s1(g1, c.depth), s2(g2, c.depth);
  auto sc = conjugacy_to_stab_iso(s1, s2, h, hinv, std::move(part));
  auto eta1 = std::function<Vec(const Arrow<StabPoint>&)>([&s1](const auto& x) { return stab_eta_cocycle(s1, x); });
  auto eta2 = std::function<Vec(const Arrow<StabPoint>&)>([&s2](const auto& x) { return stab_eta_cocycle(s2, x); });
  auto arrows = s1.arrows(samples_or(c, 100), c.seed);
  reports["stabilized"] = report_json(check_arrow_map(s1, s2, sc.phi, arrows, box(ones_vec(g1.rank())), eta1, eta2));
  return {{"reports", reports}, {"result", {{"delay", vec_to_json(*delay)}, {"window", vec_to_json(h.L)}}}};
}

inline json run_aperiodic(const Command& c) {
  need_args(c, 1, "<graph.json>");
  GraphSource src = load_graph_source(c.args[0]);
  AperiodicityReport r = std::holds_alternative<OmegaInfinite>(src) ? is_aperiodic(OmegaSpace(std::get<OmegaInfinite>(src).k), c.depth)
                                                                  : is_aperiodic(std::get<KGraph>(src), c.depth);
  return {{"result", {{"verdict", to_string(r.verdict)}, {"depth", r.depth}, {"witnesses", r.witnesses}}}};
}

}  // namespace cli

inline json command_echo(const Command& c) {
  json j = {{"name", c.name}, {"args", c.args}, {"depth", c.depth}, {"seed", c.seed}, {"ring", c.ring}};
  if (c.samples) j["samples"] = c.samples;
  for (const auto& [k, v] : {std::pair{"degrees", &c.degrees}, {"map", &c.map}, {"family", &c.family},
                             {"samples_file", &c.sample_file}, {"code", &c.code}, {"lag", &c.lag}})
    if (!v->empty()) j[k] = *v;
  return j;
}

inline json run(const Command& c) {
  static const std::map<std::string, json (*)(const Command&)> table{
      {"validate", cli::run_validate},     {"paths", cli::run_paths},
      {"mce", cli::run_mce},               {"kp-check", cli::run_kp},
      {"groupoid", cli::run_groupoid},     {"coe-check", cli::run_coe},
      {"eventual-check", cli::run_eventual}, {"stabilize", cli::run_stabilize},
      {"stab-iso-check", cli::run_stab_iso}, {"conjugacy-check", cli::run_conjugacy},
      {"aperiodicity", cli::run_aperiodic}};
  auto start = std::chrono::steady_clock::now();
  json out;
  try {
    auto it = table.find(c.name);
    if (it == table.end()) fail("UnknownCommand", "'" + c.name + "'");
    out = it->second(c);
    bool ok = true;
    if (out.contains("reports"))
      for (const auto& [k, r] : out.at("reports").items()) ok = ok && r.at("pass").get<bool>();
    out["pass"] = ok;
  } catch (const Error& e) {
    out = {{"pass", false}, {"error", {{"kind", e.kind()}, {"detail", e.detail()}}}};
  } catch (const std::exception& e) {
    out = {{"pass", false}, {"error", {{"kind", "InternalError"}, {"detail", e.what()}}}};
  }
  out["command"] = command_echo(c);
  if (c.timing)
    out["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// 0 when every check passed, 1 on a failed check, 2 on an error
inline int exit_code(const json& report) {
  if (report.contains("error")) return 2;
  return report.at("pass").get<bool>() ? 0 : 1;
}

}  // namespace kgraph
