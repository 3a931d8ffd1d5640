#include <catch_amalgamated.hpp>

#include "common.hpp"

using namespace kgraph;

namespace {

Path P(const KGraph& g, const std::string& s) { return g.parse_path(s); }

std::string err_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

}  // namespace

TEST_CASE("validate accepts the fixtures and computes flags", "[core]") {
  KGraph t2 = load_fixture("t2.json");
  CHECK(t2.rank() == 2);
  CHECK(t2.flags().row_finite);
  CHECK_FALSE(t2.flags().has_sources);
  CHECK_FALSE(t2.flags().has_sinks);

  KGraph tt2 = load_fixture("tt2.json");
  CHECK_FALSE(tt2.flags().has_sources);
  CHECK_FALSE(tt2.flags().has_sinks);

  KGraph om = build_omega(2, {2, 2});
  CHECK(om.flags().has_sources);
  CHECK(om.flags().has_sinks);
  CHECK(om.flags().locally_convex);
  // (2,2) has no edge of either color with range (2,2)
  int top = om.vertex_index(omega_vertex_name({2, 2}));
  CHECK(om.paths(top, {1, 0}).empty());
  CHECK(om.paths(top, {0, 1}).empty());

  KGraph c3 = load_fixture("cube3.json");
  CHECK(c3.rank() == 3);
}

TEST_CASE("validate rejects bad rules", "[core]") {
  CHECK(err_kind([] { load_fixture("tt2_bad.json"); }) == "NonBijectiveRule");
  CHECK(err_kind([] { load_fixture("cube3_bad.json"); }) == "CubeConditionFailure");

  GraphSpec s = graph_spec_from_json(read_json_file(fixture("t2.json")));
  s.squares.clear();
  CHECK(err_kind([&] { validate(s); }) == "MissingRule");

  GraphSpec m = graph_spec_from_json(read_json_file(fixture("t2.json")));
  m.vertices.push_back("w");
  m.edges.push_back({"x", 1, "w", "w"});
  m.squares.push_back({{"r", "x"}, {"x", "r"}});  // r then x is not composable
  CHECK(err_kind([&] { validate(m); }) == "EndpointMismatch");
}

TEST_CASE("compose examples", "[core]") {
  KGraph t2 = load_fixture("t2.json");
  Path br = t2.compose(P(t2, "b"), P(t2, "r"));
  CHECK(t2.format(br) == "b.r");
  CHECK(br.d == Vec{1, 1});
  CHECK(t2.compose(P(t2, "r"), P(t2, "b")) == br);

  KGraph tt2 = load_fixture("tt2.json");
  CHECK(tt2.format(tt2.compose(P(tt2, "f"), P(tt2, "e1"))) == "e2.f");

  KGraph two = load_fixture("fork.json");
  CHECK(err_kind([&] { two.compose(P(two, "p"), P(two, "q")); }) == "EndpointMismatch");
}

TEST_CASE("segment examples", "[core]") {
  KGraph t2 = load_fixture("t2.json");
  CHECK(t2.format(t2.segment(P(t2, "b.r"), {0, 0}, {1, 0})) == "b");
  KGraph tt2 = load_fixture("tt2.json");
  CHECK(tt2.format(tt2.segment(P(tt2, "e1.f"), {0, 1}, {1, 1})) == "e2");
  Path l = P(tt2, "e1.e2.f");
  CHECK(tt2.segment(l, {0, 0}, {0, 0}) == tt2.vertex(l.r));
  CHECK(err_kind([&] { tt2.segment(l, {0, 0}, {3, 0}); }) == "DegreeOutOfRange");
}

TEST_CASE("enumerate_paths examples", "[core]") {
  KGraph t2 = load_fixture("t2.json");
  CHECK(t2.paths(0, {2, 1}).size() == 1);
  KGraph tt2 = load_fixture("tt2.json");
  CHECK(tt2.paths(0, {1, 1}).size() == 2);
  KGraph om = build_omega(2, {2, 2});
  int o = om.vertex_index(omega_vertex_name({0, 0}));
  auto ps = om.paths(o, {1, 1});
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].r == o);
  CHECK(ps[0].s == om.vertex_index(omega_vertex_name({1, 1})));
}

TEST_CASE("build_omega counts", "[core]") {
  KGraph a = build_omega(2, {1, 1});
  CHECK(a.num_vertices() == 4);
  std::size_t morphisms = 0;
  for (std::size_t v = 0; v < a.num_vertices(); ++v)
    for (const Vec& n : box({1, 1})) morphisms += a.paths(static_cast<int>(v), n).size();
  CHECK(morphisms == 9);

  KGraph line = build_omega(1, {3});
  CHECK(line.num_vertices() == 4);
  CHECK(line.edges().size() == 3);

  KGraph b = build_omega(2, {2, 2});
  CHECK(b.num_vertices() == 9);
  std::size_t diag = 0;
  for (std::size_t v = 0; v < b.num_vertices(); ++v) diag += b.paths(static_cast<int>(v), {1, 1}).size();
  CHECK(diag == 4);
  // brute force over pairs p <= q <= m
  std::size_t pairs = 0;
  for (const Vec& p : box({2, 2}))
    for (const Vec& q : box({2, 2}))
      if (leq(p, q) && q - p == Vec{1, 1}) ++pairs;
  CHECK(diag == pairs);

  CHECK(err_kind([] { build_omega(2, {kInf, 1}); }) == "InfiniteDegreeUnsupportedHere");
}

TEST_CASE("lambda_min examples", "[core]") {
  KGraph om = build_omega(2, {2, 2});
  Path a = om.edge_path(om.edge_index(omega_edge_name({0, 0}, 0)));
  Path b = om.edge_path(om.edge_index(omega_edge_name({0, 0}, 1)));
  auto lm = om.lambda_min(a, b);
  CHECK(lm.size() == 1);
  auto mce = om.mce(a, b);
  REQUIRE(mce.size() == 1);
  CHECK(mce[0].s == om.vertex_index(omega_vertex_name({1, 1})));

  KGraph t2 = load_fixture("t2.json");
  auto l2 = t2.lambda_min(P(t2, "b"), P(t2, "r"));
  REQUIRE(l2.size() == 1);
  CHECK(t2.format(l2[0].first) == "r");
  CHECK(t2.format(l2[0].second) == "b");
  CHECK(t2.mce(P(t2, "b"), P(t2, "r")) == std::vector<Path>{P(t2, "b.r")});

  KGraph tt2 = load_fixture("tt2.json");
  auto l3 = tt2.lambda_min(P(tt2, "e1"), P(tt2, "f"));
  REQUIRE(l3.size() == 1);
  CHECK(tt2.format(l3[0].first) == "f");
  CHECK(tt2.format(l3[0].second) == "e2");

  KGraph fork = load_fixture("fork.json");
  CHECK(err_kind([&] { fork.lambda_min(P(fork, "p"), P(fork, "l")); }) == "RangeMismatch");
}

TEST_CASE("is_exhaustive examples", "[core]") {
  KGraph t2 = load_fixture("t2.json");
  CHECK(t2.is_exhaustive(0, {P(t2, "b")}));
  KGraph tt2 = load_fixture("tt2.json");
  // e2 and e1 have no common extension, so {e1} alone misses Z(e2)
  CHECK_FALSE(tt2.is_exhaustive(0, {P(tt2, "e1")}));
  CHECK(tt2.is_exhaustive(0, {P(tt2, "e1"), P(tt2, "e2")}));
  CHECK(tt2.is_exhaustive(0, {P(tt2, "f")}));
  CHECK(tt2.is_exhaustive(0, {P(tt2, "e1"), P(tt2, "e2.f")}));
  KGraph fork = load_fixture("fork.json");
  int u = fork.vertex_index("u");
  CHECK_FALSE(fork.is_exhaustive(u, {P(fork, "p")}));
  CHECK(fork.is_exhaustive(u, {P(fork, "p"), P(fork, "q")}));
  CHECK_FALSE(fork.is_exhaustive(u, {}));
}

namespace {

struct Fx {
  std::string file;
  Vec top;
};

// fixtures for the exhaustive factorization checks
std::vector<std::pair<KGraph, std::optional<oracle::RawGraph>>> suite() {
  std::vector<std::pair<KGraph, std::optional<oracle::RawGraph>>> out;
  out.emplace_back(load_fixture("t2.json"), raw_fixture("t2.json"));
  out.emplace_back(load_fixture("tt2.json"), raw_fixture("tt2.json"));
  out.emplace_back(build_omega(2, {2, 2}), std::nullopt);
  out.emplace_back(load_fixture("cube3.json"), raw_fixture("cube3.json"));
  return out;
}

}  // namespace

TEST_CASE("path counts agree with the word oracle", "[core][oracle]") {
  for (auto& [g, raw] : suite()) {
    Vec top(static_cast<std::size_t>(g.rank()), 2);
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
      for (const Vec& n : box(top)) {
        auto ps = g.paths(static_cast<int>(v), n);
        if (raw) {
          CHECK(ps.size() == raw->count(g.vertex_name(static_cast<int>(v)), n));
          // distinct normal forms are distinct morphisms
          for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j)
              CHECK_FALSE(raw->same(oracle::to_word(g, ps[i]), oracle::to_word(g, ps[j])));
        } else {
          // Omega: a morphism at p of degree n exists iff p + n <= extent
          Vec p(static_cast<std::size_t>(g.rank()));
          std::string name = g.vertex_name(static_cast<int>(v));
          std::sscanf(name.c_str(), "v%ld_%ld", &p[0], &p[1]);
          CHECK(ps.size() == (leq(p + n, top) ? 1u : 0u));
        }
      }
  }
}

TEST_CASE("factorization roundtrip and uniqueness", "[core][property]") {
  for (auto& [g, raw] : suite()) {
    Vec top(static_cast<std::size_t>(g.rank()), 2);
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
      for (const Vec& n : box(top))
        for (const Path& l : g.paths(static_cast<int>(v), n)) {
          CHECK(g.segment(l, zero_vec(g.rank()), l.d) == l);
          if (!l.is_vertex()) CHECK(g.from_word(l.e) == l);  // normal form idempotent
          for (const Vec& m : box(l.d)) {
            Path a = g.segment(l, zero_vec(g.rank()), m);
            Path b = g.segment(l, m, l.d);
            CHECK(g.compose(a, b) == l);
            CHECK(a.d == m);
            CHECK(g.compose(a, b).d == a.d + b.d);
            if (raw) {
              // any word of l factoring as degree m then the rest has the same pieces
              for (const auto& w : raw->cls(oracle::to_word(g, l))) {
                oracle::Word head(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(total(m)));
                if (raw->degree(head) != m) continue;
                oracle::Word tail(w.begin() + static_cast<std::ptrdiff_t>(total(m)), w.end());
                if (!head.empty()) CHECK(raw->same(head, oracle::to_word(g, a)));
                if (!tail.empty()) CHECK(raw->same(tail, oracle::to_word(g, b)));
              }
            }
          }
        }
  }
}

TEST_CASE("lambda_min agrees with brute force and is symmetric", "[core][oracle]") {
  for (auto& [g, raw] : suite()) {
    Vec top(static_cast<std::size_t>(g.rank()), 1);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      auto ps = g.paths_below(static_cast<int>(v), top);
      for (const Path& a : ps)
        for (const Path& b : ps) {
          auto lm = g.lambda_min(a, b);
          auto rl = g.lambda_min(b, a);
          CHECK(lm.size() == rl.size());
          for (auto& [rho, tau] : lm) {
            CHECK(std::find(rl.begin(), rl.end(), std::pair{tau, rho}) != rl.end());
            CHECK(g.compose(a, rho) == g.compose(b, tau));
            CHECK(g.compose(a, rho).d == join(a.d, b.d));
          }
          if (!raw) continue;
          Vec N = join(a.d, b.d);
          std::size_t brute = 0;
          for (const Path& rho : g.paths(a.s, N - a.d))
            for (const Path& tau : g.paths(b.s, N - b.d))
              if (raw->same(oracle::concat(oracle::to_word(g, a), oracle::to_word(g, rho)),
                            oracle::concat(oracle::to_word(g, b), oracle::to_word(g, tau))))
                ++brute;
          CHECK(brute == lm.size());
        }
    }
  }
}

TEST_CASE("is_exhaustive agrees with the definition", "[core][oracle]") {
  for (const char* f : {"tt2.json", "fork.json", "twoloop.json"}) {
    KGraph g = load_fixture(f);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      auto cands = g.paths_below(static_cast<int>(v), Vec(static_cast<std::size_t>(g.rank()), 1));
      // all subsets of small candidate sets
      std::size_t n = std::min<std::size_t>(cands.size(), 6);
      for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Path> E;
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1) E.push_back(cands[i]);
        Vec N = zero_vec(g.rank());
        for (auto& m : E) N = join(N, m.d);
        bool brute = true;
        for (const Path& l : g.paths_below(static_cast<int>(v), N + ones_vec(g.rank()))) {
          bool ok = false;
          for (const Path& m : E)
            if (!g.lambda_min(l, m).empty()) ok = true;
          if (!ok) brute = false;
        }
        CHECK(g.is_exhaustive(static_cast<int>(v), E) == brute);
      }
    }
  }
}
