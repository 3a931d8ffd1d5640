#include <catch_amalgamated.hpp>

#include "common.hpp"
#include "kgraph/steinberg.hpp"

using namespace kgraph;

namespace {

template <class R>
typename R::T value_at(const AlgebraElement<R>& f, const GElem& a) {
  typename R::T v = f.ring.zero();
  for (const auto& [c, b] : f.terms)
    if (bisection_member(*f.g, a, b)) v = f.ring.add(v, c);
  return v;
}

// (f * h)(a) = sum over a = b c of f(b) h(c); f is supported on bisections,
// so for each term at most one b with r(b) = x qualifies.
template <class R>
typename R::T conv_at(const AlgebraElement<R>& f, const AlgebraElement<R>& h, const GElem& a) {
  const KGraph& g = *f.g;
  typename R::T v = f.ring.zero();
  for (const auto& [c, B] : f.terms) {
    if (!in_cylinder(g, a.x, B.l, B.G)) continue;
    BoundaryPath z = extend(g, B.mu, shift(g, a.x, B.l.d));
    auto rest = try_arrow(g, z, a.m - B.lag(), a.y);
    if (rest) v = f.ring.add(v, f.ring.mul(c, value_at(h, *rest)));
  }
  return v;
}

template <class R>
std::vector<AlgebraElement<R>> generators(const KGraph& g, const R& ring, int depth) {
  std::vector<AlgebraElement<R>> out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (const Path& p : g.paths_below(static_cast<int>(v), Vec(static_cast<std::size_t>(g.rank()), depth))) {
      out.push_back(gen_s(g, ring, p));
      out.push_back(gen_s_star(g, ring, p));
    }
  return out;
}

// random small combination of generator products
template <class R>
AlgebraElement<R> random_element(const KGraph& g, const R& ring, const std::vector<AlgebraElement<R>>& gens,
                                 std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> coef(-3, 3);
  auto x = alg_zero(g, ring);
  for (int t = 0; t < 2; ++t) {
    auto term = alg_mul(gens[pick(rng)], gens[pick(rng)]);
    x = alg_add(x, alg_scale(typename R::T(coef(rng)), term));
  }
  return x;
}

}  // namespace

TEST_CASE("multiplication examples", "[steinberg]") {
  KGraph t2 = load_fixture("t2.json");
  IntRing Z;
  Path b = t2.parse_path("b"), r = t2.parse_path("r");
  auto sb = gen_s(t2, Z, b), sr = gen_s(t2, Z, r);
  CHECK(alg_equal(alg_mul(sb, sr), gen_s(t2, Z, t2.parse_path("b.r"))));
  CHECK(alg_equal(alg_mul(sb, sr), alg_mul(sr, sb)));
  CHECK(alg_equal(alg_mul(alg_mul(sb, gen_s_star(t2, Z, b)), sb), sb));
  CHECK(format_element(sb) == "1*Z(b | v)");

  KGraph fork = load_fixture("fork.json");
  auto su = gen_s(fork, Z, fork.vertex(fork.vertex_index("u")));
  auto sw = gen_s(fork, Z, fork.vertex(fork.vertex_index("w")));
  CHECK(alg_mul(su, sw).is_zero());
  CHECK(alg_equal(alg_mul(su, su), su));

  // s_v = s_b s_b* in T2: the vertex projection equals the range of one edge
  CHECK(alg_equal(alg_mul(sb, gen_s_star(t2, Z, b)), gen_s(t2, Z, t2.vertex(0))));
  KGraph tt2 = load_fixture("tt2.json");
  Path e1 = tt2.parse_path("e1"), e2 = tt2.parse_path("e2");
  auto p1 = alg_mul(gen_s(tt2, Z, e1), gen_s_star(tt2, Z, e1));
  auto p2 = alg_mul(gen_s(tt2, Z, e2), gen_s_star(tt2, Z, e2));
  CHECK(alg_mul(p1, p2).is_zero());
  CHECK(alg_equal(alg_add(p1, p2), gen_s(tt2, Z, tt2.vertex(0))));
}

TEST_CASE("star examples", "[steinberg]") {
  KGraph tt2 = load_fixture("tt2.json");
  RatRing Q;
  Path l = tt2.parse_path("e1.f"), m = tt2.parse_path("e2");
  CHECK(alg_equal(alg_star(gen_s(tt2, Q, l)), gen_s_star(tt2, Q, l)));
  auto a = alg_mul(gen_s(tt2, Q, l), gen_s_star(tt2, Q, m));
  CHECK(alg_equal(alg_star(alg_star(a)), a));
  CHECK(alg_equal(alg_star(a), alg_mul(gen_s(tt2, Q, m), gen_s_star(tt2, Q, l))));
}

TEST_CASE("grading and diagonal examples", "[steinberg]") {
  KGraph t2 = load_fixture("t2.json");
  IntRing Z;
  Path b = t2.parse_path("b");
  auto sb = gen_s(t2, Z, b);
  CHECK(alg_equal(grade_component(sb, {1, 0}), sb));
  CHECK(grade_component(sb, {0, 0}).is_zero());
  CHECK(is_diagonal(alg_mul(sb, gen_s_star(t2, Z, b))));
  CHECK_FALSE(is_diagonal(sb));
}

TEST_CASE("mismatched operands are rejected", "[steinberg]") {
  KGraph t2 = load_fixture("t2.json"), tt2 = load_fixture("tt2.json");
  auto a = gen_s(t2, ModRing(3), t2.vertex(0));
  auto b = gen_s(t2, ModRing(5), t2.vertex(0));
  CHECK_THROWS_WITH(alg_mul(a, b), Catch::Matchers::ContainsSubstring("RingMismatch"));
  auto c = gen_s(tt2, ModRing(3), tt2.vertex(0));
  CHECK_THROWS_WITH(alg_add(a, c), Catch::Matchers::ContainsSubstring("GraphMismatch"));
  CHECK(ModRing(7).reduced_indecomposable());
  CHECK_FALSE(ModRing(6).reduced_indecomposable());
  // in Z/2, 2 s_v = 0
  auto two = alg_add(a, a);
  CHECK_FALSE(two.is_zero());
  auto m2 = gen_s(t2, ModRing(2), t2.vertex(0));
  CHECK(alg_add(m2, m2).is_zero());
}

TEST_CASE("verify_kp passes on the fixtures", "[steinberg]") {
  for (const char* f : {"t2.json", "tt2.json", "omega22.json", "cube3.json", "fork.json", "strip.json"}) {
    KGraph g = load_fixture(f);
    INFO(f);
    for (const Report& rep : {verify_kp(g, IntRing{}, 2), verify_kp(g, RatRing{}, 2), verify_kp(g, ModRing(4), 1)}) {
      CHECK(rep.pass());
      for (const auto& rc : rep.checks) {
        INFO(rc.name << (rc.witnesses.empty() ? "" : " " + rc.witnesses.front()));
        CHECK(rc.pass());
        CHECK(rc.checked > 0);
      }
    }
  }
  KGraph tt2 = load_fixture("tt2.json");
  auto mins = tt2.lambda_min(tt2.parse_path("e1"), tt2.parse_path("f"));
  REQUIRE(mins.size() == 1);
  CHECK(tt2.format(mins[0].first) == "f");
  CHECK(tt2.format(mins[0].second) == "e2");
}

TEST_CASE("a corrupted Lambda^min table is caught by KP3", "[steinberg]") {
  for (const char* f : {"t2.json", "tt2.json", "omega22.json", "cube3.json"}) {
    KGraph g = load_fixture(f);
    for (std::uint64_t seed : {0, 1, 2}) {
      Report rep = verify_kp(g, IntRing{}, 2, corrupt_min_table(g, 2, seed));
      CHECK_FALSE(rep.pass());
      CHECK_FALSE(rep.checks[2].pass());
      CHECK(rep.checks[0].pass());
      CHECK_THROWS_WITH(require_kp(rep), Catch::Matchers::ContainsSubstring("RelationFailure: KP3"));
    }
  }
}

TEST_CASE("normal form and product agree with pointwise convolution", "[steinberg][oracle]") {
  for (const char* f : {"t2.json", "tt2.json", "strip.json", "fork.json"}) {
    KGraph g = load_fixture(f);
    IntRing Z;
    auto gens = generators(g, Z, 1);
    auto arrows = arrow_samples(g, 120, 3);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
      auto a = random_element(g, Z, gens, rng), b = random_element(g, Z, gens, rng);
      auto ab = alg_mul(a, b);
      auto sum = alg_add(a, b);
      for (std::size_t i = 0; i < ab.terms.size(); ++i)
        for (std::size_t j = i + 1; j < ab.terms.size(); ++j)
          for (const GElem& x : arrows)
            CHECK_FALSE((bisection_member(g, x, ab.terms[i].second) && bisection_member(g, x, ab.terms[j].second)));
      for (const GElem& x : arrows) {
        CHECK(value_at(ab, x) == conv_at(a, b, x));
        CHECK(value_at(sum, x) == value_at(a, x) + value_at(b, x));
        CHECK(value_at(alg_star(a), g_inverse(x)) == value_at(a, x));
      }
    }
  }
}

TEST_CASE("ring axioms on random elements", "[steinberg][property]") {
  for (const char* f : {"t2.json", "tt2.json", "omega22.json", "fork.json"}) {
    KGraph g = load_fixture(f);
    IntRing Z;
    auto gens = generators(g, Z, 1);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      auto a = random_element(g, Z, gens, rng), b = random_element(g, Z, gens, rng), c = random_element(g, Z, gens, rng);
      CHECK(alg_equal(alg_mul(alg_mul(a, b), c), alg_mul(a, alg_mul(b, c))));
      CHECK(alg_equal(alg_mul(a, alg_add(b, c)), alg_add(alg_mul(a, b), alg_mul(a, c))));
      CHECK(alg_equal(alg_mul(alg_add(a, b), c), alg_add(alg_mul(a, c), alg_mul(b, c))));
      CHECK(alg_equal(alg_star(alg_mul(a, b)), alg_mul(alg_star(b), alg_star(a))));
      CHECK(alg_equal(alg_star(alg_add(a, b)), alg_add(alg_star(a), alg_star(b))));
      CHECK(alg_equal(alg_star(alg_star(a)), a));
    }
  }
}

TEST_CASE("grading, diagonal and projections", "[steinberg][property]") {
  for (const char* f : {"t2.json", "tt2.json", "cube3.json"}) {
    KGraph g = load_fixture(f);
    RatRing Q;
    auto gens = generators(g, Q, 1);
    for (const auto& a : gens)
      for (const auto& b : gens) {
        auto ab = alg_mul(a, b);
        if (ab.is_zero()) continue;
        Vec n = a.terms.front().second.lag(), m = b.terms.front().second.lag();
        CHECK(alg_equal(grade_component(ab, n + m), ab));
      }
    std::vector<AlgebraElement<RatRing>> diag;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
      for (const Path& p : g.paths_below(static_cast<int>(v), Vec(static_cast<std::size_t>(g.rank()), 1))) {
        auto pp = alg_mul(gen_s(g, Q, p), gen_s_star(g, Q, p));
        CHECK(is_diagonal(pp));
        CHECK(alg_equal(alg_mul(pp, pp), pp));
        CHECK(alg_equal(alg_star(pp), pp));
        diag.push_back(pp);
      }
    for (const auto& a : diag)
      for (const auto& b : diag) CHECK(alg_equal(alg_mul(a, b), alg_mul(b, a)));
  }
}
