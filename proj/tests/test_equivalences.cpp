#include <catch_amalgamated.hpp>

#include "common.hpp"
#include "kgraph/equivalences.hpp"

using namespace kgraph;

namespace {

std::vector<Vec> degrees_upto(int k, std::int64_t n) { return box(Vec(static_cast<std::size_t>(k), n)); }

std::vector<Vec> merge(std::vector<Vec> a, const std::vector<Vec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

template <class P>
CocycleFamily<P, P> trivial_family() {
  auto zero = [](const Vec& m, const P&) -> std::optional<Vec> { return zero_vec(static_cast<int>(m.size())); };
  auto same = [](const Vec& m, const P&) -> std::optional<Vec> { return m; };
  return {zero, same, zero, same};
}

// Staircase word of an infinite-infinite point computed from the raw squares:
// the unique word in the class of a long unrolling whose colors alternate.
oracle::Word staircase(const oracle::RawGraph& raw, const KGraph& g, const BoundaryPath& x, std::size_t len) {
  auto half = static_cast<std::int64_t>(len / 2 + 1);
  oracle::Unrolled u(raw, oracle::to_word(g, x.prefix), oracle::to_word(g, x.cycle), Vec{half, half});
  for (const auto& w : u.words) {
    bool alt = true;
    for (std::size_t i = 0; i < len && alt; ++i) alt = raw.color.at(w[i]) == static_cast<int>(i % 2);
    if (alt) return oracle::Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len));
  }
  return {};
}

}  // namespace

TEST_CASE("identity and relabeling are orbit equivalences", "[equivalences]") {
  KGraph t2 = load_fixture("t2.json"), t2r = load_fixture("t2_relabeled.json"), tt2 = load_fixture("tt2.json");
  GraphSpace s(t2), sr(t2r), st(tt2);
  auto degs = degrees_upto(2, 3);

  // f = g = 0 works in T2 only because sigma^m fixes its single boundary path
  auto zero = [](const Vec& m, const BoundaryPath&) -> std::optional<Vec> { return zero_vec(static_cast<int>(m.size())); };
  auto pts = s.points(5, 0);
  CHECK(check_coe(s, s, identity_map<BoundaryPath>(), {zero, zero, zero, zero}, pts, pts, degs, degs).pass());

  auto tp = st.points(30, 1);
  Report id = check_coe(st, st, identity_map<BoundaryPath>(), trivial_family<BoundaryPath>(), tp, tp, degs, degs);
  CHECK(id.pass());
  CHECK(id.check("orbit").checked > 30);
  CHECK(check_period_preserving(st, st, identity_map<BoundaryPath>(), trivial_family<BoundaryPath>(), tp, tp, 2).pass());

  auto h = relabel_by_position(t2, t2r);
  Report rel = check_coe(s, sr, h, trivial_family<BoundaryPath>(), pts, sr.points(5, 0), degs, degs);
  CHECK(rel.pass());
  CHECK(format_boundary(t2r, h.fwd(pts.front())).find("b2") != std::string::npos);
  CHECK_THROWS_WITH(relabel_by_position(t2, tt2), Catch::Matchers::ContainsSubstring("NotAnIsomorphism"));
}

TEST_CASE("Omega coe across ranks", "[equivalences][omega]") {
  OmegaCoe c = omega_coe(omega_diagonal(1, 2), 12);
  auto p1 = c.s1.points(50, 0), p2 = c.s2.points(50, 0);
  auto d1 = degrees_upto(1, 3), d2 = degrees_upto(2, 3);
  Report rep = check_coe(c.s1, c.s2, c.h, c.fam, p1, p2, d1, d2);
  for (const auto& ch : rep.checks) {
    INFO(ch.name);
    CHECK(ch.pass());
    CHECK(ch.checked > 0);
  }
  CHECK(check_period_preserving(c.s1, c.s2, c.h, c.fam, p1, p2, 3).pass());

  // g_m(x) = phi(r(x)) is wrong
  auto broken = c.fam;
  broken.g = broken.f;
  Report bad = check_coe(c.s1, c.s2, c.h, broken, p1, p2, d1, d2);
  CHECK_FALSE(bad.pass());
  REQUIRE_FALSE(bad.check("orbit").pass());
  CHECK(bad.check("orbit").witnesses.front().find("x(") != std::string::npos);

  // induced map: phi(x, m - n, y) has cocycle phi(r(x)+m) - phi(r(x)) - phi(r(y)+n) + phi(r(y))
  auto phi = induced_groupoid_hom(c.s1, c.s2, c.h, c.fam);
  auto F = omega_diagonal(1, 2).fwd;
  for (const auto& a : c.s1.arrows(40, 3)) {
    auto b = phi.fwd(a);
    CHECK(b.m == F(a.x + a.p) - F(a.x) - F(a.y + a.q) + F(a.y));
    CHECK(b.x == F(a.x));
  }
  CHECK(check_arrow_map(c.s1, c.s2, phi, c.s1.arrows(40, 3), d1).pass());
}

TEST_CASE("omega_coe coherence holds for all degrees up to 3", "[equivalences][omega][property]") {
  for (const auto& bij : {omega_identity(1), omega_identity(2), omega_diagonal(1, 2), omega_diagonal(2, 1),
                          omega_diagonal(2, 3), omega_swap()}) {
    INFO(bij.name << " " << bij.k1 << "->" << bij.k2);
    OmegaCoe c = omega_coe(bij, 12);
    auto rep = check_coe(c.s1, c.s2, c.h, c.fam, c.s1.points(40, 1), c.s2.points(40, 2), degrees_upto(bij.k1, 3),
                         degrees_upto(bij.k2, 3));
    CHECK(rep.pass());
    CHECK(rep.check("coherence").checked > 0);
  }
  OmegaBijection bogus{"bogus", 1, 1, [](const Vec& n) { return Vec{n[0] / 2}; }, [](const Vec& n) { return n; }};
  CHECK_THROWS_WITH(omega_coe(bogus, 4), Catch::Matchers::ContainsSubstring("NotBijective"));
}

TEST_CASE("gradedness separates the swap from the identity", "[equivalences][omega]") {
  auto eta = omega_potential([](const Vec& n) { return n; });  // eta = d
  auto trivial = [](const Vec&, const Vec&) { return Vec{}; };
  auto degs = degrees_upto(2, 2);
  for (const auto& bij : {omega_identity(2), omega_swap()}) {
    OmegaCoe c = omega_coe(bij, 8);
    auto p = c.s1.points(20, 0);
    CHECK(check_coe(c.s1, c.s2, c.h, c.fam, p, p, degs, degs).pass());
    CHECK(check_graded(c.s1, c.s2, c.h, c.fam, trivial, trivial, p, p, degs, degs).pass());
    Report g = check_graded(c.s1, c.s2, c.h, c.fam, eta, eta, p, p, degs, degs);
    CHECK(g.pass() == (bij.name == "identity"));
    if (!g.pass()) CHECK_FALSE(g.checks.front().witnesses.empty());
  }

  KGraph tt2 = load_fixture("tt2.json");
  GraphSpace s(tt2);
  auto d = graph_functor(tt2, degree_functor(tt2));
  auto pts = s.points(20, 4);
  auto fam = trivial_family<BoundaryPath>();
  CHECK(check_graded(s, s, identity_map<BoundaryPath>(), fam, d, d, pts, pts, degs, degs).pass());
  // moving f and g together keeps the difference and so the grading; moving g alone breaks it
  auto bumped = fam;
  bumped.f = [](const Vec& m, const BoundaryPath&) -> std::optional<Vec> { return Vec{1, 0} + zero_vec(static_cast<int>(m.size())); };
  bumped.g = [](const Vec& m, const BoundaryPath&) -> std::optional<Vec> { return m + Vec{1, 0}; };
  CHECK(check_graded(s, s, identity_map<BoundaryPath>(), bumped, d, d, pts, pts, degs, degs).pass());
  bumped.g = [](const Vec& m, const BoundaryPath&) -> std::optional<Vec> { return m + Vec{0, 1}; };
  CHECK_FALSE(check_graded(s, s, identity_map<BoundaryPath>(), bumped, d, d, pts, pts, degs, degs).pass());
}

TEST_CASE("same-skeleton homeomorphism", "[equivalences][skeleton]") {
  KGraph flip = load_fixture("tt2.json"), swap = load_fixture("tt2_commuting.json");
  auto raw1 = raw_fixture("tt2.json"), raw2 = raw_fixture("tt2_commuting.json");
  GraphSpace s1(flip), s2(swap);
  auto h = same_skeleton_homeo(flip, swap);
  auto back = same_skeleton_homeo(swap, flip);

  // Lambda1 = Lambda2 gives the identity
  auto self = same_skeleton_homeo(flip, flip);
  for (const auto& x : s1.catalog()) CHECK(self.fwd(x) == x);

  for (const auto& x : s1.catalog()) {
    INFO(format_boundary(flip, x));
    auto y = h.fwd(x);
    CHECK(degree(y) == degree(x));
    CHECK(back.fwd(y) == x);
    CHECK(h.inv(y) == x);
    CHECK(alternating_word(swap, y, 6) == alternating_word(flip, x, 6));
    if (degree(x)[0] >= kInf && degree(x)[1] >= kInf) {
      auto w1 = staircase(raw1, flip, x, 6), w2 = staircase(raw2, swap, y, 6);
      CHECK(w1.size() == 6);
      CHECK(w1 == w2);
    }
  }
  for (const auto& y : s2.catalog()) CHECK(h.fwd(h.inv(y)) == y);

  // the cycle (e1 f) point
  auto x = make_boundary(flip, flip.vertex(0), flip.parse_path("e1.f"), {false, false});
  auto y = h.fwd(x);
  CHECK(staircase(raw2, swap, y, 6) == staircase(raw1, flip, x, 6));

  // Z(lambda1) lands in a single Z(lambda2) with d(lambda2) = d(lambda1)
  for (const Path& l : flip.paths_below(0, {2, 2})) {
    std::set<Path> targets;
    for (const auto& z : s1.catalog()) {
      auto img = h.fwd(extend(flip, l, z));
      targets.insert(bp_segment(swap, img, zero_vec(2), l.d));
    }
    CHECK(targets.size() == 1);
  }
}

TEST_CASE("same-skeleton preconditions", "[equivalences][skeleton]") {
  KGraph tt2 = load_fixture("tt2.json"), t2 = load_fixture("t2.json"), cube = load_fixture("cube3.json");
  CHECK_THROWS_WITH(same_skeleton_homeo(tt2, t2), Catch::Matchers::ContainsSubstring("SkeletonMismatch"));
  CHECK_THROWS_WITH(same_skeleton_homeo(cube, cube), Catch::Matchers::ContainsSubstring("RankUnsupported"));
}

TEST_CASE("eventual conjugacy", "[equivalences][eventual]") {
  KGraph t2 = load_fixture("t2.json"), t2r = load_fixture("t2_relabeled.json");
  KGraph flip = load_fixture("tt2.json"), swap = load_fixture("tt2_commuting.json");
  GraphSpace s(t2), sr(t2r), s1(flip), s2(swap);
  auto degs = degrees_upto(2, 2);
  auto zero = constant_lag<BoundaryPath>(Vec{0, 0});

  auto p = s1.points(30, 0);
  CHECK(check_eventual_conjugacy(s1, s1, identity_map<BoundaryPath>(), zero, zero, p, p, degs).pass());
  CHECK(check_eventual_conjugacy(s, sr, relabel_by_position(t2, t2r), zero, zero, s.points(3, 0), sr.points(3, 0), degs)
            .pass());

  // re-reading the staircase does not commute with the shift: the flip rule
  // and the commuting rule disagree after one blue step
  Report bad = check_eventual_conjugacy(s1, s2, same_skeleton_homeo(flip, swap), zero, zero, p, s2.points(30, 0), degs);
  CHECK_FALSE(bad.pass());
  REQUIRE_FALSE(bad.check("conjugacy").witnesses.empty());
  INFO(bad.check("conjugacy").witnesses.front());
  CHECK(bad.check("conjugacy").witnesses.front().find("m=") != std::string::npos);

  OmegaSpace o1(1), o2(2);
  CHECK_THROWS_WITH(check_eventual_conjugacy(o1, o2, BoundaryMap<Vec, Vec>{}, LagFn<Vec>{}, LagFn<Vec>{}, {}, {}, degs),
                    Catch::Matchers::ContainsSubstring("RankMismatch"));
}

TEST_CASE("cocycles from isomorphisms round-trip", "[equivalences][iso]") {
  KGraph t2 = load_fixture("t2.json"), t2r = load_fixture("t2_relabeled.json"), tt2 = load_fixture("tt2.json");
  KGraph strip = load_fixture("strip.json");
  auto degs = degrees_upto(2, 2);

  auto run = [&](const auto& s1, const auto& s2, const auto& phi) {
    auto arrows = s1.arrows(60, 2);
    std::vector<Arrow<BoundaryPath>> images;
    for (const auto& a : arrows) images.push_back(phi.fwd(a));
    auto d1 = merge(degs, arrow_degrees(s1, arrows)), d2 = merge(degs, arrow_degrees(s2, images));
    auto iso = cocycles_from_iso(s1, s2, phi, d1, d2, 2);
    auto fam = family_from_tables(s1, iso.table1, s2, iso.table2);
    auto p1 = s1.points(25, 0), p2 = s2.points(25, 0);
    Report rep = check_coe(s1, s2, iso.h, fam, p1, p2, degs, degs);
    for (const auto& c : rep.checks) {
      INFO(c.name << (c.witnesses.empty() ? "" : " " + c.witnesses.front()));
      CHECK(c.pass());
    }
    auto induced = induced_groupoid_hom(s1, s2, iso.h, fam);
    for (const auto& a : arrows) {
      CHECK(induced.fwd(a) == phi.fwd(a));
      CHECK(induced.fwd(unit_arrow(s1, a.x)) == unit_arrow(s2, iso.h.fwd(a.x)));
    }
    return iso;
  };

  GraphSpace st(tt2), ss(strip), s(t2), sr(t2r);
  auto iso = run(st, st, identity_arrow_map<BoundaryPath>());
  // identity: f = 0 and g - f = m
  for (const auto& [m, rows] : iso.table1.rows)
    for (const auto& r : rows) {
      CHECK(is_zero(r.f));
      CHECK(r.g == m);
    }
  run(ss, ss, identity_arrow_map<BoundaryPath>());
  run(s, sr, conjugacy_arrow_map(s, sr, relabel_by_position(t2, t2r)));
}

TEST_CASE("a corrupted family is caught", "[equivalences][iso]") {
  KGraph tt2 = load_fixture("tt2.json");
  GraphSpace s(tt2);
  auto fam = trivial_family<BoundaryPath>();
  fam.g = [](const Vec& m, const BoundaryPath&) -> std::optional<Vec> {
    return is_zero(m) ? m : m + Vec{1, 0};
  };
  auto phi = induced_groupoid_hom(s, s, identity_map<BoundaryPath>(), fam);
  bool caught = false;
  for (const auto& a : s.arrows(40, 0)) {
    Vec l = s.lag(a);
    if (is_zero(l) == is_zero(l - a.m)) continue;
    CHECK_THROWS_WITH(phi.fwd(a), Catch::Matchers::ContainsSubstring("WitnessDisagreement"));
    caught = true;
  }
  CHECK(caught);
  auto pts = s.points(10, 0);
  Report coe = check_coe(s, s, identity_map<BoundaryPath>(), fam, pts, pts, degrees_upto(2, 2), degrees_upto(2, 2));
  CHECK_FALSE(coe.check("coherence").pass());

  // a table without the requested degree
  CocycleTable<GraphSpace> empty;
  auto gap = family_from_tables(s, empty, s, empty);
  CHECK_THROWS_WITH(check_coe(s, s, identity_map<BoundaryPath>(), gap, pts, pts, degrees_upto(2, 1), {}),
                    Catch::Matchers::ContainsSubstring("CoverGap"));
}

TEST_CASE("phi_Per is onto Per(h(x))", "[equivalences][property]") {
  for (const char* f : {"t2.json", "tt2.json", "strip.json", "twoloop.json", "cube3.json"}) {
    KGraph g = load_fixture(f);
    INFO(f);
    GraphSpace s(g);
    auto fam = trivial_family<BoundaryPath>();
    for (const auto& x : s.points(20, 7)) {
      auto img = phi_per(s, fam.f, fam.g, x, s.per(x));
      CHECK(make_group(img, g.rank()) == s.per(x));
    }
    auto pts = s.points(20, 7);
    auto degs = period_degrees(s, pts, 2);
    auto iso = cocycles_from_iso(s, s, identity_arrow_map<BoundaryPath>(), degs, degs, 2);
    auto tab = family_from_tables(s, iso.table1, s, iso.table2);
    CHECK(check_period_preserving(s, s, iso.h, tab, pts, pts, 2).pass());
  }
}

TEST_CASE("aperiodicity", "[equivalences][aperiodic]") {
  auto t2 = is_aperiodic(load_fixture("t2.json"), 3);
  CHECK(t2.verdict == Aperiodicity::Periodic);
  auto two = is_aperiodic(load_fixture("twoloop.json"), 3);
  CHECK(two.verdict == Aperiodicity::Aperiodic);
  REQUIRE(two.witnesses.size() == 1);
  CHECK(two.witnesses.front().find("b") != std::string::npos);
  CHECK(is_aperiodic(OmegaSpace(2), 3).verdict == Aperiodicity::Aperiodic);
  CHECK(is_aperiodic(load_fixture("omega22.json"), 3).verdict == Aperiodicity::Aperiodic);
}

TEST_CASE("relabeling only the first edge is eventually conjugate with a lag", "[equivalences][eventual]") {
  KGraph g = load_fixture("tt2_commuting.json");
  GraphSpace s(g);
  std::vector<int> swap{g.edge_index("e2"), g.edge_index("e1"), g.edge_index("f")};
  auto h = perturb_first_edge(g, 0, swap);
  auto pts = s.points(30, 2);
  for (const auto& x : pts) {
    CHECK(h.inv(h.fwd(x)) == x);
    CHECK(bp_segment(g, h.fwd(x), {1, 0}, {3, 2}) == bp_segment(g, x, {1, 0}, {3, 2}));
  }
  auto degs = degrees_upto(2, 2);
  auto lag = constant_lag<BoundaryPath>(Vec{1, 0});
  CHECK(check_eventual_conjugacy(s, s, h, lag, lag, pts, pts, degs).pass());
  auto zero = constant_lag<BoundaryPath>(Vec{0, 0});
  Report bad = check_eventual_conjugacy(s, s, h, zero, zero, pts, pts, degs);
  CHECK_FALSE(bad.pass());
  REQUIRE_FALSE(bad.check("conjugacy").witnesses.empty());
  CHECK(bad.check("conjugacy").witnesses.front().find("m=(1,") != std::string::npos);
  // f is color 2, so it may not move
  std::vector<int> wrong{g.edge_index("e2"), g.edge_index("e1"), g.edge_index("e1")};
  CHECK_THROWS_WITH(perturb_first_edge(g, 0, wrong), Catch::Matchers::ContainsSubstring("NotAnIsomorphism"));
}
