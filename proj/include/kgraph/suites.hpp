#pragma once

// Property suites over whole fixtures, shared by the CLI and the acceptance run.

#include <algorithm>
#include <numeric>

#include "kgraph/stab.hpp"

namespace kgraph {

// Segment/compose roundtrips for every path of degree <= top, and for each
// path every reordering of its colors normalizing back to it (the cube
// condition, seen from the paths it produces).
inline Report check_factorization(const KGraph& g, const Vec& top) {
  Check round("roundtrip"), pieces("segment_degrees"), assoc("segment_nesting"), cube("color_orders");
  const int k = g.rank();
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (const Vec& n : box(top))
      for (const Path& l : g.paths(static_cast<int>(v), n)) {
        round.record(g.segment(l, zero_vec(k), l.d) == l, [&] { return g.format(l); });
        for (const Vec& m : box(l.d)) {
          Path a = g.segment(l, zero_vec(k), m), b = g.segment(l, m, l.d);
          round.record(g.compose(a, b) == l, [&] { return g.format(l) + " split at " + to_string(m); });
          pieces.record(a.d == m && b.d == l.d - m, [&] { return g.format(l) + " at " + to_string(m); });
          for (const Vec& q : box(l.d - m)) {
            Path inner = g.segment(l, m, m + q);
            assoc.record(g.segment(b, zero_vec(k), q) == inner && g.segment(a, zero_vec(k), meet(m, q)) ==
                                                                      g.segment(l, zero_vec(k), meet(m, q)),
                         [&] { return g.format(l) + " " + to_string(m) + "+" + to_string(q); });
          }
        }
        if (l.is_vertex()) continue;
        std::vector<int> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), 0);
        do {
          std::vector<int> target;
          for (int c : order)
            for (std::int64_t i = 0; i < l.d[static_cast<std::size_t>(c)]; ++i) target.push_back(c);
          auto w = g.reorder(l.e, target);
          cube.record(g.from_word(w) == l, [&] { return g.format(l) + " reordered"; });
        } while (std::next_permutation(order.begin(), order.end()));
      }
  Report rep;
  rep.envelope = {{"top", to_string(top)}};
  rep.checks = {round, pieces, assoc, cube};
  return rep;
}

// Units, inverses, associativity and additivity of the degree cocycle.
inline Report check_groupoid(const KGraph& g, const std::vector<GElem>& arrows) {
  Check units("units"), inv("inverses"), assoc("associativity"), cocycle("cocycle_additive"), lag("lag_cocycle");
  std::map<BoundaryPath, std::vector<GElem>> from;
  for (const GElem& a : arrows) from[a.x].push_back(a);
  Functor d = degree_functor(g);
  for (const GElem& a : arrows) {
    auto where = [&] { return format_arrow(g, a); };
    units.record(g_compose(g, unit(a.x), a) == a && g_compose(g, a, unit(a.y)) == a, where);
    inv.record(g_compose(g, a, g_inverse(a)) == unit(a.x) && g_compose(g, g_inverse(a), a) == unit(a.y), where);
    lag.record(functor_cocycle(g, d, a) == a.m, where);
    const auto& bs = from[a.y];
    for (std::size_t i = 0; i < bs.size() && i < 4; ++i) {
      GElem ab = g_compose(g, a, bs[i]);
      cocycle.record(functor_cocycle(g, d, ab) == functor_cocycle(g, d, a) + functor_cocycle(g, d, bs[i]),
                     [&] { return format_arrow(g, a) + " then " + format_arrow(g, bs[i]); });
      const auto& cs = from[bs[i].y];
      for (std::size_t j = 0; j < cs.size() && j < 2; ++j)
        assoc.record(g_compose(g, ab, cs[j]) == g_compose(g, a, g_compose(g, bs[i], cs[j])), where);
    }
  }
  Report rep;
  rep.envelope = {{"arrows", std::to_string(arrows.size())}};
  rep.checks = {units, inv, assoc, cocycle, lag};
  return rep;
}

// Z(lambda | mu) with lambda, mu of degree <= 1, and G empty or one
// nonexhaustive edge.
inline std::vector<Bisection> small_bisections(const KGraph& g) {
  const int k = g.rank();
  std::vector<Path> ps;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (const Path& p : g.paths_below(static_cast<int>(v), ones_vec(k))) ps.push_back(p);
  std::vector<Bisection> out;
  for (const Path& l : ps)
    for (const Path& mu : ps) {
      if (l.s != mu.s) continue;
      out.push_back(make_bisection(g, l, mu));
      for (int c = 0; c < k; ++c)
        for (int e : g.edges_at(l.s, c)) {
          Path ep = g.edge_path(e);
          if (!g.is_exhaustive(l.s, {ep})) out.push_back(make_bisection(g, l, mu, {ep}));
        }
    }
  return out;
}

// Membership in A B decided from the elements: an arrow a = bc with b in A
// forces b = (x, lag A, mu sigma^{d(lambda)} x).
inline Report check_bisection_products(const KGraph& g, const std::vector<GElem>& arrows,
                                       const std::vector<Bisection>& bis) {
  Check disjoint("product_disjoint"), oracle("product_membership");
  for (const Bisection& A : bis)
    for (const Bisection& B : bis) {
      auto prod = bisection_product(g, A, B);
      for (const GElem& x : arrows) {
        bool expect = false;
        if (in_cylinder(g, x.x, A.l, A.G)) {
          BoundaryPath z = extend(g, A.mu, shift(g, x.x, A.l.d));
          auto b = try_arrow(g, z, x.m - A.lag(), x.y);
          expect = b && bisection_member(g, *b, B);
        }
        int hits = 0;
        for (const Bisection& C : prod) hits += bisection_member(g, x, C) ? 1 : 0;
        auto where = [&] { return format_bisection(g, A) + " * " + format_bisection(g, B) + " at " + format_arrow(g, x); };
        disjoint.record(hits <= 1, where);
        oracle.record((hits == 1) == expect, where);
      }
    }
  Report rep;
  rep.envelope = {{"arrows", std::to_string(arrows.size())}, {"bisections", std::to_string(bis.size())}};
  rep.checks = {disjoint, oracle};
  return rep;
}

// Pairs ((x, m, y), (p, q)) with levels drawn from box(levels).
inline std::vector<ProductArrow> product_samples(const KGraph& g, std::size_t n, int levels, std::uint64_t seed) {
  auto base = arrow_samples(g, n, seed);
  auto lv = box(Vec(static_cast<std::size_t>(g.rank()), levels));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, lv.size() - 1);
  std::vector<ProductArrow> out;
  for (const auto& a : base) out.push_back({a, lv[pick(rng)], lv[pick(rng)]});
  return out;
}

// G_Lambda x R_k -> G_{S Lambda} on samples: a bijection onto its image that
// respects composition, units and inverses, with c-bar = c_eta.
inline Report check_stab_iso(const StabSpace& s, const std::vector<ProductArrow>& us) {
  const KGraph& g = *s.g;
  Check arrow("is_arrow"), inv("inverse"), eta("cbar_is_c_eta"), comp("composition"), inj("injective"), units("units");
  std::map<Arrow<StabPoint>, std::size_t> seen;
  for (std::size_t i = 0; i < us.size(); ++i) {
    const auto& u = us[i];
    auto a = stab_iso(u);
    auto where = [&] { return format_arrow(g, u.a) + " levels " + to_string(u.p) + "," + to_string(u.q); };
    arrow.record(s.shift(a.x, a.p) == s.shift(a.y, a.q) && a.p - a.q == a.m, where);
    inv.record(stab_iso_inverse(g, a) == u, where);
    eta.record(cbar(u) == stab_eta_cocycle(s, a), where);
    ProductArrow back{g_inverse(u.a), u.q, u.p};
    comp.record(stab_iso(product_compose(g, u, back)) == compose_arrows(s, a, stab_iso(back)), where);
    for (const Vec& m : box(ones_vec(g.rank()))) {
      if (!leq(m, degree(u.a.y))) continue;
      ProductArrow v{make_arrow(g, u.a.y, m, shift(g, u.a.y, m)), u.q, m};
      comp.record(stab_iso(product_compose(g, u, v)) == compose_arrows(s, a, stab_iso(v)), where);
    }
    units.record(stab_iso(unit(u.a.x), u.p, u.p) == unit_arrow(s, a.x), where);
    auto [it, fresh] = seen.emplace(a, i);
    if (!fresh) {
      const auto& w = us[it->second];
      inj.record(w == u, where);
    } else {
      inj.record(true, where);
    }
  }
  Report rep;
  rep.envelope = {{"arrows", std::to_string(us.size())}, {"level_bound", std::to_string(s.level_bound)}};
  rep.checks = {arrow, inv, eta, comp, inj, units};
  return rep;
}

}  // namespace kgraph
