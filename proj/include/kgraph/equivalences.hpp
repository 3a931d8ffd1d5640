#pragma once

#include <map>

#include "kgraph/report.hpp"
#include "kgraph/spaces.hpp"

namespace kgraph {

// ---- cocycle families

// A lag function m, x -> value; nullopt when the tabulation does not cover x.
template <class P>
using LagFn = std::function<std::optional<Vec>(const Vec& m, const P& x)>;

// f, g : degrees of the first space -> N^(k2); i, j : the inverse direction.
// Values live in the rank of the space the shifts are applied in.
template <class P1, class P2>
struct CocycleFamily {
  LagFn<P1> f, g;
  LagFn<P2> i, j;
};

// Locally constant lags as (cylinder, f, g) rows per degree; the first
// matching row wins.
template <class S>
struct CocycleTable {
  struct Row {
    typename S::Cyl cyl;
    Vec f, g;
  };
  std::map<Vec, std::vector<Row>> rows;
  int refinement = 0;  // deepest cut that was needed

  LagFn<typename S::Point> lookup(const S& sp, bool second) const {
    return [this, &sp, second](const Vec& m, const typename S::Point& x) -> std::optional<Vec> {
      auto it = rows.find(m);
      if (it == rows.end()) return std::nullopt;
      for (const Row& r : it->second)
        if (sp.in_cyl(x, r.cyl)) return second ? r.g : r.f;
      return std::nullopt;
    };
  }
};

template <class S1, class S2>
CocycleFamily<typename S1::Point, typename S2::Point> family_from_tables(const S1& s1, const CocycleTable<S1>& t1,
                                                                         const S2& s2, const CocycleTable<S2>& t2) {
  return {t1.lookup(s1, false), t1.lookup(s1, true), t2.lookup(s2, false), t2.lookup(s2, true)};
}

namespace detail {

template <class S>
Vec need(const S& sp, const LagFn<typename S::Point>& fn, const Vec& m, const typename S::Point& x, const char* what) {
  auto v = fn(m, x);
  if (!v) fail("CoverGap", std::string(what) + "_" + to_string(m) + " undefined at " + sp.format(x));
  return *v;
}

template <class S>
std::vector<Vec> degrees_below(const S& sp, const std::vector<Vec>& degrees, const typename S::Point& x) {
  std::vector<Vec> out;
  Vec d = sp.degree(x);
  for (const Vec& m : degrees)
    if (leq(m, d)) out.push_back(m);
  return out;
}

// orbit relation sigma^f(h(sigma^m x)) = sigma^g(h(x)) for one direction
template <class SA, class SB>
void orbit_check(Check& c, const SA& a, const SB& b, const std::function<typename SB::Point(const typename SA::Point&)>& h,
                 const LagFn<typename SA::Point>& F, const LagFn<typename SA::Point>& G,
                 const std::vector<typename SA::Point>& samples, const std::vector<Vec>& degrees) {
  for (const auto& x : samples)
    for (const Vec& m : degrees_below(a, degrees, x)) {
      Vec f = need(a, F, m, x, "f"), g = need(a, G, m, x, "g");
      auto y1 = h(a.shift(x, m)), y2 = h(x);
      bool fits = leq(zero_vec(b.rank()), f) && leq(zero_vec(b.rank()), g) && leq(f, b.degree(y1)) &&
                  leq(g, b.degree(y2));
      bool ok = fits && b.shift(y1, f) == b.shift(y2, g);
      c.record(ok, [&] {
        return "x=" + a.format(x) + " m=" + to_string(m) + " f=" + to_string(f) + " g=" + to_string(g) +
               (fits ? ": " + b.format(b.shift(y1, f)) + " != " + b.format(b.shift(y2, g)) : ": lag exceeds degree");
      });
    }
}

// p_(m+n)(x) = p_m(x) + p_n(sigma^m x) with p = g - f
template <class SA>
void coherence_check(Check& c, const SA& a, const LagFn<typename SA::Point>& F, const LagFn<typename SA::Point>& G,
                     const std::vector<typename SA::Point>& samples, const std::vector<Vec>& degrees) {
  std::set<Vec> have(degrees.begin(), degrees.end());
  auto p = [&](const Vec& m, const typename SA::Point& x) { return need(a, G, m, x, "g") - need(a, F, m, x, "f"); };
  for (const auto& x : samples) {
    auto below = degrees_below(a, degrees, x);
    for (const Vec& m : below)
      for (const Vec& n : below) {
        if (!have.count(m + n) || !leq(m + n, a.degree(x))) continue;
        auto sx = a.shift(x, m);
        Vec lhs = p(m + n, x), rhs = p(m, x) + p(n, sx);
        c.record(lhs == rhs, [&] {
          return "x=" + a.format(x) + " m=" + to_string(m) + " n=" + to_string(n) + ": " + to_string(lhs) +
                 " != " + to_string(rhs);
        });
      }
  }
}

}  // namespace detail

template <class S1, class S2>
Report check_coe(const S1& s1, const S2& s2, const BoundaryMap<typename S1::Point, typename S2::Point>& h,
                 const CocycleFamily<typename S1::Point, typename S2::Point>& fam,
                 const std::vector<typename S1::Point>& samples1, const std::vector<typename S2::Point>& samples2,
                 const std::vector<Vec>& degrees1, const std::vector<Vec>& degrees2) {
  Report rep;
  rep.envelope = {{"map", h.name},
                  {"samples", std::to_string(samples1.size()) + "+" + std::to_string(samples2.size())},
                  {"degrees", std::to_string(degrees1.size()) + "+" + std::to_string(degrees2.size())}};
  Check bij("bijective"), orb1("orbit"), orb2("orbit_inverse"), coh1("coherence"), coh2("coherence_inverse");
  for (const auto& x : samples1)
    bij.record(h.inv(h.fwd(x)) == x, [&] { return "h^-1 h x != x at " + s1.format(x); });
  for (const auto& y : samples2)
    bij.record(h.fwd(h.inv(y)) == y, [&] { return "h h^-1 y != y at " + s2.format(y); });
  detail::orbit_check(orb1, s1, s2, h.fwd, fam.f, fam.g, samples1, degrees1);
  detail::orbit_check(orb2, s2, s1, h.inv, fam.i, fam.j, samples2, degrees2);
  detail::coherence_check(coh1, s1, fam.f, fam.g, samples1, degrees1);
  detail::coherence_check(coh2, s2, fam.i, fam.j, samples2, degrees2);
  rep.checks = {bij, orb1, orb2, coh1, coh2};
  return rep;
}

// ---- period preservation

// phi(b) = p_(b+)(x) - p_(b-)(x) on the given lags; b+ and b- must fit under d(x)
template <class S>
Vec phi_lag(const S& sp, const LagFn<typename S::Point>& F, const LagFn<typename S::Point>& G,
            const typename S::Point& x, const Vec& b) {
  auto p = [&](const Vec& m) { return detail::need(sp, G, m, x, "g") - detail::need(sp, F, m, x, "f"); };
  return p(pos_part(b)) - p(neg_part(b));
}

// Images of the generators of Per(x) (or IP(x) at the given depth) under phi.
template <class S>
std::vector<Vec> phi_per(const S& sp, const LagFn<typename S::Point>& F, const LagFn<typename S::Point>& G,
                         const typename S::Point& x, const PeriodGroup& grp) {
  std::vector<Vec> out;
  for (const Vec& b : grp.basis) out.push_back(phi_lag(sp, F, G, x, b));
  return out;
}

namespace detail {

template <class SA, class SB>
void period_check(Check& per, Check& ip, Check& wd, const SA& a, const SB& b,
                  const std::function<typename SB::Point(const typename SA::Point&)>& h,
                  const LagFn<typename SA::Point>& F, const LagFn<typename SA::Point>& G,
                  const std::vector<typename SA::Point>& samples, int depth) {
  const int k2 = b.rank();
  for (const auto& x : samples) {
    PeriodGroup px = a.per(x);
    auto img = phi_per(a, F, G, x, px);
    PeriodGroup lhs = make_group(img, k2), rhs = b.per(h(x));
    per.record(lhs == rhs, [&] { return "Per at " + a.format(x) + " maps onto the wrong subgroup"; });
    // shifting both halves of b by the same t must not change phi(b)
    Vec t = zero_vec(a.rank());
    Vec d = a.degree(x);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = d[i] >= kInf ? 1 : 0;
    for (const Vec& v : px.basis) {
      Vec alt = [&] {
        auto p = [&](const Vec& m) { return need(a, G, m, x, "g") - need(a, F, m, x, "f"); };
        return p(pos_part(v) + t) - p(neg_part(v) + t);
      }();
      Vec base = phi_lag(a, F, G, x, v);
      wd.record(alt == base, [&] { return "phi(" + to_string(v) + ") depends on the representative at " + a.format(x); });
    }
    auto iimg = phi_per(a, F, G, x, a.ip(x, depth));
    PeriodGroup il = make_group(iimg, k2), ir = b.ip(h(x), depth);
    ip.record(il == ir, [&] { return "IP at " + a.format(x) + " maps onto the wrong subgroup"; });
  }
}

}  // namespace detail

template <class S1, class S2>
Report check_period_preserving(const S1& s1, const S2& s2, const BoundaryMap<typename S1::Point, typename S2::Point>& h,
                               const CocycleFamily<typename S1::Point, typename S2::Point>& fam,
                               const std::vector<typename S1::Point>& samples1,
                               const std::vector<typename S2::Point>& samples2, int depth) {
  Report rep;
  rep.envelope = {{"map", h.name},
                  {"samples", std::to_string(samples1.size()) + "+" + std::to_string(samples2.size())},
                  {"ip_depth", std::to_string(depth)}};
  Check per1("per"), per2("per_inverse"), ip1("ip"), ip2("ip_inverse"), wd("phi_well_defined");
  detail::period_check(per1, ip1, wd, s1, s2, h.fwd, fam.f, fam.g, samples1, depth);
  detail::period_check(per2, ip2, wd, s2, s1, h.inv, fam.i, fam.j, samples2, depth);
  rep.checks = {per1, per2, ip1, ip2, wd};
  return rep;
}

// ---- gradedness

// eta1(x(0, m)) = eta2(h(x)(0, g)) - eta2(h(sigma^m x)(0, f)), both directions.
// The grading group is Z^r written additively; r = 0 is the trivial group.
template <class S1, class S2>
Report check_graded(const S1& s1, const S2& s2, const BoundaryMap<typename S1::Point, typename S2::Point>& h,
                    const CocycleFamily<typename S1::Point, typename S2::Point>& fam,
                    const PathFunctor<typename S1::Point>& eta1, const PathFunctor<typename S2::Point>& eta2,
                    const std::vector<typename S1::Point>& samples1, const std::vector<typename S2::Point>& samples2,
                    const std::vector<Vec>& degrees1, const std::vector<Vec>& degrees2) {
  Report rep;
  rep.envelope = {{"map", h.name},
                  {"samples", std::to_string(samples1.size()) + "+" + std::to_string(samples2.size())}};
  auto one = [](Check& c, const auto& a, const auto& hh, const auto& F, const auto& G, const auto& ea, const auto& eb,
                const auto& samples, const std::vector<Vec>& degrees) {
    for (const auto& x : samples)
      for (const Vec& m : detail::degrees_below(a, degrees, x)) {
        Vec f = detail::need(a, F, m, x, "f"), g = detail::need(a, G, m, x, "g");
        Vec lhs = ea(x, m);
        Vec rhs = eb(hh(x), g) - eb(hh(a.shift(x, m)), f);
        c.record(lhs == rhs, [&] {
          return "x=" + a.format(x) + " m=" + to_string(m) + ": " + to_string(lhs) + " != " + to_string(rhs);
        });
      }
  };
  Check c1("graded"), c2("graded_inverse");
  one(c1, s1, h.fwd, fam.f, fam.g, eta1, eta2, samples1, degrees1);
  one(c2, s2, h.inv, fam.i, fam.j, eta2, eta1, samples2, degrees2);
  rep.checks = {c1, c2};
  return rep;
}

// ---- arrow maps

template <class S>
Arrow<typename S::Point> unit_arrow(const S& sp, const typename S::Point& x) {
  Vec z = zero_vec(sp.rank());
  return {x, z, x, z, z};
}

template <class S>
Arrow<typename S::Point> shift_arrow(const S& sp, const typename S::Point& x, const Vec& m) {
  return {x, m, sp.shift(x, m), m, zero_vec(sp.rank())};
}

template <class S>
Arrow<typename S::Point> compose_arrows(const S& sp, const Arrow<typename S::Point>& a, const Arrow<typename S::Point>& b) {
  if (a.y != b.x) fail("NotComposable", sp.format(a.y) + " != " + sp.format(b.x));
  auto c = sp.try_arrow(a.x, a.m + b.m, b.y);
  if (!c) fail("NotAnArrow", "composite of two arrows is not an arrow");
  return *c;
}

template <class P>
Arrow<P> inverse_arrow(const Arrow<P>& a) {
  return {a.y, -a.m, a.x, a.q, a.p};
}

template <class S>
std::string format_arrow(const S& sp, const Arrow<typename S::Point>& a) {
  return "(" + sp.format(a.x) + "; " + to_string(a.m) + "; " + sp.format(a.y) + ")";
}

// Composable pairs built from each sample: (a, a^-1) and (a, (y, m, sigma^m y)).
template <class S>
std::vector<std::pair<Arrow<typename S::Point>, Arrow<typename S::Point>>> composable_pairs(
    const S& sp, const std::vector<Arrow<typename S::Point>>& arrows, const std::vector<Vec>& degrees) {
  std::vector<std::pair<Arrow<typename S::Point>, Arrow<typename S::Point>>> out;
  for (const auto& a : arrows) {
    out.push_back({a, inverse_arrow(a)});
    for (const Vec& m : detail::degrees_below(sp, degrees, a.y)) out.push_back({a, shift_arrow(sp, a.y, m)});
  }
  return out;
}

// Units to units, phi(ab) = phi(a) phi(b), phi^-1 phi = id, and optionally a
// pair of cocycles c1 = c2 o phi.
template <class S1, class S2>
Report check_arrow_map(const S1& s1, const S2& s2, const ArrowMap<typename S1::Point, typename S2::Point>& phi,
                       const std::vector<Arrow<typename S1::Point>>& arrows, const std::vector<Vec>& degrees,
                       const std::function<Vec(const Arrow<typename S1::Point>&)>& c1 = {},
                       const std::function<Vec(const Arrow<typename S2::Point>&)>& c2 = {}) {
  Report rep;
  rep.envelope = {{"map", phi.name}, {"arrows", std::to_string(arrows.size())}};
  Check unit("unit"), hom("homomorphism"), inv("inverse"), coc("cocycle");
  for (const auto& a : arrows) {
    auto u = phi.fwd(unit_arrow(s1, a.x));
    unit.record(u.x == u.y && is_zero(u.m), [&] { return "unit at " + s1.format(a.x) + " maps to " + format_arrow(s2, u); });
    auto b = phi.fwd(a);
    inv.record(phi.inv(b) == a, [&] { return "phi^-1 phi != id at " + format_arrow(s1, a); });
    if (c1 && c2) {
      Vec l = c1(a), r = c2(b);
      coc.record(l == r, [&] { return format_arrow(s1, a) + ": " + to_string(l) + " != " + to_string(r); });
    }
  }
  for (const auto& [a, b] : composable_pairs(s1, arrows, degrees)) {
    auto lhs = phi.fwd(compose_arrows(s1, a, b));
    auto fa = phi.fwd(a), fb = phi.fwd(b);
    bool ok = fa.y == fb.x && lhs == compose_arrows(s2, fa, fb);
    hom.record(ok, [&] { return "phi(ab) != phi(a)phi(b) for a=" + format_arrow(s1, a) + " b=" + format_arrow(s1, b); });
  }
  rep.checks = {unit, hom, inv};
  if (c1 && c2) rep.checks.push_back(coc);
  return rep;
}

// Degrees at which check_period_preserving evaluates the lags of x.
template <class S>
std::vector<Vec> period_degrees(const S& sp, const std::vector<typename S::Point>& samples, int depth) {
  std::set<Vec> out;
  for (const auto& x : samples) {
    Vec t = zero_vec(sp.rank());
    Vec d = sp.degree(x);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = d[i] >= kInf ? 1 : 0;
    for (const PeriodGroup& grp : {sp.per(x), sp.ip(x, depth)})
      for (const Vec& b : grp.basis)
        for (const Vec& v : {pos_part(b), neg_part(b)}) {
          out.insert(v);
          out.insert(v + t);
        }
  }
  return {out.begin(), out.end()};
}

// Degrees at which induced_groupoid_hom evaluates the lags for these arrows.
template <class S>
std::vector<Vec> arrow_degrees(const S& sp, const std::vector<Arrow<typename S::Point>>& arrows) {
  std::set<Vec> out;
  for (const auto& a : arrows) {
    Vec t = zero_vec(sp.rank());
    Vec d = sp.degree(a.x);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = d[i] >= kInf ? 1 : 0;
    Vec l = sp.lag(a);
    for (const Vec& v : {l, l - a.m, l + t, l - a.m + t}) out.insert(v);
  }
  return {out.begin(), out.end()};
}

// (x, m, y) with witness (p, q) maps to (h x, p_p(x) - p_q(y), h y), read at
// the least witness (l, l - m). A second witness shifted along the infinite
// coordinates must give the same middle.
template <class S1, class S2>
ArrowMap<typename S1::Point, typename S2::Point> induced_groupoid_hom(
    const S1& s1, const S2& s2, const BoundaryMap<typename S1::Point, typename S2::Point>& h,
    const CocycleFamily<typename S1::Point, typename S2::Point>& fam) {
  auto one = [](const auto& a, const auto& b, const auto& hh, const auto& F, const auto& G, const auto& arr) {
    auto p = [&](const Vec& m, const auto& x) { return detail::need(a, G, m, x, "g") - detail::need(a, F, m, x, "f"); };
    Vec t = zero_vec(a.rank());
    Vec d = a.degree(arr.x);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = d[i] >= kInf ? 1 : 0;
    // the least witness (l, l - m), and the same pushed along the infinite coordinates
    Vec l = a.lag(arr);
    Vec mid = p(l, arr.x) - p(l - arr.m, arr.y);
    Vec alt = p(l + t, arr.x) - p(l - arr.m + t, arr.y);
    if (mid != alt)
      fail("WitnessDisagreement", format_arrow(a, arr) + " gives " + to_string(mid) + " and " + to_string(alt));
    auto out = b.try_arrow(hh(arr.x), mid, hh(arr.y));
    if (!out) fail("NotAnArrow", "image of " + format_arrow(a, arr) + " is not an arrow");
    return *out;
  };
  ArrowMap<typename S1::Point, typename S2::Point> phi;
  phi.name = "induced(" + h.name + ")";
  phi.fwd = [=, &s1, &s2](const Arrow<typename S1::Point>& a) { return one(s1, s2, h.fwd, fam.f, fam.g, a); };
  phi.inv = [=, &s1, &s2](const Arrow<typename S2::Point>& a) { return one(s2, s1, h.inv, fam.i, fam.j, a); };
  return phi;
}

// ---- cocycles from a groupoid isomorphism

template <class S1, class S2>
struct IsoFamily {
  BoundaryMap<typename S1::Point, typename S2::Point> h;
  CocycleTable<S1> table1;
  CocycleTable<S2> table2;
};

namespace detail {

// g_m(x) = l(phi(x, m, sigma^m x)) and f_m = g_m - c(phi(...)), tabulated on
// the coarsest cut of the partition on which both are constant.
template <class SA, class SB>
CocycleTable<SA> tabulate(const SA& a, const SB& b,
                          const std::function<Arrow<typename SB::Point>(const Arrow<typename SA::Point>&)>& phi,
                          const std::vector<Vec>& degrees, int depth) {
  CocycleTable<SA> tab;
  for (const Vec& m : degrees) {
    bool done = false;
    for (int t = 0; t <= depth && !done; ++t) {
      std::vector<typename CocycleTable<SA>::Row> rows;
      bool constant = true;
      for (const auto& cyl : a.partition(m, t)) {
        std::optional<std::pair<Vec, Vec>> val;
        for (const auto& x : a.cyl_points(cyl)) {
          auto img = phi(shift_arrow(a, x, m));
          Vec g = b.lag(img);
          std::pair<Vec, Vec> fg{g - img.m, g};
          if (!val) val = fg;
          else if (*val != fg) constant = false;
          if (!constant) break;
        }
        if (!constant) break;
        if (val) rows.push_back({cyl, val->first, val->second});
      }
      if (constant) {
        tab.rows[m] = std::move(rows);
        tab.refinement = std::max(tab.refinement, t);
        done = true;
      }
    }
    if (!done) fail("PartitionNotStabilized", "degree " + to_string(m) + " up to depth " + std::to_string(depth));
  }
  return tab;
}

}  // namespace detail

template <class S1, class S2>
IsoFamily<S1, S2> cocycles_from_iso(const S1& s1, const S2& s2,
                                    const ArrowMap<typename S1::Point, typename S2::Point>& phi,
                                    const std::vector<Vec>& degrees1, const std::vector<Vec>& degrees2, int depth) {
  IsoFamily<S1, S2> out;
  out.h.name = "from(" + phi.name + ")";
  out.h.fwd = [&s1, phi](const typename S1::Point& x) { return phi.fwd(unit_arrow(s1, x)).x; };
  out.h.inv = [&s2, phi](const typename S2::Point& y) { return phi.inv(unit_arrow(s2, y)).x; };
  out.table1 = detail::tabulate<S1, S2>(s1, s2, phi.fwd, degrees1, depth);
  out.table2 = detail::tabulate<S2, S1>(s2, s1, phi.inv, degrees2, depth);
  return out;
}

// ---- eventual conjugacy

// sigma^f(h(sigma^m x)) = sigma^(f + m)(h(x)), and the same for h^-1 with j.
template <class S1, class S2>
Report check_eventual_conjugacy(const S1& s1, const S2& s2, const BoundaryMap<typename S1::Point, typename S2::Point>& h,
                                const LagFn<typename S1::Point>& F, const LagFn<typename S2::Point>& J,
                                const std::vector<typename S1::Point>& samples1,
                                const std::vector<typename S2::Point>& samples2, const std::vector<Vec>& degrees) {
  if (s1.rank() != s2.rank())
    fail("RankMismatch", std::to_string(s1.rank()) + " != " + std::to_string(s2.rank()));
  Report rep;
  rep.envelope = {{"map", h.name},
                  {"samples", std::to_string(samples1.size()) + "+" + std::to_string(samples2.size())},
                  {"degrees", std::to_string(degrees.size())}};
  auto one = [&](Check& c, const auto& a, const auto& b, const auto& hh, const auto& L, const auto& samples) {
    for (const auto& x : samples)
      for (const Vec& m : detail::degrees_below(a, degrees, x)) {
        Vec f = detail::need(a, L, m, x, "f");
        auto y1 = hh(a.shift(x, m)), y2 = hh(x);
        bool fits = leq(zero_vec(b.rank()), f) && leq(f, b.degree(y1)) && leq(f + m, b.degree(y2));
        bool ok = fits && b.shift(y1, f) == b.shift(y2, f + m);
        c.record(ok, [&] {
          return "x=" + a.format(x) + " m=" + to_string(m) + " f=" + to_string(f) +
                 (fits ? ": " + b.format(b.shift(y1, f)) + " != " + b.format(b.shift(y2, f + m))
                       : ": lag exceeds degree");
        });
      }
  };
  Check fwd("conjugacy"), bwd("conjugacy_inverse");
  one(fwd, s1, s2, h.fwd, F, samples1);
  one(bwd, s2, s1, h.inv, J, samples2);
  rep.checks = {fwd, bwd};
  return rep;
}

template <class P>
LagFn<P> constant_lag(Vec v) {
  return [v](const Vec&, const P&) -> std::optional<Vec> { return v; };
}

// ---- maps between finite k-graphs

// Maps boundary paths edge by edge. The vertex and edge bijections must
// preserve colors, endpoints and squares.
inline BoundaryMap<BoundaryPath, BoundaryPath> relabel_map(const KGraph& g1, const KGraph& g2,
                                                           const std::vector<int>& vmap, const std::vector<int>& emap) {
  auto bad = [](const std::string& s) { fail("NotAnIsomorphism", s); };
  if (g1.rank() != g2.rank()) bad("ranks differ");
  if (vmap.size() != g1.num_vertices() || g2.num_vertices() != vmap.size()) bad("vertex counts differ");
  if (emap.size() != g1.edges().size() || g2.edges().size() != emap.size()) bad("edge counts differ");
  std::vector<int> vinv(vmap.size(), -1), einv(emap.size(), -1);
  for (std::size_t v = 0; v < vmap.size(); ++v) {
    if (vmap[v] < 0 || static_cast<std::size_t>(vmap[v]) >= vmap.size() || vinv[static_cast<std::size_t>(vmap[v])] >= 0)
      bad("vertex map is not a bijection");
    vinv[static_cast<std::size_t>(vmap[v])] = static_cast<int>(v);
  }
  for (std::size_t e = 0; e < emap.size(); ++e) {
    if (emap[e] < 0 || static_cast<std::size_t>(emap[e]) >= emap.size() || einv[static_cast<std::size_t>(emap[e])] >= 0)
      bad("edge map is not a bijection");
    einv[static_cast<std::size_t>(emap[e])] = static_cast<int>(e);
    const Edge& a = g1.edges()[e];
    const Edge& b = g2.edges()[static_cast<std::size_t>(emap[e])];
    if (a.color != b.color || vmap[static_cast<std::size_t>(a.src)] != b.src ||
        vmap[static_cast<std::size_t>(a.tgt)] != b.tgt)
      bad("edge " + a.id + " is not sent to a matching edge");
  }
  for (std::size_t a = 0; a < g1.edges().size(); ++a)
    for (int c = 0; c < g1.rank(); ++c) {
      if (c == g1.edges()[a].color) continue;
      for (int b : g1.edges_at(g1.edges()[a].src, c)) {
        auto [x, y] = g1.swap(static_cast<int>(a), b);
        auto [x2, y2] = g2.swap(emap[a], emap[static_cast<std::size_t>(b)]);
        if (emap[static_cast<std::size_t>(x)] != x2 || emap[static_cast<std::size_t>(y)] != y2)
          bad("square " + g1.edge_name(static_cast<int>(a)) + "." + g1.edge_name(b) + " is not preserved");
      }
    }
  auto move = [](const KGraph& to, std::vector<int> vm, std::vector<int> em) {
    return [&to, vm, em](const BoundaryPath& x) {
      auto path = [&](const Path& p) {
        if (p.is_vertex()) return to.vertex(vm[static_cast<std::size_t>(p.r)]);
        std::vector<int> w;
        for (int e : p.e) w.push_back(em[static_cast<std::size_t>(e)]);
        return to.from_word(w);
      };
      return make_boundary(to, path(x.prefix), path(x.cycle), x.finite);
    };
  };
  return {"relabel", move(g2, vmap, emap), move(g1, vinv, einv)};
}

// Vertices and edges matched by position in the fixture files.
inline BoundaryMap<BoundaryPath, BoundaryPath> relabel_by_position(const KGraph& g1, const KGraph& g2) {
  std::vector<int> v(g1.num_vertices()), e(g1.edges().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<int>(i);
  return relabel_map(g1, g2, v, e);
}

// x -> e' sigma^{e_c}(x) where e = x(0, e_c) and e' = emap(e): only the first
// edge of color c is relabeled. With lag e_c this is an eventual conjugacy,
// with lag 0 it is not (unless emap fixes every edge).
inline BoundaryMap<BoundaryPath, BoundaryPath> perturb_first_edge(const KGraph& g, int color, const std::vector<int>& emap) {
  if (emap.size() != g.edges().size()) fail("NotAnIsomorphism", "edge map has the wrong size");
  std::vector<int> inv(emap.size(), -1);
  for (std::size_t e = 0; e < emap.size(); ++e) {
    const Edge &a = g.edges()[e], &b = g.edges().at(static_cast<std::size_t>(emap[e]));
    if (a.color != b.color || a.src != b.src || a.tgt != b.tgt || (a.color != color && emap[e] != static_cast<int>(e)))
      fail("NotAnIsomorphism", g.edge_name(static_cast<int>(e)) + " -> " + b.id + " moves endpoints or another color");
    if (inv[static_cast<std::size_t>(emap[e])] != -1) fail("NotAnIsomorphism", "edge map is not injective");
    inv[static_cast<std::size_t>(emap[e])] = static_cast<int>(e);
  }
  auto move = [&g, color](std::vector<int> m) {
    return [&g, color, m](const BoundaryPath& x) {
      Vec ec = unit_vec(g.rank(), color);
      if (!leq(ec, degree(x))) return x;
      int e = bp_segment(g, x, zero_vec(g.rank()), ec).e.front();
      return extend(g, g.edge_path(m[static_cast<std::size_t>(e)]), shift(g, x, ec));
    };
  };
  return {"perturb_first_edge", move(emap), move(inv)};
}

template <class S>
ArrowMap<typename S::Point, typename S::Point> arrow_map_of(const S& sp, const BoundaryMap<typename S::Point, typename S::Point>& h) {
  auto move = [&sp](const auto& hh) {
    return [&sp, hh](const Arrow<typename S::Point>& a) {
      auto b = sp.try_arrow(hh(a.x), a.m, hh(a.y));
      if (!b) fail("NotAnArrow", "relabelled arrow is not an arrow");
      return *b;
    };
  };
  return {h.name, move(h.fwd), move(h.inv)};
}

// Same, with different source and target spaces of equal rank.
template <class S1, class S2>
ArrowMap<typename S1::Point, typename S2::Point> conjugacy_arrow_map(
    const S1& s1, const S2& s2, const BoundaryMap<typename S1::Point, typename S2::Point>& h) {
  ArrowMap<typename S1::Point, typename S2::Point> out;
  out.name = h.name;
  out.fwd = [&s2, h](const Arrow<typename S1::Point>& a) {
    auto b = s2.try_arrow(h.fwd(a.x), a.m, h.fwd(a.y));
    if (!b) fail("NotAnArrow", "image is not an arrow");
    return *b;
  };
  out.inv = [&s1, h](const Arrow<typename S2::Point>& a) {
    auto b = s1.try_arrow(h.inv(a.x), a.m, h.inv(a.y));
    if (!b) fail("NotAnArrow", "image is not an arrow");
    return *b;
  };
  return out;
}

// ---- 2-graphs with the same skeleton

// Edges of x read along the alternating staircase: at step j take color
// j mod 2 if x continues in it, otherwise the other color. Returns at most
// `steps` edges.
inline std::vector<int> alternating_word(const KGraph& g, const BoundaryPath& x, std::size_t steps) {
  std::vector<int> w;
  Vec pos = zero_vec(2), d = degree(x);
  for (std::size_t j = 0; j < steps; ++j) {
    int c = static_cast<int>(j % 2);
    if (pos[static_cast<std::size_t>(c)] >= d[static_cast<std::size_t>(c)]) c = 1 - c;
    if (pos[static_cast<std::size_t>(c)] >= d[static_cast<std::size_t>(c)]) break;
    Vec next = pos + unit_vec(2, c);
    w.push_back(bp_segment(g, x, pos, next).e.front());
    pos = next;
  }
  return w;
}

namespace detail {

inline void require_same_skeleton(const KGraph& g1, const KGraph& g2) {
  if (g1.rank() != 2 || g2.rank() != 2)
    fail("RankUnsupported", "same-skeleton maps need rank 2, got " + std::to_string(g1.rank()) + " and " +
                                std::to_string(g2.rank()));
  bool same = g1.num_vertices() == g2.num_vertices() && g1.edges().size() == g2.edges().size();
  for (std::size_t v = 0; same && v < g1.num_vertices(); ++v)
    same = g1.vertex_name(static_cast<int>(v)) == g2.vertex_name(static_cast<int>(v));
  for (std::size_t e = 0; same && e < g1.edges().size(); ++e) {
    const Edge &a = g1.edges()[e], &b = g2.edges()[e];
    same = a.id == b.id && a.color == b.color && a.src == b.src && a.tgt == b.tgt;
  }
  if (!same) fail("SkeletonMismatch", "vertex or edge data differ");
}

// Re-read x's alternating word in g2. The state (sigma^pos x, step parity)
// recurs, which splits the word into a prefix and a cycle.
inline BoundaryPath reread(const KGraph& g1, const KGraph& g2, const BoundaryPath& x) {
  std::map<std::pair<BoundaryPath, int>, std::size_t> seen;
  std::vector<int> w;
  Vec pos = zero_vec(2), d = degree(x);
  std::size_t cut = 0;
  bool cyclic = false;
  for (std::size_t j = 0;; ++j) {
    auto key = std::make_pair(shift(g1, x, pos), static_cast<int>(j % 2));
    if (auto it = seen.find(key); it != seen.end()) {
      cut = it->second;
      cyclic = true;
      break;
    }
    seen.emplace(key, j);
    int c = static_cast<int>(j % 2);
    if (pos[static_cast<std::size_t>(c)] >= d[static_cast<std::size_t>(c)]) c = 1 - c;
    if (pos[static_cast<std::size_t>(c)] >= d[static_cast<std::size_t>(c)]) break;
    Vec next = pos + unit_vec(2, c);
    w.push_back(bp_segment(g1, x, pos, next).e.front());
    pos = next;
  }
  std::vector<int> pre(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(cyclic ? cut : w.size()));
  std::vector<int> cyc(w.begin() + static_cast<std::ptrdiff_t>(pre.size()), w.end());
  Path prefix = pre.empty() ? g2.vertex(x.r()) : g2.from_word(pre);
  Path cycle = cyc.empty() ? g2.vertex(prefix.s) : g2.from_word(cyc);
  return make_boundary(g2, prefix, cycle, x.finite);
}

}  // namespace detail

inline BoundaryMap<BoundaryPath, BoundaryPath> same_skeleton_homeo(const KGraph& g1, const KGraph& g2) {
  detail::require_same_skeleton(g1, g2);
  return {"same_skeleton",
          [&g1, &g2](const BoundaryPath& x) { return detail::reread(g1, g2, x); },
          [&g1, &g2](const BoundaryPath& y) { return detail::reread(g2, g1, y); }};
}

// ---- Omega_{k, infinity} orbit equivalences from bijections of N^k

struct OmegaBijection {
  std::string name;
  int k1 = 1, k2 = 1;
  std::function<Vec(const Vec&)> fwd, inv;
};

inline OmegaBijection omega_identity(int k) {
  return {"identity", k, k, [](const Vec& n) { return n; }, [](const Vec& n) { return n; }};
}

// n -> r_to_rk(rk_to_r(n)): graded enumeration of N^k1 read back in N^k2
inline OmegaBijection omega_diagonal(int k1, int k2) {
  return {"diagonal", k1, k2, [k2](const Vec& n) { return r_to_rk(rk_to_r(n), k2); },
          [k1](const Vec& n) { return r_to_rk(rk_to_r(n), k1); }};
}

inline OmegaBijection omega_swap() {
  auto sw = [](const Vec& n) { return Vec{n[1], n[0]}; };
  return {"swap", 2, 2, sw, sw};
}

struct OmegaCoe {
  OmegaSpace s1, s2;
  BoundaryMap<Vec, Vec> h;
  CocycleFamily<Vec, Vec> fam;
};

// h(x_n) = x_phi(n), f_m(x_n) = phi(n), g_m(x_n) = phi(n + m). The roundtrip
// is checked on the first `bound` + 1 layers of both sides.
inline OmegaCoe omega_coe(const OmegaBijection& phi, int bound) {
  for (int side = 0; side < 2; ++side) {
    int k = side == 0 ? phi.k1 : phi.k2;
    const auto& there = side == 0 ? phi.fwd : phi.inv;
    const auto& back = side == 0 ? phi.inv : phi.fwd;
    for (std::uint64_t r = 0; total(r_to_rk(r, k)) <= bound; ++r) {
      Vec n = r_to_rk(r, k);
      Vec img = there(n);
      if (static_cast<int>(img.size()) != (side == 0 ? phi.k2 : phi.k1) || !leq(zero_vec(static_cast<int>(img.size())), img) ||
          back(img) != n)
        fail("NotBijective", phi.name + " fails to round-trip at " + to_string(n));
    }
  }
  auto F = phi.fwd, I = phi.inv;
  CocycleFamily<Vec, Vec> fam{
      [F](const Vec&, const Vec& x) -> std::optional<Vec> { return F(x); },
      [F](const Vec& m, const Vec& x) -> std::optional<Vec> { return F(x + m); },
      [I](const Vec&, const Vec& x) -> std::optional<Vec> { return I(x); },
      [I](const Vec& m, const Vec& x) -> std::optional<Vec> { return I(x + m); }};
  return {OmegaSpace(phi.k1), OmegaSpace(phi.k2), {phi.name, F, I}, fam};
}

// ---- aperiodicity

enum class Aperiodicity { Aperiodic, Periodic, Unknown };

inline const char* to_string(Aperiodicity a) {
  switch (a) {
    case Aperiodicity::Aperiodic: return "Aperiodic";
    case Aperiodicity::Periodic: return "Periodic";
    case Aperiodicity::Unknown: return "Unknown";
  }
  return "?";
}

struct AperiodicityReport {
  Aperiodicity verdict = Aperiodicity::Unknown;
  int depth = 0;
  std::vector<std::string> witnesses;  // one per vertex, or the obstructions
};

// x at v is a witness to depth d when lambda x != mu x for all distinct
// lambda, mu in Lambda^(<= d) ending at v. Eventually periodic candidates
// from the catalog only, so Aperiodic means "to this depth".
inline AperiodicityReport is_aperiodic(const KGraph& g, int depth) {
  AperiodicityReport rep;
  rep.depth = depth;
  const int k = g.rank();
  Vec one = ones_vec(k);
  auto cands = boundary_catalog(g, Vec(static_cast<std::size_t>(k), std::max(depth, 1)), one);
  std::vector<Path> paths;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (const Path& p : g.paths_below(static_cast<int>(v), Vec(static_cast<std::size_t>(k), depth))) paths.push_back(p);
  bool all_found = true, all_ip = true;
  std::vector<std::string> obstructions;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::optional<BoundaryPath> found;
    bool any = false;
    for (const BoundaryPath& x : cands) {
      if (x.r() != static_cast<int>(v)) continue;
      any = true;
      std::map<BoundaryPath, const Path*> images;
      bool ok = true;
      for (const Path& p : paths) {
        if (p.s != x.r()) continue;
        if (!images.emplace(extend(g, p, x), &p).second) {
          ok = false;
          break;
        }
      }
      if (ok) {
        found = x;
        break;
      }
      if (ip_group(g, x, depth).basis.empty()) all_ip = false;
      else obstructions.push_back(format_boundary(g, x) + " has IP " + std::to_string(ip_group(g, x, depth).basis.size()) + "-generated");
    }
    if (found) rep.witnesses.push_back(g.vertex_name(static_cast<int>(v)) + ": " + format_boundary(g, *found));
    else all_found = false;
    if (!any) all_ip = false;
  }
  if (all_found) rep.verdict = Aperiodicity::Aperiodic;
  else if (all_ip) {
    rep.verdict = Aperiodicity::Periodic;
    rep.witnesses = obstructions;
  }
  return rep;
}

// In Omega_{k, infinity} each vertex has one boundary path and its translates
// have distinct ranges.
inline AperiodicityReport is_aperiodic(const OmegaSpace& s, int depth) {
  return {Aperiodicity::Aperiodic, depth, {"every vertex n: x" + to_string(zero_vec(s.rank())) + " translated to n"}};
}

}  // namespace kgraph
