#pragma once

#include "kgraph/equivalences.hpp"

namespace kgraph {

// ---- the stabilization S Lambda
//
// S Lambda attaches a copy of Omega_{k, infinity} at every vertex. Its vertices
// are pairs (v, n), and mu_{n, v} is the unique Omega-path from (v, n) down to
// (v, 0) = v. Nothing is stored: every path is mu_{n, r(lambda)} lambda.

struct StabPath {
  Vec n;
  Path base;

  Vec degree() const { return n + base.d; }
  friend bool operator==(const StabPath&, const StabPath&) = default;
};

struct StabKGraph {
  const KGraph* base;

  int rank() const { return base->rank(); }
  std::string vertex_name(int v, const Vec& n) const { return "(" + base->vertex_name(v) + "," + to_string(n) + ")"; }
  StabPath mu(int v, const Vec& n) const { return {n, base->vertex(v)}; }
  // vertices (v, n) with n <= bound
  std::size_t count_vertices(const Vec& bound) const { return base->num_vertices() * box(bound).size(); }
  std::string format(const StabPath& p) const {
    return "mu" + to_string(p.n) + (p.base.is_vertex() ? "@" + base->vertex_name(p.base.r) : "." + base->format(p.base));
  }
};

inline StabKGraph stabilize(const KGraph& g) { return StabKGraph{&g}; }

// mu_{n, r(x)} x
struct StabPoint {
  Vec n;
  BoundaryPath x;

  friend bool operator==(const StabPoint&, const StabPoint&) = default;
  friend std::strong_ordering operator<=>(const StabPoint& a, const StabPoint& b) {
    if (auto c = a.n <=> b.n; c != 0) return c;
    return a.x <=> b.x;
  }
};

inline StabPoint stab_boundary(const BoundaryPath& x, const Vec& n) { return {n, x}; }

// Levels are tabulated up to level_bound in every coordinate; lags at deeper
// points are reported as cover gaps.
struct StabSpace {
  using Point = StabPoint;

  struct Cyl {
    Vec n;
    GraphSpace::Cyl base;
    friend bool operator==(const Cyl&, const Cyl&) = default;
  };

  StabSpace(const KGraph& graph, int bound) : g(&graph), level_bound(bound), base_(graph) {}

  const KGraph* g;
  int level_bound;

  int rank() const { return g->rank(); }
  Vec degree(const Point& p) const { return p.n + kgraph::degree(p.x); }
  // sigma^m(mu_n x) = mu_{(n-m)+} sigma^{(m-n)+}(x)
  Point shift(const Point& p, const Vec& m) const {
    if (!leq(m, degree(p))) fail("DegreeOutOfRange", to_string(m) + " exceeds " + to_string(degree(p)));
    return {pos_part(p.n - m), kgraph::shift(*g, p.x, pos_part(m - p.n))};
  }
  // (mu_p x, M, mu_q y) is an arrow iff (x, M - p + q, y) is; witnesses move by (p, q)
  std::optional<Arrow<Point>> try_arrow(const Point& a, const Vec& M, const Point& b) const {
    auto base = kgraph::try_arrow(*g, a.x, M - a.n + b.n, b.x);
    if (!base) return std::nullopt;
    return Arrow<Point>{a, M, b, a.n + base->p, b.n + base->q};
  }
  Vec lag(const Arrow<Point>& a) const { return lex_lag(*this, a); }
  PeriodGroup per(const Point& p) const { return base_.per(p.x); }
  PeriodGroup ip(const Point& p, int depth) const { return base_.ip(p.x, depth); }
  std::string format(const Point& p) const { return "mu" + to_string(p.n) + " " + format_boundary(*g, p.x); }

  std::vector<Point> points(std::size_t n, std::uint64_t seed) const {
    std::vector<Point> pool;
    for (const Vec& lv : box(Vec(static_cast<std::size_t>(rank()), level_bound)))
      for (const BoundaryPath& x : base_.catalog()) pool.push_back({lv, x});
    return sample_from(pool, n, seed);
  }
  std::vector<Arrow<Point>> arrows(std::size_t n, std::uint64_t seed) const;

  std::vector<Cyl> partition(const Vec& m, int t) const {
    std::vector<Cyl> out;
    for (const Vec& lv : box(Vec(static_cast<std::size_t>(rank()), level_bound)))
      for (const auto& c : base_.partition(pos_part(m - lv), t)) out.push_back({lv, c});
    return out;
  }
  bool in_cyl(const Point& p, const Cyl& c) const { return p.n == c.n && base_.in_cyl(p.x, c.base); }
  std::vector<Point> cyl_points(const Cyl& c) const {
    std::vector<Point> out;
    for (const auto& x : base_.cyl_points(c.base)) out.push_back({c.n, x});
    return out;
  }
  std::string format_cyl(const Cyl& c) const { return "mu" + to_string(c.n) + " " + base_.format_cyl(c.base); }

  const GraphSpace& base() const { return base_; }

 private:
  GraphSpace base_;
};

// ---- G_Lambda x R_k  ->  G_{S Lambda}

struct ProductArrow {
  GElem a;
  Vec p, q;  // the pair in R_k = N^k x N^k

  friend bool operator==(const ProductArrow& u, const ProductArrow& v) { return u.a == v.a && u.p == v.p && u.q == v.q; }
};

// ((x, m, y), (p, q)) -> (mu_p x, m + p - q, mu_q y)
inline Arrow<StabPoint> stab_iso(const GElem& a, const Vec& p, const Vec& q) {
  return {{p, a.x}, a.m + p - q, {q, a.y}, p + a.p, q + a.q};
}

inline Arrow<StabPoint> stab_iso(const ProductArrow& u) { return stab_iso(u.a, u.p, u.q); }

// strips the mu-prefixes
inline ProductArrow stab_iso_inverse(const KGraph& g, const Arrow<StabPoint>& s) {
  return {make_arrow(g, s.x.x, s.m - s.x.n + s.y.n, s.y.x), s.x.n, s.y.n};
}

inline ProductArrow product_compose(const KGraph& g, const ProductArrow& u, const ProductArrow& v) {
  if (u.q != v.p) fail("NotComposable", "R_k pairs " + to_string(u.q) + " and " + to_string(v.p));
  return {g_compose(g, u.a, v.a), u.p, v.q};
}

// c-bar(a, (p, q)) = c(a)
inline Vec cbar(const ProductArrow& u) { return u.a.m; }

// eta_Lambda(mu_n lambda) = d(lambda): the degree past the Omega part
inline PathFunctor<StabPoint> stab_eta() {
  return [](const StabPoint& p, const Vec& N) { return pos_part(N - p.n); };
}

// c_eta on an arrow with witness (A, B), checked against a second witness
inline Vec stab_eta_cocycle(const StabSpace& s, const Arrow<StabPoint>& a) {
  auto eta = stab_eta();
  Vec v = eta(a.x, a.p) - eta(a.y, a.q);
  Vec l = s.lag(a);
  Vec w = eta(a.x, l) - eta(a.y, l - a.m);
  if (v != w) fail("WitnessDisagreement", "eta cocycle depends on the witness at " + format_arrow(s, a));
  return v;
}

inline std::vector<Arrow<StabPoint>> StabSpace::arrows(std::size_t n, std::uint64_t seed) const {
  auto base = arrow_samples(*g, n, seed);
  auto levels = box(Vec(static_cast<std::size_t>(rank()), level_bound));
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
  std::vector<Arrow<StabPoint>> out;
  for (const auto& a : base) out.push_back(stab_iso(a, levels[pick(rng)], levels[pick(rng)]));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// R_k ~ R through the graded enumeration of N^k
inline std::pair<std::uint64_t, std::uint64_t> rk_pair_to_r(const Vec& p, const Vec& q) { return {rk_to_r(p), rk_to_r(q)}; }

// The automorphism of G_{S Lambda} induced by a bijection psi of N^k:
// (mu_p x, M, mu_q y) -> (mu_psi(p) x, M - p + q + psi(p) - psi(q), mu_psi(q) y).
// It preserves c_eta and moves levels, so it is not a product of maps on
// the factors unless psi is the identity.
inline ArrowMap<StabPoint, StabPoint> stab_twist(const StabSpace& s, const OmegaBijection& psi) {
  if (psi.k1 != s.rank() || psi.k2 != s.rank()) fail("RankMismatch", "twist needs a bijection of N^" + std::to_string(s.rank()));
  auto move = [&s](std::function<Vec(const Vec&)> f) {
    return [&s, f](const Arrow<StabPoint>& a) {
      Vec p = f(a.x.n), q = f(a.y.n);
      auto b = s.try_arrow({p, a.x.x}, a.m - a.x.n + a.y.n + p - q, {q, a.y.x});
      if (!b) fail("NotAnArrow", "twisted arrow");
      return *b;
    };
  };
  return {"twist(" + psi.name + ")", move(psi.fwd), move(psi.inv)};
}

}  // namespace kgraph
