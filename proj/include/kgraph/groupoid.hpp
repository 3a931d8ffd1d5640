#pragma once

#include "kgraph/boundary.hpp"

namespace kgraph {

// (x, m, y) with sigma^p x = sigma^q y and p - q = m. Equality ignores the
// witness (p, q), which is not canonical.
template <class P>
struct Arrow {
  P x;
  Vec m;
  P y;
  Vec p, q;

  friend bool operator==(const Arrow& a, const Arrow& b) { return a.x == b.x && a.m == b.m && a.y == b.y; }
  friend std::strong_ordering operator<=>(const Arrow& a, const Arrow& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    if (auto c = a.m <=> b.m; c != 0) return c;
    return a.y <=> b.y;
  }
};

using GElem = Arrow<BoundaryPath>;

// Witness search: once both points are past their prefixes they are purely
// periodic and shifts act bijectively on their finite orbits, so a witness
// exists iff the canonical one A = d(px) v (d(py) + m) v m+ works.
inline std::optional<GElem> try_arrow(const KGraph& g, const BoundaryPath& x, const Vec& m, const BoundaryPath& y) {
  const int k = g.rank();
  if (x.finite != y.finite) return std::nullopt;
  Vec dx = degree(x), dy = degree(y);
  for (int i = 0; i < k; ++i) {
    auto s = static_cast<std::size_t>(i);
    if (x.finite[s] && m[s] != dx[s] - dy[s]) return std::nullopt;
  }
  Vec A = join(join(x.prefix.d, y.prefix.d + m), pos_part(m));
  for (int i = 0; i < k; ++i)
    if (x.finite[static_cast<std::size_t>(i)]) A[static_cast<std::size_t>(i)] = dx[static_cast<std::size_t>(i)];
  Vec B = A - m;
  if (!leq(zero_vec(k), B) || !leq(B, dy)) return std::nullopt;
  if (shift(g, x, A) != shift(g, y, B)) return std::nullopt;
  return GElem{x, m, y, A, B};
}

inline GElem make_arrow(const KGraph& g, const BoundaryPath& x, const Vec& m, const BoundaryPath& y) {
  auto a = try_arrow(g, x, m, y);
  if (!a) fail("NotAnArrow", "(" + format_boundary(g, x) + "; " + to_string(m) + "; " + format_boundary(g, y) + ")");
  return *a;
}

inline GElem unit(const BoundaryPath& x) {
  Vec z = zero_vec(static_cast<int>(x.finite.size()));
  return GElem{x, z, x, z, z};
}

inline GElem g_compose(const KGraph& g, const GElem& a, const GElem& b) {
  if (a.y != b.x) fail("NotComposable", format_boundary(g, a.y) + " != " + format_boundary(g, b.x));
  return make_arrow(g, a.x, a.m + b.m, b.y);
}

inline GElem g_inverse(const GElem& a) { return GElem{a.y, -a.m, a.x, a.q, a.p}; }

// (lambda z, d(lambda) - d(mu), mu z)
inline GElem arrow_from(const KGraph& g, const Path& l, const Path& mu, const BoundaryPath& z) {
  return make_arrow(g, extend(g, l, z), l.d - mu.d, extend(g, mu, z));
}

// l(x, m, y): the lex-least l >= m v 0 with sigma^l x = sigma^(l-m) y.
// The admissible set is upward closed, so coordinates are fixed in order.
// Feasibility of a partial choice is decided by pushing the remaining
// infinite coordinates up together: the pair of shifted points moves through
// a finite set, so it either hits a match or repeats.
inline Vec l_cocycle(const KGraph& g, const GElem& a) {
  const int k = g.rank();
  Vec dx = degree(a.x);
  Vec lo = pos_part(a.m);
  auto admissible = [&](const Vec& l) { return shift(g, a.x, l) == shift(g, a.y, l - a.m); };
  auto feasible = [&](const Vec& fixed, int upto) {
    Vec l = fixed;
    Vec step = zero_vec(k);
    for (int i = upto + 1; i < k; ++i) {
      auto s = static_cast<std::size_t>(i);
      if (a.x.finite[s]) {
        l[s] = dx[s];
      } else {
        l[s] = lo[s];
        step[s] = 1;
      }
    }
    std::set<std::pair<BoundaryPath, BoundaryPath>> seen;
    BoundaryPath u = shift(g, a.x, l), w = shift(g, a.y, l - a.m);
    for (;;) {
      if (u == w) return true;
      if (is_zero(step) || !seen.insert({u, w}).second) return false;
      u = shift(g, u, step);
      w = shift(g, w, step);
    }
  };
  Vec l = lo;
  for (int i = 0; i < k; ++i) {
    auto s = static_cast<std::size_t>(i);
    // the previous step found a feasible completion, so this loop ends; the
    // cap only guards against a broken arrow
    std::int64_t hi = a.x.finite[s] ? dx[s] : lo[s] + (std::int64_t{1} << 20);
    for (std::int64_t t = lo[s];; ++t) {
      if (t > hi) fail("NotAnArrow", "no admissible l found");
      l[s] = t;
      if (feasible(l, i)) break;
    }
  }
  if (!admissible(l)) fail("NotAnArrow", "lex search ended outside the admissible set");
  return l;
}

// ---- functors into Z^r

struct Functor {
  int r = 0;
  std::vector<Vec> edge_value;

  Vec eval(const Path& p) const {
    Vec v = zero_vec(r);
    for (int e : p.e) v = v + edge_value[static_cast<std::size_t>(e)];
    return v;
  }
};

// values listed per edge, in the order of g.edges(); square consistency is
// the only condition for this to extend to a functor
inline Functor make_functor(const KGraph& g, int r, const std::vector<Vec>& values) {
  if (values.size() != g.edges().size()) fail("FunctorInconsistent", "need one value per edge");
  Functor f{r, values};
  for (const Vec& v : values)
    if (static_cast<int>(v.size()) != r) fail("FunctorInconsistent", "value of wrong length");
  for (std::size_t a = 0; a < g.edges().size(); ++a)
    for (int c = 0; c < g.rank(); ++c) {
      if (c == g.edges()[a].color) continue;
      for (int b : g.edges_at(g.edges()[a].src, c)) {
        auto [x, y] = g.swap(static_cast<int>(a), b);
        if (values[a] + values[static_cast<std::size_t>(b)] !=
            values[static_cast<std::size_t>(x)] + values[static_cast<std::size_t>(y)])
          fail("FunctorInconsistent", "square " + g.edge_name(static_cast<int>(a)) + "." + g.edge_name(b) +
                                          " = " + g.edge_name(x) + "." + g.edge_name(y));
      }
    }
  return f;
}

inline Functor degree_functor(const KGraph& g) {
  std::vector<Vec> v;
  for (const Edge& e : g.edges()) v.push_back(unit_vec(g.rank(), e.color));
  return Functor{g.rank(), v};
}

// c_eta(x, m, y) = eta(x(0,p)) - eta(y(0,q)); checked against a second witness
inline Vec functor_cocycle(const KGraph& g, const Functor& eta, const GElem& a) {
  Vec v = eta.eval(bp_segment(g, a.x, zero_vec(g.rank()), a.p)) - eta.eval(bp_segment(g, a.y, zero_vec(g.rank()), a.q));
  Vec j = infinite_mask(a.x);
  Vec w = eta.eval(bp_segment(g, a.x, zero_vec(g.rank()), a.p + j)) - eta.eval(bp_segment(g, a.y, zero_vec(g.rank()), a.q + j));
  if (v != w) fail("WitnessDisagreement", "functor cocycle depends on the witness");
  return v;
}

// ---- basis bisections Z(lambda *_s mu \ G)

struct Bisection {
  Path l;
  Path mu;
  std::vector<Path> G;  // sorted

  Vec lag() const { return l.d - mu.d; }
  friend bool operator==(const Bisection&, const Bisection&) = default;
  friend std::strong_ordering operator<=>(const Bisection& a, const Bisection& b) {
    if (auto c = a.l <=> b.l; c != 0) return c;
    if (auto c = a.mu <=> b.mu; c != 0) return c;
    return std::lexicographical_compare_three_way(a.G.begin(), a.G.end(), b.G.begin(), b.G.end());
  }
};

inline Bisection make_bisection(const KGraph& g, const Path& l, const Path& mu, std::vector<Path> G = {}) {
  if (l.s != mu.s) fail("EndpointMismatch", "s(" + g.format(l) + ") != s(" + g.format(mu) + ")");
  for (const Path& n : G)
    if (n.r != l.s) fail("RangeMismatch", g.format(n) + " does not start at s(" + g.format(l) + ")");
  std::sort(G.begin(), G.end());
  G.erase(std::unique(G.begin(), G.end()), G.end());
  if (!G.empty() && g.is_exhaustive(l.s, G)) fail("ExhaustiveG", "G is exhaustive at " + g.vertex_name(l.s));
  return Bisection{l, mu, G};
}

inline std::string format_bisection(const KGraph& g, const Bisection& b) {
  std::string s = "Z(" + g.format(b.l) + " | " + g.format(b.mu);
  if (!b.G.empty()) {
    s += " \\ {";
    for (std::size_t i = 0; i < b.G.size(); ++i) s += (i ? "," : "") + g.format(b.G[i]);
    s += "}";
  }
  return s + ")";
}

// "Z(l | mu \ {n1,n2})"
inline Bisection parse_bisection(const KGraph& g, const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (t.size() < 4 || t.rfind("Z(", 0) != 0 || t.back() != ')') fail("ParseError", "bad bisection '" + text + "'");
  t = t.substr(2, t.size() - 3);
  std::size_t bar = t.find('|');
  if (bar == std::string::npos) fail("ParseError", "bisection needs '|': '" + text + "'");
  std::string left = t.substr(0, bar), right = t.substr(bar + 1);
  std::vector<Path> G;
  std::size_t bs = right.find('\\');
  if (bs != std::string::npos) {
    std::string gs = right.substr(bs + 1);
    right = right.substr(0, bs);
    if (gs.size() < 2 || gs.front() != '{' || gs.back() != '}') fail("ParseError", "bad G in '" + text + "'");
    gs = gs.substr(1, gs.size() - 2);
    std::size_t start = 0;
    while (start < gs.size()) {
      std::size_t comma = gs.find(',', start);
      if (comma == std::string::npos) comma = gs.size();
      G.push_back(g.parse_path(gs.substr(start, comma - start)));
      start = comma + 1;
    }
  }
  return make_bisection(g, g.parse_path(left), g.parse_path(right), G);
}

inline bool bisection_member(const KGraph& g, const GElem& a, const Bisection& b) {
  if (a.m != b.lag()) return false;
  if (!in_cylinder(g, a.x, b.l, b.G) || !in_cylinder(g, a.y, b.mu, b.G)) return false;
  return shift(g, a.x, b.l.d) == shift(g, a.y, b.mu.d);
}

// Z(s(l) \ G) is empty iff G contains the vertex or is exhaustive
// (for locally convex graphs every exhaustive set covers Z(v)).
inline bool empty_complement(const KGraph& g, int v, const std::vector<Path>& G) {
  for (const Path& n : G)
    if (n.is_vertex()) return true;
  return !G.empty() && g.is_exhaustive(v, G);
}

// A B as a disjoint union of basis bisections: mu z = alpha w forces
// z = rho u, w = tau u for a unique (rho, tau) in Lambda^min(mu, alpha).
inline std::vector<Bisection> bisection_product(const KGraph& g, const Bisection& A, const Bisection& B) {
  std::vector<Bisection> out;
  if (A.mu.r != B.l.r) return out;
  for (const auto& [rho, tau] : g.lambda_min(A.mu, B.l)) {
    std::vector<Path> G2;
    for (const Path& n : A.G)
      for (const auto& [s1, s2] : g.lambda_min(rho, n)) G2.push_back(s1);
    for (const Path& n : B.G)
      for (const auto& [s1, s2] : g.lambda_min(tau, n)) G2.push_back(s1);
    std::sort(G2.begin(), G2.end());
    G2.erase(std::unique(G2.begin(), G2.end()), G2.end());
    if (empty_complement(g, rho.s, G2)) continue;
    out.push_back(Bisection{g.compose(A.l, rho), g.compose(B.mu, tau), G2});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- Z(U, m, n, V) for U, V finite unions of cylinders Z(lambda)

inline std::vector<Bisection> zumn_refine(const KGraph& g, const std::vector<Path>& U, const Vec& m, const Vec& n,
                                         const std::vector<Path>& V) {
  const int k = g.rank();
  Vec T = zero_vec(k);
  for (const Path& l : U) T = join(T, pos_part(l.d - m));
  for (const Path& l : V) T = join(T, pos_part(l.d - n));
  // refine to the partitions at levels m + T and n + T; keep pieces long enough to shift
  auto refine = [&](const std::vector<Path>& S, const Vec& sh, const char* name) {
    std::map<Path, Path> tail_of;
    std::map<Path, Path> piece_of_tail;
    for (const Path& l : S)
      for (const Path& al : g.paths_upto(l.s, sh + T - l.d)) {
        Path piece = g.compose(l, al);
        if (!leq(sh, piece.d) || tail_of.count(piece)) continue;
        Path t = g.segment(piece, sh, piece.d);
        auto it = piece_of_tail.find(t);
        if (it != piece_of_tail.end())
          fail("InjectivityUnverifiable", std::string("shift is not injective on ") + name + ": " +
                                              g.format(it->second) + " and " + g.format(piece) + " share the tail " +
                                              g.format(t));
        tail_of[piece] = t;
        piece_of_tail[t] = piece;
      }
    return piece_of_tail;
  };
  auto pu = refine(U, m, "U"), pv = refine(V, n, "V");
  std::vector<Bisection> out;
  for (const auto& [t, a] : pu) {
    auto it = pv.find(t);
    if (it == pv.end()) fail("ImageMismatch", "Z(" + g.format(t) + ") lies in the image of U but not of V");
    out.push_back(Bisection{a, it->second, {}});
  }
  for (const auto& [t, b] : pv)
    if (!pu.count(t)) fail("ImageMismatch", "Z(" + g.format(t) + ") lies in the image of V but not of U");
  std::sort(out.begin(), out.end());
  return out;
}

// ---- isotropy and fullness

enum class IsoVerdict { NotIso, InIso, InInterior };

inline IsoVerdict iso_interior_member(const KGraph& g, const GElem& a, int depth) {
  if (a.x != a.y) return IsoVerdict::NotIso;
  if (is_zero(a.m)) return IsoVerdict::InInterior;
  return ip_group(g, a.x, depth).contains(a.m) ? IsoVerdict::InInterior : IsoVerdict::InIso;
}

inline const char* to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::NotIso: return "NotIso";
    case IsoVerdict::InIso: return "InIso";
    case IsoVerdict::InInterior: return "InInterior";
  }
  return "";
}

enum class FullVerdict { Full, NotFull, Unknown };

struct FullReport {
  FullVerdict verdict = FullVerdict::Unknown;
  int depth = 0;
  std::optional<BoundaryPath> witness;  // a point outside r(s^-1(X))
};

// x lies in r(s^-1(X)) iff x passes through a vertex reachable (backwards
// along paths) from the source of some cylinder of X.
inline FullReport is_full(const KGraph& g, const std::vector<Path>& X, int depth) {
  const int k = g.rank();
  FullReport rep;
  rep.depth = depth;
  std::vector<char> H(g.num_vertices(), 0);
  std::vector<int> todo;
  for (const Path& l : X)
    if (!H[static_cast<std::size_t>(l.s)]) {
      H[static_cast<std::size_t>(l.s)] = 1;
      todo.push_back(l.s);
    }
  while (!todo.empty()) {
    int v = todo.back();
    todo.pop_back();
    for (int c = 0; c < k; ++c)
      for (int e : g.edges_at(v, c)) {
        int w = g.edges()[static_cast<std::size_t>(e)].src;
        if (!H[static_cast<std::size_t>(w)]) {
          H[static_cast<std::size_t>(w)] = 1;
          todo.push_back(w);
        }
      }
  }
  auto through_H = [&](const Path& p) {
    for (const Vec& n : box(p.d))
      if (H[static_cast<std::size_t>(g.vertex_at(p, n))]) return true;
    return false;
  };
  bool all = true;
  for (std::size_t v = 0; v < g.num_vertices() && all; ++v)
    for (const Path& p : g.paths_upto(static_cast<int>(v), Vec(static_cast<std::size_t>(k), depth)))
      if (!through_H(p)) {
        all = false;
        break;
      }
  if (all) {
    rep.verdict = FullVerdict::Full;
    return rep;
  }
  // a point avoiding H altogether
  Vec pre(static_cast<std::size_t>(k), 1), cyc(static_cast<std::size_t>(k), 1);
  for (const BoundaryPath& x : boundary_catalog(g, pre, cyc)) {
    bool avoid = !through_H(x.prefix) && !through_H(x.cycle);
    if (avoid) {
      rep.verdict = FullVerdict::NotFull;
      rep.witness = x;
      return rep;
    }
  }
  return rep;
}

inline const char* to_string(FullVerdict v) {
  switch (v) {
    case FullVerdict::Full: return "Full";
    case FullVerdict::NotFull: return "NotFull";
    case FullVerdict::Unknown: return "Unknown";
  }
  return "";
}

// ---- sample arrows (lambda z, d(lambda) - d(mu), mu z)

inline std::vector<GElem> arrow_catalog(const KGraph& g, const std::vector<BoundaryPath>& points, const Vec& bound) {
  std::set<GElem> out;
  for (const BoundaryPath& z : points) {
    std::vector<Path> into;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
      for (const Path& p : g.paths_below(static_cast<int>(v), bound))
        if (p.s == z.r()) into.push_back(p);
    for (const Path& l : into)
      for (const Path& mu : into) out.insert(arrow_from(g, l, mu, z));
  }
  return {out.begin(), out.end()};
}

// At least n distinct arrows when the groupoid has them: the path bound
// grows until the catalog is large enough (or stops growing).
inline std::vector<GElem> arrow_samples(const KGraph& g, std::size_t n, std::uint64_t seed) {
  const int k = g.rank();
  auto points = boundary_catalog(g, Vec(static_cast<std::size_t>(k), 1), Vec(static_cast<std::size_t>(k), 1));
  std::vector<GElem> cat;
  for (std::int64_t b = 1; b <= 64; ++b) {
    std::size_t before = cat.size();
    cat = arrow_catalog(g, points, Vec(static_cast<std::size_t>(k), b));
    if (cat.size() >= n || (b > 1 && cat.size() == before)) break;
  }
  if (cat.size() <= n) return cat;
  std::mt19937_64 rng(seed);
  std::shuffle(cat.begin(), cat.end(), rng);
  cat.resize(n);
  std::sort(cat.begin(), cat.end());
  return cat;
}

inline std::string format_arrow(const KGraph& g, const GElem& a) {
  return "(" + format_boundary(g, a.x) + "; " + to_string(a.m) + "; " + format_boundary(g, a.y) + ")";
}

}  // namespace kgraph
