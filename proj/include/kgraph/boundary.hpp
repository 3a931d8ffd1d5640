#pragma once

#include <map>
#include <random>
#include <set>

#include "kgraph/kgraph.hpp"

namespace kgraph {

// An eventually periodic boundary path x = prefix cycle cycle ...
// The cycle has degree zero on finite coordinates and positive degree on the
// others. Values produced by this header are canonical: minimal cycle degree,
// then minimal prefix, both in (total, lex) order, so == is point equality.
struct BoundaryPath {
  Path prefix;
  Path cycle;
  std::vector<bool> finite;

  int r() const { return prefix.r; }

  friend bool operator==(const BoundaryPath& a, const BoundaryPath& b) {
    return a.prefix == b.prefix && a.cycle == b.cycle && a.finite == b.finite;
  }
  friend std::strong_ordering operator<=>(const BoundaryPath& a, const BoundaryPath& b) {
    if (auto c = a.prefix <=> b.prefix; c != 0) return c;
    if (auto c = a.cycle <=> b.cycle; c != 0) return c;
    if (a.finite == b.finite) return std::strong_ordering::equal;
    return a.finite < b.finite ? std::strong_ordering::less : std::strong_ordering::greater;
  }
};

inline Vec degree(const BoundaryPath& x) {
  Vec d = x.prefix.d;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!x.finite[i]) d[i] = kInf;
  return d;
}

inline Vec infinite_mask(const BoundaryPath& x) {
  Vec m(x.finite.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = x.finite[i] ? 0 : 1;
  return m;
}

// Check the shape constraints and build without canonicalizing.
inline BoundaryPath make_raw(const KGraph& g, const Path& prefix, const Path& cycle,
                             const std::vector<bool>& finite) {
  if (static_cast<int>(finite.size()) != g.rank()) fail("DegreeOutOfRange", "finite mask has wrong rank");
  if (cycle.r != cycle.s || cycle.r != prefix.s)
    fail("EndpointMismatch", "cycle " + g.format(cycle) + " does not sit at s(" + g.format(prefix) + ")");
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (finite[i] && cycle.d[i] != 0)
      fail("DegreeOutOfRange", "cycle has degree on finite coordinate " + std::to_string(i + 1));
    if (!finite[i] && cycle.d[i] <= 0)
      fail("DegreeOutOfRange", "cycle needs positive degree on coordinate " + std::to_string(i + 1));
  }
  return BoundaryPath{prefix, cycle, finite};
}

// The shortest prefix cycle^t whose degree dominates n.
inline Path unroll(const KGraph& g, const BoundaryPath& x, const Vec& n) {
  if (!leq(n, degree(x)))
    fail("DegreeExceeded", to_string(n) + " exceeds degree " + to_string(degree(x)));
  Path u = x.prefix;
  while (!leq(n, u.d)) u = g.compose(u, x.cycle);
  return u;
}

// x(m, n)
inline Path bp_segment(const KGraph& g, const BoundaryPath& x, const Vec& m, const Vec& n) {
  if (!leq(m, n)) fail("DegreeOutOfRange", to_string(m) + " is not below " + to_string(n));
  return g.segment(unroll(g, x, n), m, n);
}

// (c c c ...)(q, q + d(c)) for a cycle c.
inline Path rotate(const KGraph& g, const Path& c, const Vec& q) {
  if (c.is_vertex()) return c;
  Path u = c;
  while (!leq(q + c.d, u.d)) u = g.compose(u, c);
  return g.segment(u, q, q + c.d);
}

inline BoundaryPath shift_raw(const KGraph& g, const BoundaryPath& x, const Vec& m) {
  Path u = unroll(g, x, m);
  return BoundaryPath{g.segment(u, m, u.d), x.cycle, x.finite};
}

inline BoundaryPath periodic(const KGraph& g, const Path& c, const std::vector<bool>& finite) {
  return BoundaryPath{g.vertex(c.r), c, finite};
}

// Exact equality of the points represented, for any two representations.
inline bool bp_equal(const KGraph& g, const BoundaryPath& x, const BoundaryPath& y) {
  if (x.finite != y.finite || x.r() != y.r()) return false;
  for (std::size_t i = 0; i < x.finite.size(); ++i)
    if (x.finite[i] && x.prefix.d[i] != y.prefix.d[i]) return false;
  Vec N = join(x.prefix.d, y.prefix.d);
  if (bp_segment(g, x, zero_vec(g.rank()), N) != bp_segment(g, y, zero_vec(g.rank()), N)) return false;
  // both tails are purely periodic from N on
  Path cx = bp_segment(g, x, N, N + x.cycle.d);
  Path cy = bp_segment(g, y, N, N + y.cycle.d);
  if (cx.r != cx.s || cy.r != cy.s) return false;
  if (rotate(g, cx, cy.d) != cx) return false;
  Path u = cx;
  while (!leq(cy.d, u.d)) u = g.compose(u, cx);
  return g.segment(u, zero_vec(g.rank()), cy.d) == cy;
}

inline BoundaryPath canonicalize(const KGraph& g, const BoundaryPath& x) {
  const int k = g.rank();
  Vec fixed_zero(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) fixed_zero[static_cast<std::size_t>(i)] = x.finite[static_cast<std::size_t>(i)] ? 0 : -1;
  // minimal period of the tail c c c ...
  Path c = x.cycle;
  if (!c.is_vertex()) {
    for (const Vec& P : bounded_vectors(fixed_zero, 1, total(c.d))) {
      if (P == c.d) break;
      // sigma^P fixes c c c ... iff the rotation fixes c
      if (rotate(g, c, P) == c) {
        Path u = c;
        while (!leq(P, u.d)) u = g.compose(u, c);
        c = g.segment(u, zero_vec(k), P);
        break;
      }
    }
  }
  BoundaryPath base{x.prefix, c, x.finite};
  // minimal start of the periodic part
  Vec fixed_pre(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    fixed_pre[static_cast<std::size_t>(i)] = x.finite[static_cast<std::size_t>(i)] ? x.prefix.d[static_cast<std::size_t>(i)] : -1;
  std::int64_t budget = 0;
  for (int i = 0; i < k; ++i)
    if (!x.finite[static_cast<std::size_t>(i)]) budget += x.prefix.d[static_cast<std::size_t>(i)];
  Vec a = x.prefix.d;
  if (!c.is_vertex()) {
    for (const Vec& cand : bounded_vectors(fixed_pre, 0, budget)) {
      if (cand == x.prefix.d) break;
      BoundaryPath y = shift_raw(g, base, cand);
      Path head = bp_segment(g, y, zero_vec(k), c.d);
      if (head.r != head.s) continue;
      if (bp_equal(g, y, periodic(g, head, x.finite))) {
        a = cand;
        break;
      }
    }
  }
  return BoundaryPath{bp_segment(g, base, zero_vec(k), a), bp_segment(g, base, a, a + c.d), x.finite};
}

inline BoundaryPath make_boundary(const KGraph& g, const Path& prefix, const Path& cycle,
                                  const std::vector<bool>& finite) {
  return canonicalize(g, make_raw(g, prefix, cycle, finite));
}

inline BoundaryPath shift(const KGraph& g, const BoundaryPath& x, const Vec& m) {
  if (!leq(zero_vec(g.rank()), m)) fail("DegreeOutOfRange", "negative shift " + to_string(m));
  return canonicalize(g, shift_raw(g, x, m));
}

// lambda x
inline BoundaryPath extend(const KGraph& g, const Path& l, const BoundaryPath& x) {
  if (l.s != x.r())
    fail("EndpointMismatch", "s(" + g.format(l) + ") != r(x)");
  return canonicalize(g, BoundaryPath{g.compose(l, x.prefix), x.cycle, x.finite});
}

// "prefix=e1.f;cycle=e2.f;finite=[1]" with 1-based finite coordinates.
inline BoundaryPath parse_boundary(const KGraph& g, const std::string& text) {
  std::map<std::string, std::string> kv;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t semi = text.find(';', start);
    if (semi == std::string::npos) semi = text.size();
    std::string item = text.substr(start, semi - start);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) fail("ParseError", "boundary literal item '" + item + "' lacks '='");
    auto trim = [](std::string s) {
      while (!s.empty() && s.front() == ' ') s.erase(s.begin());
      while (!s.empty() && s.back() == ' ') s.pop_back();
      return s;
    };
    kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    start = semi + 1;
  }
  if (!kv.count("prefix") || !kv.count("cycle"))
    fail("ParseError", "boundary literal needs prefix= and cycle=: '" + text + "'");
  Path p = g.parse_path(kv["prefix"]);
  Path c = g.parse_path(kv["cycle"]);
  std::vector<bool> finite(static_cast<std::size_t>(g.rank()), false);
  if (kv.count("finite")) {
    std::string f = kv["finite"];
    std::string inner;
    for (char ch : f)
      if (ch != '[' && ch != ']' && ch != ' ') inner += ch;
    if (!inner.empty())
      for (auto i : parse_vec(inner)) {
        if (i < 1 || i > g.rank()) fail("ParseError", "finite coordinate out of range in '" + text + "'");
        finite[static_cast<std::size_t>(i - 1)] = true;
      }
  }
  return make_boundary(g, p, c, finite);
}

inline std::string format_boundary(const KGraph& g, const BoundaryPath& x) {
  std::string f;
  for (std::size_t i = 0; i < x.finite.size(); ++i)
    if (x.finite[i]) f += (f.empty() ? "" : ",") + std::to_string(i + 1);
  return "prefix=" + g.format(x.prefix) + ";cycle=" + g.format(x.cycle) + ";finite=[" + f + "]";
}

// ---- boundary condition

struct BoundaryVerdict {
  bool ok = true;
  bool exact = false;  // true when the local-convexity criterion applied
  int depth = 0;
  Vec n;               // witness position
  std::vector<Path> E; // exhaustive set at x(n,n) that x misses
};

// Exhaustive sets at v obtained from {v} by repeatedly replacing one member
// lambda with lambda s(lambda)Lambda^{e_i}. Breadth first, at most cap sets.
inline std::vector<std::vector<Path>> partition_sets(const KGraph& g, int v, int depth,
                                                     std::size_t cap = 64) {
  std::vector<std::vector<Path>> out;
  std::set<std::vector<Path>> seen;
  std::vector<std::vector<Path>> todo{{g.vertex(v)}};
  seen.insert(todo[0]);
  for (std::size_t head = 0; head < todo.size() && out.size() < cap; ++head) {
    std::vector<Path> E = todo[head];
    out.push_back(E);
    for (std::size_t j = 0; j < E.size(); ++j) {
      if (total(E[j].d) >= depth) continue;
      for (int i = 0; i < g.rank(); ++i) {
        const auto& es = g.edges_at(E[j].s, i);
        if (es.empty()) continue;
        std::vector<Path> F;
        for (std::size_t t = 0; t < E.size(); ++t)
          if (t != j) F.push_back(E[t]);
        for (int e : es) F.push_back(g.compose(E[j], g.edge_path(e)));
        std::sort(F.begin(), F.end());
        if (seen.insert(F).second) todo.push_back(F);
      }
    }
  }
  return out;
}

// Every vertex of x sits at some position in the box below
// d(prefix) + d(cycle) (finite coordinates pinned to the degree).
inline std::vector<Vec> position_box(const BoundaryPath& x, int extra_cycles) {
  Vec top = x.prefix.d + scale(x.cycle.d, extra_cycles);
  return box(top);
}

inline BoundaryVerdict verify_boundary(const KGraph& g, const BoundaryPath& x, int depth) {
  BoundaryVerdict v;
  v.depth = depth;
  const int k = g.rank();
  Vec d = degree(x);
  // exact criterion for locally convex graphs: a finite coordinate i stops
  // only where no edge of color i can follow
  if (g.flags().locally_convex) {
    v.exact = true;
    for (int i = 0; i < k; ++i)
      for (const Vec& n : position_box(x, 1)) {
        if (!x.finite[static_cast<std::size_t>(i)] || n[static_cast<std::size_t>(i)] != d[static_cast<std::size_t>(i)]) continue;
        int w = g.vertex_at(unroll(g, x, n), n);
        const auto& es = g.edges_at(w, i);
        if (!es.empty()) {
          v.ok = false;
          v.n = n;
          for (int e : es) v.E.push_back(g.edge_path(e));
          return v;
        }
      }
  }
  for (const Vec& n : position_box(x, depth)) {
    Path u = unroll(g, x, n);
    int w = g.vertex_at(u, n);
    for (const auto& E : partition_sets(g, w, depth)) {
      bool hit = false;
      for (const Path& m : E) {
        if (!leq(n + m.d, d)) continue;
        if (bp_segment(g, x, n, n + m.d) == m) {
          hit = true;
          break;
        }
      }
      if (!hit) {
        v.ok = false;
        v.n = n;
        v.E = E;
        return v;
      }
    }
  }
  return v;
}

inline void require_boundary(const KGraph& g, const BoundaryPath& x, int depth) {
  BoundaryVerdict v = verify_boundary(g, x, depth);
  if (v.ok) return;
  std::string e;
  for (const Path& p : v.E) e += (e.empty() ? "" : ",") + g.format(p);
  fail("NotABoundaryPath", format_boundary(g, x) + " misses {" + e + "} at " + to_string(v.n));
}

// ---- cylinders

// x in Z(lambda \ G)
inline bool in_cylinder(const KGraph& g, const BoundaryPath& x, const Path& l, const std::vector<Path>& G) {
  if (!G.empty() && g.is_exhaustive(l.s, G))
    fail("ExhaustiveG", "G is exhaustive at " + g.vertex_name(l.s));
  for (const Path& n : G)
    if (n.r != l.s) fail("RangeMismatch", g.format(n) + " does not start at s(" + g.format(l) + ")");
  Vec d = degree(x);
  if (!leq(l.d, d) || bp_segment(g, x, zero_vec(g.rank()), l.d) != l) return false;
  for (const Path& n : G) {
    Path ln = g.compose(l, n);
    if (leq(ln.d, d) && bp_segment(g, x, zero_vec(g.rank()), ln.d) == ln) return false;
  }
  return true;
}

// ---- periodicity

struct PeriodGroup {
  std::vector<Vec> basis;  // HNF
  int verified_depth = -1; // -1: exact

  bool contains(const Vec& v) const { return in_lattice(basis, v); }
  friend bool operator==(const PeriodGroup& a, const PeriodGroup& b) { return a.basis == b.basis; }
};

inline PeriodGroup make_group(std::vector<Vec> rows, int k) { return PeriodGroup{hnf(std::move(rows), k), -1}; }

// Per(x) = Per of its periodic tail; the Z^I-action on the finitely many
// shifts of the tail is a group action, and Per is the stabiliser of the tail.
// Schreier generators give a generating set.
inline PeriodGroup per_group(const KGraph& g, const BoundaryPath& x) {
  const int k = g.rank();
  if (x.cycle.is_vertex()) return PeriodGroup{};
  const Path& c = x.cycle;
  std::map<Path, Vec> label{{c, zero_vec(k)}};
  std::vector<Path> order{c};
  std::vector<Vec> gens{c.d};
  for (std::size_t h = 0; h < order.size(); ++h) {
    Path s = order[h];
    Vec gs = label[s];
    for (int i = 0; i < k; ++i) {
      if (x.finite[static_cast<std::size_t>(i)]) continue;
      Path t = rotate(g, s, unit_vec(k, i));
      Vec step = gs + unit_vec(k, i);
      auto it = label.find(t);
      if (it == label.end()) {
        label[t] = step;
        order.push_back(t);
      } else {
        gens.push_back(step - it->second);
      }
    }
  }
  return make_group(gens, k);
}

// sigma^m = sigma^n on Z(x(0,N)), checked on all extensions through
// s(x(0,N))Lambda^{<= depth}.
inline bool shifts_agree_near(const KGraph& g, const BoundaryPath& x, const Vec& m, const Vec& n,
                              const Vec& N, int depth) {
  const int k = g.rank();
  Path l = bp_segment(g, x, zero_vec(k), N);
  Path A = g.segment(l, m, l.d), B = g.segment(l, n, l.d);
  if (A.r != B.r) return false;
  for (const Path& al : g.paths_upto(l.s, Vec(static_cast<std::size_t>(k), depth))) {
    Path Aa = g.compose(A, al), Ba = g.compose(B, al);
    Vec K = meet(Aa.d, Ba.d);
    if (g.segment(Aa, zero_vec(k), K) != g.segment(Ba, zero_vec(k), K)) return false;
  }
  return true;
}

// IP(x): lags m - n with sigma^m = sigma^n on a neighbourhood of x. Candidate
// lags come from Per(x) within (depth+1) cycle degrees; admitted pairs
// (m, n) sit below prefix + cycle. The answer is qualified by depth.
inline PeriodGroup ip_group(const KGraph& g, const BoundaryPath& x, int depth) {
  const int k = g.rank();
  PeriodGroup per = per_group(g, x);
  PeriodGroup out;
  out.verified_depth = depth;
  if (per.basis.empty()) return out;
  Vec P = x.cycle.d;
  Vec lo = -scale(P, depth + 1), hi = scale(P, depth + 1);
  std::vector<Vec> lags;
  for (const Vec& b : box(hi - lo)) {
    Vec v = b + lo;
    if (!is_zero(v) && per.contains(v)) lags.push_back(v);
  }
  std::sort(lags.begin(), lags.end(), graded_less);
  std::vector<Vec> found;
  Vec dx = degree(x);
  Vec jtop = x.prefix.d + P;
  for (const Vec& v : lags) {
    if (!found.empty() && in_lattice(hnf(found, k), v)) continue;
    if (!found.empty() && hnf(found, k) == per.basis) break;  // IP is inside Per
    bool admitted = false;
    for (const Vec& j : box(jtop)) {
      if (admitted) break;
      Vec m = pos_part(v) + j, n = neg_part(v) + j;
      if (!leq(m, dx) || !leq(n, dx)) continue;
      for (int t = 0; t <= depth && !admitted; ++t) {
        // finite coordinates are pinned to d(x) so the cylinder cannot grow there
        Vec N = join(m, n) + scale(infinite_mask(x), t);
        for (int i = 0; i < k; ++i)
          if (x.finite[static_cast<std::size_t>(i)]) N[static_cast<std::size_t>(i)] = dx[static_cast<std::size_t>(i)];
        if (shifts_agree_near(g, x, m, n, N, depth)) admitted = true;
      }
    }
    if (admitted) found.push_back(v);
  }
  out.basis = hnf(found, k);
  return out;
}

// ---- catalogs of sample points

// All canonical boundary paths with prefix degree <= pre and cycle degree
// <= cyc, across all finite/infinite coordinate splits. Deterministic order.
inline std::vector<BoundaryPath> boundary_catalog(const KGraph& g, const Vec& pre, const Vec& cyc) {
  const int k = g.rank();
  std::set<BoundaryPath> out;
  if (!g.flags().locally_convex) return {};
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (const Path& p : g.paths_below(static_cast<int>(v), pre))
      for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<bool> finite(static_cast<std::size_t>(k));
        Vec top = zero_vec(k);
        for (int i = 0; i < k; ++i) {
          finite[static_cast<std::size_t>(i)] = (mask >> i & 1) != 0;
          if (!finite[static_cast<std::size_t>(i)]) top[static_cast<std::size_t>(i)] = cyc[static_cast<std::size_t>(i)];
        }
        for (const Vec& P : box(top)) {
          bool okP = true;
          for (int i = 0; i < k; ++i)
            if (!finite[static_cast<std::size_t>(i)] && P[static_cast<std::size_t>(i)] == 0) okP = false;
          if (!okP) continue;
          for (const Path& c : g.paths(p.s, P)) {
            if (c.s != c.r) continue;
            BoundaryPath raw{p, c, finite};
            if (!verify_boundary(g, raw, 0).ok) continue;
            out.insert(canonicalize(g, raw));
          }
        }
      }
  return {out.begin(), out.end()};
}

// Deterministic pseudo-random selection of n items (with repetition when the
// pool is small).
template <class T>
std::vector<T> sample_from(const std::vector<T>& pool, std::size_t n, std::uint64_t seed) {
  std::vector<T> out;
  if (pool.empty()) return out;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  while (out.size() < n) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t i : idx) {
      if (out.size() == n) break;
      out.push_back(pool[i]);
    }
  }
  return out;
}

}  // namespace kgraph
