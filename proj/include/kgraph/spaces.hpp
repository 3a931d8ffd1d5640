#pragma once

#include <functional>
#include <map>
#include <memory>

#include "kgraph/groupoid.hpp"

namespace kgraph {

// A boundary space with a shift action. Every space below exposes
//   Point, rank(), degree, shift, try_arrow, lag, per, ip, format,
//   points(n, seed), arrows(n, seed)
// and the tabulating ones add Cyl, partition, in_cyl, cyl_points.

// Lex-least l >= m+ with sigma^l x = sigma^(l-m) y, for any space whose
// shift orbits are eventually periodic. Same search as l_cocycle.
template <class S>
Vec lex_lag(const S& sp, const Arrow<typename S::Point>& a) {
  const int k = sp.rank();
  Vec dx = sp.degree(a.x);
  Vec lo = pos_part(a.m);
  auto feasible = [&](const Vec& fixed, int upto) {
    Vec l = fixed;
    Vec step = zero_vec(k);
    for (int i = upto + 1; i < k; ++i) {
      auto s = static_cast<std::size_t>(i);
      if (dx[s] < kInf) {
        l[s] = dx[s];
      } else {
        l[s] = lo[s];
        step[s] = 1;
      }
    }
    if (!leq(l, dx) || !leq(l - a.m, sp.degree(a.y))) return false;
    std::set<std::pair<typename S::Point, typename S::Point>> seen;
    auto u = sp.shift(a.x, l), w = sp.shift(a.y, l - a.m);
    for (int guard = 0; guard < (1 << 20); ++guard) {
      if (u == w) return true;
      if (is_zero(step) || !seen.insert({u, w}).second) return false;
      u = sp.shift(u, step);
      w = sp.shift(w, step);
    }
    fail("NotAnArrow", "orbit did not close");
  };
  Vec l = lo;
  for (int i = 0; i < k; ++i) {
    auto s = static_cast<std::size_t>(i);
    std::int64_t hi = dx[s] < kInf ? dx[s] : lo[s] + (std::int64_t{1} << 20);
    for (std::int64_t t = lo[s];; ++t) {
      if (t > hi) fail("NotAnArrow", "no admissible l found");
      l[s] = t;
      if (feasible(l, i)) break;
    }
  }
  return l;
}

// eta(x(0, n)) for a point x and n <= d(x)
template <class P>
using PathFunctor = std::function<Vec(const P& x, const Vec& n)>;

template <class P1, class P2>
struct BoundaryMap {
  std::string name;
  std::function<P2(const P1&)> fwd;
  std::function<P1(const P2&)> inv;
};

template <class P1, class P2>
struct ArrowMap {
  std::string name;
  std::function<Arrow<P2>(const Arrow<P1>&)> fwd;
  std::function<Arrow<P1>(const Arrow<P2>&)> inv;
};

template <class P>
BoundaryMap<P, P> identity_map() {
  return {"identity", [](const P& x) { return x; }, [](const P& x) { return x; }};
}

template <class P>
ArrowMap<P, P> identity_arrow_map() {
  return {"identity", [](const Arrow<P>& a) { return a; }, [](const Arrow<P>& a) { return a; }};
}

// ---- a finite k-graph

struct GraphSpace {
  using Point = BoundaryPath;

  // x(0, d(x) ^ N) = l. For fixed N these partition the boundary.
  struct Cyl {
    Path l;
    Vec N;
    friend bool operator==(const Cyl&, const Cyl&) = default;
  };

  explicit GraphSpace(const KGraph& graph) : g(&graph) {}

  const KGraph* g;

  int rank() const { return g->rank(); }
  Vec degree(const Point& x) const { return kgraph::degree(x); }
  Point shift(const Point& x, const Vec& m) const { return kgraph::shift(*g, x, m); }
  std::optional<Arrow<Point>> try_arrow(const Point& x, const Vec& m, const Point& y) const {
    return kgraph::try_arrow(*g, x, m, y);
  }
  Vec lag(const Arrow<Point>& a) const { return l_cocycle(*g, a); }
  PeriodGroup per(const Point& x) const {
    auto& memo = cache().per;
    if (auto it = memo.find(x); it != memo.end()) return it->second;
    return memo.emplace(x, per_group(*g, x)).first->second;
  }
  PeriodGroup ip(const Point& x, int depth) const {
    auto& memo = cache().ip;
    if (auto it = memo.find({x, depth}); it != memo.end()) return it->second;
    return memo.emplace(std::make_pair(x, depth), ip_group(*g, x, depth)).first->second;
  }
  std::string format(const Point& x) const { return format_boundary(*g, x); }

  const std::vector<Point>& catalog() const {
    if (!catalog_) {
      Vec one = ones_vec(rank());
      catalog_ = std::make_shared<std::vector<Point>>(boundary_catalog(*g, one + one, one));
    }
    return *catalog_;
  }
  std::vector<Point> points(std::size_t n, std::uint64_t seed) const { return sample_from(catalog(), n, seed); }
  std::vector<Arrow<Point>> arrows(std::size_t n, std::uint64_t seed) const { return arrow_samples(*g, n, seed); }

  // the cylinders covering {x : d(x) >= m}, cut at m + t
  std::vector<Cyl> partition(const Vec& m, int t) const {
    Vec N = m + Vec(static_cast<std::size_t>(rank()), t);
    std::vector<Cyl> out;
    for (std::size_t v = 0; v < g->num_vertices(); ++v)
      for (const Path& p : g->paths_upto(static_cast<int>(v), N))
        if (leq(m, p.d)) out.push_back(Cyl{p, N});
    return out;
  }
  bool in_cyl(const Point& x, const Cyl& c) const {
    if (x.r() != c.l.r) return false;
    Vec top = meet(degree(x), c.N);
    return top == c.l.d && bp_segment(*g, x, zero_vec(rank()), top) == c.l;
  }
  std::vector<Point> cyl_points(const Cyl& c) const {
    std::set<Point> out;
    for (const Point& z : catalog())
      if (z.r() == c.l.s) {
        Point x = extend(*g, c.l, z);
        if (in_cyl(x, c)) out.insert(x);
      }
    return {out.begin(), out.end()};
  }
  std::string format_cyl(const Cyl& c) const { return g->format(c.l) + "@" + to_string(c.N); }

 private:
  struct Memo {
    std::map<Point, PeriodGroup> per;
    std::map<std::pair<Point, int>, PeriodGroup> ip;
  };
  Memo& cache() const {
    if (!memo_) memo_ = std::make_shared<Memo>();
    return *memo_;
  }
  mutable std::shared_ptr<std::vector<Point>> catalog_;
  mutable std::shared_ptr<Memo> memo_;
};

inline PathFunctor<BoundaryPath> graph_functor(const KGraph& g, Functor eta) {
  return [&g, eta](const BoundaryPath& x, const Vec& n) { return eta.eval(bp_segment(g, x, zero_vec(g.rank()), n)); };
}

// ---- Omega_{k, infinity}
//
// The boundary path at vertex n is unique; it is identified with n, and
// sigma^m x_n = x_(n+m).

struct OmegaSpace {
  using Point = Vec;

  explicit OmegaSpace(int k) : k_(k) {}

  int rank() const { return k_; }
  Vec degree(const Point&) const { return Vec(static_cast<std::size_t>(k_), kInf); }
  Point shift(const Point& x, const Vec& m) const { return x + m; }
  std::optional<Arrow<Point>> try_arrow(const Point& x, const Vec& m, const Point& y) const {
    if (y - x != m) return std::nullopt;
    return Arrow<Point>{x, m, y, pos_part(m), neg_part(m)};
  }
  Vec lag(const Arrow<Point>& a) const { return pos_part(a.m); }
  PeriodGroup per(const Point&) const { return PeriodGroup{}; }
  PeriodGroup ip(const Point&, int) const { return PeriodGroup{}; }
  std::string format(const Point& x) const { return "x" + to_string(x); }

  // n vertices drawn from the first 4n + 4 in graded order
  std::vector<Point> points(std::size_t n, std::uint64_t seed) const {
    std::vector<Point> pool;
    for (std::uint64_t r = 0; r < 4 * n + 4; ++r) pool.push_back(r_to_rk(r, k_));
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return pool;
  }
  std::vector<Arrow<Point>> arrows(std::size_t n, std::uint64_t seed) const {
    auto xs = points(n, seed), ys = points(n, seed + 1);
    std::vector<Arrow<Point>> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(*try_arrow(xs[i], ys[i] - xs[i], ys[i]));
    return out;
  }

 private:
  int k_;
};

// eta(x_n(0, m)) = F(n + m) - F(n) for a potential F; F = id gives eta = d
inline PathFunctor<Vec> omega_potential(std::function<Vec(const Vec&)> F) {
  return [F](const Vec& x, const Vec& m) { return F(x + m) - F(x); };
}

}  // namespace kgraph
