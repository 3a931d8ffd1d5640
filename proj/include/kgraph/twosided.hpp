#pragma once

#include "kgraph/stab.hpp"

namespace kgraph {

// ---- bi-infinite paths
//
// x restricted to [anchor - t d(core), infinity) is core^t tail for every
// t >= 0. core is a cycle of strictly positive degree and tail a one-sided
// path of infinite degree at its vertex, so x is eventually periodic in both
// directions; a tail other than core^infinity is a finite modification.

struct BiInfinitePath {
  Path core;
  Vec anchor;
  BoundaryPath tail;
};

// Row-finite with finitely many vertices is built in; no sinks or sources
// means every vertex receives and emits an edge of every color.
inline void require_two_sided(const KGraph& g) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (int c = 0; c < g.rank(); ++c) {
      bool in = g.can_extend(static_cast<int>(v), c), out = false;
      for (const Edge& e : g.edges())
        if (e.color == c && e.tgt == static_cast<int>(v)) in = true;
      for (const Edge& e : g.edges())
        if (e.color == c && e.src == static_cast<int>(v)) out = true;
      if (!in || !out)
        fail("HypothesesViolated", g.vertex_name(static_cast<int>(v)) + " is a sink or source in color " +
                                       std::to_string(c + 1));
    }
}

inline BiInfinitePath make_bi_infinite(const KGraph& g, const Path& core, const Vec& anchor, const BoundaryPath& tail) {
  require_two_sided(g);
  if (core.r != core.s) fail("HypothesesViolated", "core " + g.format(core) + " is not a cycle");
  for (std::int64_t d : core.d)
    if (d <= 0) fail("HypothesesViolated", "core " + g.format(core) + " must have positive degree in every color");
  for (bool f : tail.finite)
    if (f) fail("HypothesesViolated", "tail must be infinite in every color");
  if (tail.r() != core.s) fail("EndpointMismatch", "tail does not start at the core vertex");
  return {core, anchor, tail};
}

inline BiInfinitePath periodic_bi_infinite(const KGraph& g, const Path& core, const Vec& anchor = {}) {
  Vec a = anchor.empty() ? zero_vec(g.rank()) : anchor;
  return make_bi_infinite(g, core, a, periodic(g, core, std::vector<bool>(static_cast<std::size_t>(g.rank()), false)));
}

namespace detail {

// least t >= 0 with anchor - t Q <= p
inline std::int64_t cover(const Vec& anchor, const Vec& Q, const Vec& p) {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    std::int64_t gap = anchor[i] - p[i];
    if (gap > 0) t = std::max(t, (gap + Q[i] - 1) / Q[i]);
  }
  return t;
}

inline Path power(const KGraph& g, const Path& c, std::int64_t t) {
  Path out = g.vertex(c.r);
  for (std::int64_t i = 0; i < t; ++i) out = g.compose(out, c);
  return out;
}

}  // namespace detail

// x restricted to [p, infinity), read as a one-sided path
inline BoundaryPath view(const KGraph& g, const BiInfinitePath& x, const Vec& p) {
  std::int64_t t = detail::cover(x.anchor, x.core.d, p);
  Vec base = x.anchor - scale(x.core.d, t);
  BoundaryPath w = t == 0 ? x.tail : extend(g, detail::power(g, x.core, t), x.tail);
  return shift(g, w, p - base);
}

// the backward periodic continuation seen from p <= anchor
inline BoundaryPath backward_phase(const KGraph& g, const BiInfinitePath& x, const Vec& p) {
  std::int64_t t = detail::cover(x.anchor, x.core.d, p);
  Vec base = x.anchor - scale(x.core.d, t);
  auto z = periodic(g, x.core, std::vector<bool>(static_cast<std::size_t>(g.rank()), false));
  return shift(g, z, p - base);
}

// x(p, q)
inline Path bi_segment(const KGraph& g, const BiInfinitePath& x, const Vec& p, const Vec& q) {
  return bp_segment(g, view(g, x, p), zero_vec(g.rank()), q - p);
}

// Equal iff the views and the backward phases agree at one point below both
// anchors: below it both are periodic, and shifts are invertible on the
// finite orbit of the phase.
inline bool bi_equal(const KGraph& g, const BiInfinitePath& x, const BiInfinitePath& y) {
  Vec p = meet(x.anchor, y.anchor);
  return view(g, x, p) == view(g, y, p) && backward_phase(g, x, p) == backward_phase(g, y, p);
}

// sigma-bar^m(x)(p, q) = x(p + m, q + m), for m in Z^k
inline BiInfinitePath two_shift(const BiInfinitePath& x, const Vec& m) { return {x.core, x.anchor - m, x.tail}; }

inline std::string format_bi(const KGraph& g, const BiInfinitePath& x) {
  return "core=" + g.format(x.core) + ";anchor=" + to_string(x.anchor) + ";tail=[" + format_boundary(g, x.tail) + "]";
}

// Sample points: pure cycles and single-edge modifications at small anchors.
inline std::vector<BiInfinitePath> bi_samples(const KGraph& g, std::size_t n, std::uint64_t seed) {
  require_two_sided(g);
  const int k = g.rank();
  Vec one = ones_vec(k);
  std::vector<BiInfinitePath> pool;
  auto tails = boundary_catalog(g, one, one);
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (const Path& c : g.paths(static_cast<int>(v), one)) {
      if (c.s != c.r) continue;
      for (const Vec& a : box(one)) {
        Vec anchor = a - one;
        for (const BoundaryPath& z : tails) {
          bool infinite = std::none_of(z.finite.begin(), z.finite.end(), [](bool f) { return f; });
          if (infinite && z.r() == c.s) pool.push_back(make_bi_infinite(g, c, anchor, z));
        }
      }
    }
  return sample_from(pool, n, seed);
}

// ---- sliding block codes
//
// h(x)(p, p + 1) = table(x(p, p + L)), with 1 = (1, ..., 1).

struct BlockCode {
  const KGraph* from;
  const KGraph* to;
  Vec L;
  std::map<Path, Path> table;
};

namespace detail {

inline std::vector<Path> all_paths(const KGraph& g, const Vec& d) {
  std::vector<Path> out;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (const Path& p : g.paths(static_cast<int>(v), d)) out.push_back(p);
  return out;
}

}  // namespace detail

// Total on Lambda1^L, values in Lambda2^1, and overlapping windows agree.
inline void validate_block_code(const BlockCode& h) {
  const KGraph &g1 = *h.from, &g2 = *h.to;
  const int k = g1.rank();
  if (g2.rank() != k) fail("RankMismatch", "block code between ranks " + std::to_string(k) + " and " + std::to_string(g2.rank()));
  Vec one = ones_vec(k);
  for (const Path& l : detail::all_paths(g1, h.L)) {
    auto it = h.table.find(l);
    if (it == h.table.end()) fail("WindowInconsistency", "no entry for window " + g1.format(l));
    if (it->second.d != one) fail("WindowInconsistency", "entry for " + g1.format(l) + " is not a unit cube");
  }
  for (int i = 0; i < k; ++i) {
    Vec e = unit_vec(k, i);
    for (const Path& w : detail::all_paths(g1, h.L + e)) {
      const Path& a = h.table.at(g1.segment(w, zero_vec(k), h.L));
      const Path& b = h.table.at(g1.segment(w, e, h.L + e));
      if (g2.segment(a, e, one) != g2.segment(b, zero_vec(k), one - e))
        fail("WindowInconsistency", "windows " + g1.format(g1.segment(w, zero_vec(k), h.L)) + " and " +
                                        g1.format(g1.segment(w, e, h.L + e)) + " overlap differently in color " +
                                        std::to_string(i + 1));
    }
  }
}

// The one-sided map pi: the same local rule on paths of infinite degree. The
// cells along the diagonal repeat once sigma^(j,..,j) z does.
inline BoundaryPath apply_one_sided(const BlockCode& h, const BoundaryPath& z) {
  const KGraph &g1 = *h.from, &g2 = *h.to;
  const int k = g1.rank();
  Vec one = ones_vec(k);
  std::map<BoundaryPath, std::size_t> seen;
  std::vector<Path> cells;
  BoundaryPath w = z;
  std::size_t start = 0;
  for (;;) {
    if (auto it = seen.find(w); it != seen.end()) {
      start = it->second;
      break;
    }
    seen.emplace(w, cells.size());
    cells.push_back(h.table.at(bp_segment(g1, w, zero_vec(k), h.L)));
    w = shift(g1, w, one);
  }
  auto glue = [&](std::size_t a, std::size_t b) {
    Path p = g2.vertex(cells[a].r);
    for (std::size_t j = a; j < b; ++j) p = g2.compose(p, cells[j]);
    return p;
  };
  Path prefix = glue(0, start), cycle = glue(start, cells.size());
  return make_boundary(g2, prefix, cycle, std::vector<bool>(static_cast<std::size_t>(k), false));
}

inline BiInfinitePath apply(const BlockCode& h, const BiInfinitePath& x) {
  const KGraph& g1 = *h.from;
  const KGraph& g2 = *h.to;
  const Vec& Q = x.core.d;
  // below anchor - nQ every window lies in the periodic part
  std::int64_t n = 0;
  for (std::size_t i = 0; i < Q.size(); ++i) n = std::max(n, (h.L[i] + Q[i] - 1) / Q[i]);
  Vec a = x.anchor - scale(Q, n);
  BoundaryPath tail = apply_one_sided(h, view(g1, x, a));
  Path core = bp_segment(g2, apply_one_sided(h, view(g1, x, a - Q)), zero_vec(g1.rank()), Q);
  return {core, a, tail};
}

inline BlockCode identity_block_code(const KGraph& g) {
  BlockCode h{&g, &g, ones_vec(g.rank()), {}};
  for (const Path& p : detail::all_paths(g, h.L)) h.table[p] = p;
  return h;
}

// The code of an isomorphism given by vertex and edge bijections.
inline BlockCode relabel_block_code(const KGraph& g1, const KGraph& g2, const std::vector<int>& emap) {
  BlockCode h{&g1, &g2, ones_vec(g1.rank()), {}};
  for (const Path& p : detail::all_paths(g1, h.L)) {
    std::vector<int> w;
    for (int e : p.e) w.push_back(emap[static_cast<std::size_t>(e)]);
    h.table[p] = g2.from_word(g2.normalize_word(w));
  }
  validate_block_code(h);
  return h;
}

// The code whose one-sided map is sigma^m: the cell at p is x(p + m, p + m + 1).
inline BlockCode shift_block_code(const KGraph& g, const Vec& m) {
  const int k = g.rank();
  BlockCode h{&g, &g, m + ones_vec(k), {}};
  for (const Path& p : detail::all_paths(g, h.L)) h.table[p] = g.segment(p, m, h.L);
  return h;
}

// Search for a window L <= L_max on which a one-sided map is given by a
// local rule, reading the rule off the catalog. nullopt means Unknown.
inline std::optional<BlockCode> derive_block_code(const KGraph& g1, const KGraph& g2,
                                                  const std::function<BoundaryPath(const BoundaryPath&)>& pi,
                                                  std::int64_t L_max) {
  const int k = g1.rank();
  Vec one = ones_vec(k);
  auto cat = boundary_catalog(g1, one + one, one);
  std::vector<BoundaryPath> pts;
  for (const auto& z : cat)
    if (std::none_of(z.finite.begin(), z.finite.end(), [](bool f) { return f; })) pts.push_back(z);
  for (std::int64_t s = 1; s <= L_max; ++s) {
    BlockCode h{&g1, &g2, Vec(static_cast<std::size_t>(k), s), {}};
    bool local = true;
    for (const auto& z : pts) {
      for (const Vec& p : box(one)) {
        auto w = shift(g1, z, p);
        Path key = bp_segment(g1, w, zero_vec(k), h.L);
        Path val = bp_segment(g2, pi(w), zero_vec(k), one);
        auto [it, fresh] = h.table.emplace(key, val);
        if (!fresh && it->second != val) local = false;
      }
      if (!local) break;
    }
    if (!local) continue;
    if (h.table.size() != detail::all_paths(g1, h.L).size()) continue;
    try {
      validate_block_code(h);
    } catch (const Error&) {
      continue;
    }
    bool agrees = true;
    for (const auto& z : pts) agrees = agrees && apply_one_sided(h, z) == pi(z);
    if (agrees) return h;
  }
  return std::nullopt;
}

// h' o h = sigma-bar^a: the least a <= L + L' matching on the catalog.
inline std::optional<Vec> code_delay(const BlockCode& h, const BlockCode& hinv) {
  const KGraph& g1 = *h.from;
  Vec one = ones_vec(g1.rank());
  auto cat = boundary_catalog(g1, one, one);
  for (const Vec& a : box(h.L + hinv.L)) {
    bool ok = true;
    for (const auto& z : cat) {
      if (std::any_of(z.finite.begin(), z.finite.end(), [](bool f) { return f; })) continue;
      if (apply_one_sided(hinv, apply_one_sided(h, z)) != shift(g1, z, a)) {
        ok = false;
        break;
      }
    }
    if (ok) return a;
  }
  return std::nullopt;
}

// sigma-bar^m(h(x)) = h(sigma-bar^m(x)) on the samples, and h' undoes h up to
// the delay in both directions.
inline Report check_two_sided_conjugacy(const BlockCode& h, const BlockCode& hinv,
                                        const std::vector<BiInfinitePath>& samples, const std::vector<Vec>& degrees) {
  validate_block_code(h);
  validate_block_code(hinv);
  const KGraph &g1 = *h.from, &g2 = *h.to;
  Report rep;
  rep.envelope = {{"samples", std::to_string(samples.size())}, {"degrees", std::to_string(degrees.size())},
                  {"window", to_string(h.L)}};
  Check inter("intertwining"), inv("inverse"), back("inverse_other_side");
  auto delay = code_delay(h, hinv);
  auto delay2 = code_delay(hinv, h);
  for (const auto& x : samples) {
    auto hx = apply(h, x);
    for (const Vec& m : degrees) {
      bool ok = bi_equal(g2, two_shift(hx, m), apply(h, two_shift(x, m)));
      inter.record(ok, [&] { return "x=" + format_bi(g1, x) + " m=" + to_string(m); });
    }
    inv.record(delay && bi_equal(g1, apply(hinv, hx), two_shift(x, *delay)),
               [&] { return "h' h x is not a shift of x at " + format_bi(g1, x); });
    back.record(delay2 && bi_equal(g2, apply(h, apply(hinv, hx)), two_shift(hx, *delay2)),
                [&] { return "h h' y is not a shift of y at " + format_bi(g2, hx); });
  }
  rep.checks = {inter, inv, back};
  return rep;
}

// ---- from a conjugacy to an isomorphism of stabilized groupoids
//
// With h' o h = sigma-bar^a, pi(x) = pi(x') iff sigma^a x = sigma^a x', so
// windows lambda ~ lambda' iff lambda(a, L) = lambda'(a, L). Each class C
// carries a partition {A_lambda} of N^k with bijections f_lambda: A_lambda ->
// N^k, and psi(mu_n x) = mu_{f^-1_{x(0,L)}(n)} pi(x).

struct PartitionRow {
  Path window;
  std::function<bool(const Vec&)> in_A;      // membership in A_window
  std::function<Vec(const Vec&)> f, f_inv;   // A_window -> N^k and back
};

struct PartitionData {
  std::vector<PartitionRow> rows;
};

inline std::vector<std::vector<Path>> window_classes(const BlockCode& h, const Vec& delay) {
  const KGraph& g1 = *h.from;
  if (!leq(delay, h.L)) fail("EquivalenceClassMismatch", "delay " + to_string(delay) + " exceeds the window");
  std::map<Path, std::vector<Path>> by_tail;
  for (const Path& l : detail::all_paths(g1, h.L)) by_tail[g1.segment(l, delay, h.L)].push_back(l);
  std::vector<std::vector<Path>> out;
  for (auto& [t, c] : by_tail) out.push_back(c);
  return out;
}

// The graded-lex default: the j-th member of a class of size c gets the
// indices r = j mod c of the graded enumeration, and f(n) = r div c.
inline PartitionData default_partition(const std::vector<std::vector<Path>>& classes, int k) {
  PartitionData out;
  for (const auto& c : classes) {
    auto size = static_cast<std::uint64_t>(c.size());
    for (std::uint64_t j = 0; j < size; ++j)
      out.rows.push_back({c[j],
                          [size, j](const Vec& n) { return rk_to_r(n) % size == j; },
                          [size, k](const Vec& n) { return r_to_rk(rk_to_r(n) / size, k); },
                          [size, j, k](const Vec& n) { return r_to_rk(rk_to_r(n) * size + j, k); }});
  }
  return out;
}

struct StabConjugacy {
  BlockCode h, hinv;
  Vec delay;
  PartitionData part;
  ArrowMap<StabPoint, StabPoint> phi;
};

// The rows must match the classes one to one, and within a class the sets
// A_lambda must partition the probe box with f round-tripping.
inline StabConjugacy conjugacy_to_stab_iso(const StabSpace& s1, const StabSpace& s2, const BlockCode& h,
                                           const BlockCode& hinv, PartitionData part, int probe = 4) {
  validate_block_code(h);
  validate_block_code(hinv);
  auto delay = code_delay(h, hinv);
  if (!delay) fail("EquivalenceClassMismatch", "the inverse code does not undo h up to a shift");
  auto classes = window_classes(h, *delay);
  const int k = h.from->rank();
  std::map<Path, const PartitionRow*> row_of;
  for (const auto& r : part.rows)
    if (!row_of.emplace(r.window, &r).second)
      fail("EquivalenceClassMismatch", "two rows for window " + h.from->format(r.window));
  auto probe_box = box(Vec(static_cast<std::size_t>(k), probe));
  for (const auto& c : classes) {
    for (const Path& l : c)
      if (!row_of.count(l)) fail("EquivalenceClassMismatch", "no row for window " + h.from->format(l));
    for (const Vec& n : probe_box) {
      int owners = 0;
      for (const Path& l : c)
        if (row_of.at(l)->in_A(n)) ++owners;
      if (owners != 1)
        fail("EquivalenceClassMismatch", "the sets A of the class of " + h.from->format(c.front()) + " cover " +
                                             to_string(n) + " " + std::to_string(owners) + " times");
      for (const Path& l : c) {
        const auto* r = row_of.at(l);
        if (r->in_A(n) && r->f_inv(r->f(n)) != n)
          fail("EquivalenceClassMismatch", "f is not injective on A at " + to_string(n));
        Vec back = r->f_inv(n);
        if (!r->in_A(back) || r->f(back) != n)
          fail("EquivalenceClassMismatch", "f^-1 leaves A at " + to_string(n));
      }
    }
  }
  if (row_of.size() != detail::all_paths(*h.from, h.L).size())
    fail("EquivalenceClassMismatch", "rows for windows that do not occur");

  StabConjugacy out{h, hinv, *delay, std::move(part), {}};
  const KGraph& g1 = *h.from;
  auto rows = std::make_shared<std::map<Path, const PartitionRow*>>();
  for (const auto& r : out.part.rows) rows->emplace(r.window, &r);
  Vec a = *delay;
  BlockCode H = h, Hinv = hinv;
  auto psi = [rows, H, &g1, k](const StabPoint& p) {
    const auto* r = rows->at(bp_segment(g1, p.x, zero_vec(k), H.L));
    return StabPoint{r->f_inv(p.n), apply_one_sided(H, p.x)};
  };
  // the fibre of pi over y is { nu z0 : nu in Lambda^a }, z0 = pi'(y)
  auto psi_inv = [rows, H, Hinv, a, &g1, k](const StabPoint& q) {
    BoundaryPath z0 = apply_one_sided(Hinv, q.x);
    Path tail_window = bp_segment(g1, z0, zero_vec(k), H.L - a);
    for (const Path& nu : detail::all_paths(g1, a)) {
      if (nu.s != z0.r()) continue;
      Path w = g1.compose(nu, tail_window);
      const auto* r = rows->at(w);
      if (r->in_A(q.n)) return StabPoint{r->f(q.n), extend(g1, nu, z0)};
    }
    fail("EquivalenceClassMismatch", "no window of the fibre owns level " + to_string(q.n));
  };
  auto move = [](const StabSpace& to, auto f) {
    return [&to, f](const Arrow<StabPoint>& arr) {
      StabPoint x = f(arr.x), y = f(arr.y);
      // base lag is kept: M - n + n' + f^-1(n) - f^-1(n')
      Vec M = arr.m - arr.x.n + arr.y.n + x.n - y.n;
      auto b = to.try_arrow(x, M, y);
      if (!b) fail("NotAnArrow", "image under the stabilized conjugacy is not an arrow");
      return *b;
    };
  };
  out.phi = {"stab_conjugacy", move(s2, psi), move(s1, psi_inv)};
  return out;
}

}  // namespace kgraph
