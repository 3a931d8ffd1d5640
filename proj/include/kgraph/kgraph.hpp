#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgraph/degree.hpp"
#include "kgraph/error.hpp"

namespace kgraph {

// "2,1" or "(2,1)" or "[2,1]"
inline Vec parse_vec(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != '(' && c != ')' && c != '[' && c != ']' && c != ' ') s += c;
  Vec v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail("ParseError", "bad integer vector '" + text + "'");
    }
  }
  if (v.empty()) fail("ParseError", "bad integer vector '" + text + "'");
  return v;
}

// Raw presentation as read from a graph file. Colors are 1-based here.
struct GraphSpec {
  struct EdgeSpec {
    std::string id;
    int color = 1;
    std::string src, tgt;
  };
  struct SquareSpec {
    // "x then y" in source-to-range order, i.e. the composite y x
    std::array<std::string, 2> first, second;
  };
  int rank = 1;
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
  std::vector<SquareSpec> squares;
};

struct Edge {
  std::string id;
  int color = 0;  // 0-based
  int src = 0;
  int tgt = 0;  // the range
};

// A morphism in color-sorted normal form. Edges run range-to-source: for
// e = [a, b], s(a) = r(b) and the path is the composite ab.
struct Path {
  int r = -1;
  int s = -1;
  Vec d;
  std::vector<int> e;

  bool is_vertex() const { return e.empty(); }
  friend bool operator==(const Path& a, const Path& b) {
    return a.r == b.r && a.s == b.s && a.e == b.e;
  }
  friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
    if (auto c = a.r <=> b.r; c != 0) return c;
    if (auto c = a.s <=> b.s; c != 0) return c;
    return a.e <=> b.e;
  }
};

struct GraphFlags {
  bool row_finite = true;
  bool has_sources = false;
  bool has_sinks = false;
  bool finitely_aligned = true;
  bool locally_convex = true;
  bool finite_vertices = true;
};

class KGraph {
 public:
  KGraph() = default;

  int rank() const { return k_; }
  std::size_t num_vertices() const { return vnames_.size(); }
  const std::vector<std::string>& vertex_names() const { return vnames_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const GraphFlags& flags() const { return flags_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  int vertex_index(const std::string& v) const {
    auto it = vindex_.find(v);
    if (it == vindex_.end()) fail("ParseError", "unknown vertex '" + v + "'");
    return it->second;
  }
  int edge_index(const std::string& e) const {
    auto it = eindex_.find(e);
    if (it == eindex_.end()) fail("ParseError", "unknown edge '" + e + "'");
    return it->second;
  }
  bool has_vertex(const std::string& v) const { return vindex_.count(v) != 0; }
  bool has_edge(const std::string& e) const { return eindex_.count(e) != 0; }

  int color(int e) const { return edges_[static_cast<std::size_t>(e)].color; }
  // edges of the given color whose range is v
  const std::vector<int>& edges_at(int v, int c) const {
    return into_[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)];
  }
  bool can_extend(int v, int c) const { return !edges_at(v, c).empty(); }

  Path vertex(int v) const { return Path{v, v, zero_vec(k_), {}}; }

  Path edge_path(int e) const {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    return Path{ed.tgt, ed.src, unit_vec(k_, ed.color), {e}};
  }

  // The partner of the bicolored composite ab under the factorisation rules.
  std::pair<int, int> swap(int a, int b) const {
    auto it = swap_.find({a, b});
    if (it == swap_.end()) fail("MissingRule", "no square for " + edge_name(a) + "." + edge_name(b));
    return it->second;
  }

  const std::string& edge_name(int e) const { return edges_[static_cast<std::size_t>(e)].id; }
  const std::string& vertex_name(int v) const { return vnames_[static_cast<std::size_t>(v)]; }

  // Rewrite a composable word into the unique word with the given color
  // sequence, by adjacent square swaps.
  std::vector<int> reorder(std::vector<int> w, const std::vector<int>& target) const {
    for (std::size_t p = 0; p < target.size(); ++p) {
      std::size_t q = p;
      while (q < w.size() && color(w[q]) != target[p]) ++q;
      if (q == w.size()) fail("DegreeOutOfRange", "color sequence does not match word");
      for (std::size_t j = q; j > p; --j) {
        auto [c, d] = swap(w[j - 1], w[j]);
        w[j - 1] = c;
        w[j] = d;
      }
    }
    return w;
  }

  std::vector<int> sorted_colors(const Vec& d) const {
    std::vector<int> out;
    for (int c = 0; c < k_; ++c)
      for (std::int64_t t = 0; t < d[static_cast<std::size_t>(c)]; ++t) out.push_back(c);
    return out;
  }

  std::vector<int> normalize_word(const std::vector<int>& w) const {
    Vec d = zero_vec(k_);
    for (int e : w) ++d[static_cast<std::size_t>(color(e))];
    return reorder(w, sorted_colors(d));
  }

  // Build a path from a composable word given range-to-source.
  Path from_word(const std::vector<int>& w) const {
    if (w.empty()) fail("EndpointMismatch", "empty word has no vertex");
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (edges_[static_cast<std::size_t>(w[i])].src != edges_[static_cast<std::size_t>(w[i + 1])].tgt)
        fail("EndpointMismatch", edge_name(w[i]) + " cannot precede " + edge_name(w[i + 1]));
    }
    Path p;
    p.r = edges_[static_cast<std::size_t>(w.front())].tgt;
    p.s = edges_[static_cast<std::size_t>(w.back())].src;
    p.d = zero_vec(k_);
    for (int e : w) ++p.d[static_cast<std::size_t>(color(e))];
    p.e = normalize_word(w);
    return p;
  }

  Path compose(const Path& a, const Path& b) const {
    if (a.s != b.r)
      fail("EndpointMismatch", "s(" + format(a) + ") != r(" + format(b) + ")");
    if (a.is_vertex()) return b;
    if (b.is_vertex()) return a;
    std::vector<int> w = a.e;
    w.insert(w.end(), b.e.begin(), b.e.end());
    Path p{a.r, b.s, a.d + b.d, normalize_word(w)};
    return p;
  }

  // The vertex sitting at position n of a path.
  int vertex_at(const Path& a, const Vec& n) const {
    if (a.is_vertex()) return a.r;
    if (is_zero(n)) return a.r;
    return segment(a, zero_vec(k_), n).s;
  }

  // lambda(m, n)
  Path segment(const Path& a, const Vec& m, const Vec& n) const {
    if (!leq(zero_vec(k_), m) || !leq(m, n) || !leq(n, a.d))
      fail("DegreeOutOfRange", "segment " + to_string(m) + ".." + to_string(n) + " of degree " +
                                   to_string(a.d));
    if (a.is_vertex()) return a;
    std::vector<int> target = sorted_colors(m);
    std::vector<int> mid = sorted_colors(n - m);
    std::vector<int> tail = sorted_colors(a.d - n);
    std::size_t lo = target.size();
    target.insert(target.end(), mid.begin(), mid.end());
    target.insert(target.end(), tail.begin(), tail.end());
    std::vector<int> w = reorder(a.e, target);
    if (mid.empty()) {
      int v = lo == 0 ? a.r : edges_[static_cast<std::size_t>(w[lo - 1])].src;
      return vertex(v);
    }
    std::vector<int> piece(w.begin() + static_cast<std::ptrdiff_t>(lo),
                           w.begin() + static_cast<std::ptrdiff_t>(lo + mid.size()));
    Path p;
    p.r = edges_[static_cast<std::size_t>(piece.front())].tgt;
    p.s = edges_[static_cast<std::size_t>(piece.back())].src;
    p.d = n - m;
    p.e = std::move(piece);  // already color sorted
    return p;
  }

  // v Lambda^n
  std::vector<Path> paths(int v, const Vec& n) const {
    std::vector<Path> out;
    std::vector<int> cols = sorted_colors(n);
    std::vector<int> w;
    auto rec = [&](auto&& self, std::size_t i, int cur) -> void {
      if (i == cols.size()) {
        Path p{v, cur, n, w};
        out.push_back(p);
        return;
      }
      for (int e : edges_at(cur, cols[i])) {
        w.push_back(e);
        self(self, i + 1, edges_[static_cast<std::size_t>(e)].src);
        w.pop_back();
      }
    };
    rec(rec, 0, v);
    std::sort(out.begin(), out.end());
    return out;
  }

  // all paths at v of degree <= n
  std::vector<Path> paths_below(int v, const Vec& n) const {
    std::vector<Path> out;
    for (const Vec& m : box(n)) {
      auto ps = paths(v, m);
      out.insert(out.end(), ps.begin(), ps.end());
    }
    return out;
  }

  // v Lambda^{<= n}: degree <= n and no further edge of color i where the
  // degree falls short of n_i. In locally convex graphs these partition Z(v).
  std::vector<Path> paths_upto(int v, const Vec& n) const {
    std::vector<Path> out;
    for (const Path& p : paths_below(v, n)) {
      bool maximal = true;
      for (int i = 0; i < k_ && maximal; ++i)
        if (p.d[static_cast<std::size_t>(i)] < n[static_cast<std::size_t>(i)] && can_extend(p.s, i))
          maximal = false;
      if (maximal) out.push_back(p);
    }
    return out;
  }

  // Lambda^min(a, b): pairs (rho, tau) with a rho = b tau of degree d(a) v d(b).
  std::vector<std::pair<Path, Path>> lambda_min(const Path& a, const Path& b) const {
    if (a.r != b.r) fail("RangeMismatch", format(a) + " and " + format(b));
    Vec N = join(a.d, b.d);
    std::vector<std::pair<Path, Path>> out;
    for (const Path& rho : paths(a.s, N - a.d)) {
      Path t = compose(a, rho);
      if (segment(t, zero_vec(k_), b.d) == b) out.emplace_back(rho, segment(t, b.d, N));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Path> mce(const Path& a, const Path& b) const {
    std::vector<Path> out;
    for (auto& [rho, tau] : lambda_min(a, b)) out.push_back(compose(a, rho));
    std::sort(out.begin(), out.end());
    return out;
  }

  // E exhaustive at v: every element of v Lambda^{<= N} extends a member of E,
  // N the join of the degrees in E. Exact for locally convex row-finite graphs.
  bool is_exhaustive(int v, const std::vector<Path>& E) const {
    for (const Path& m : E)
      if (m.r != v) fail("RangeMismatch", format(m) + " does not start at " + vertex_name(v));
    if (E.empty()) return false;
    Vec N = zero_vec(k_);
    for (const Path& m : E) N = join(N, m.d);
    for (const Path& a : paths_upto(v, N)) {
      bool hit = false;
      for (const Path& m : E) {
        if (leq(m.d, a.d) && segment(a, zero_vec(k_), m.d) == m) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
    return true;
  }

  // "v" or "e1.e2.f"
  std::string format(const Path& p) const {
    if (p.is_vertex()) return vertex_name(p.r);
    std::string s;
    for (std::size_t i = 0; i < p.e.size(); ++i) {
      if (i) s += '.';
      s += edge_name(p.e[i]);
    }
    return s;
  }

  Path parse_path(const std::string& text) const {
    if (text.empty()) fail("ParseError", "empty path literal");
    if (has_vertex(text)) return vertex(vertex_index(text));
    std::vector<int> w;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t dot = text.find('.', start);
      if (dot == std::string::npos) dot = text.size();
      w.push_back(edge_index(text.substr(start, dot - start)));
      start = dot + 1;
    }
    return from_word(w);
  }

  friend KGraph validate(const GraphSpec& spec);

 private:
  int k_ = 1;
  std::string name_;
  std::vector<std::string> vnames_;
  std::unordered_map<std::string, int> vindex_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, int> eindex_;
  std::map<std::pair<int, int>, std::pair<int, int>> swap_;
  std::vector<std::vector<std::vector<int>>> into_;
  GraphFlags flags_;
};

inline KGraph validate(const GraphSpec& spec) {
  KGraph g;
  if (spec.rank < 1) fail("ParseError", "rank must be positive");
  g.k_ = spec.rank;
  for (const auto& v : spec.vertices) {
    if (g.vindex_.count(v)) fail("ParseError", "duplicate vertex '" + v + "'");
    g.vindex_[v] = static_cast<int>(g.vnames_.size());
    g.vnames_.push_back(v);
  }
  for (const auto& e : spec.edges) {
    if (g.eindex_.count(e.id)) fail("ParseError", "duplicate edge '" + e.id + "'");
    if (e.color < 1 || e.color > spec.rank)
      fail("ParseError", "edge '" + e.id + "' has color outside 1.." + std::to_string(spec.rank));
    if (!g.has_vertex(e.src) || !g.has_vertex(e.tgt))
      fail("EndpointMismatch", "edge '" + e.id + "' uses an unknown vertex");
    g.eindex_[e.id] = static_cast<int>(g.edges_.size());
    g.edges_.push_back(Edge{e.id, e.color - 1, g.vertex_index(e.src), g.vertex_index(e.tgt)});
  }
  const std::size_t nv = g.vnames_.size();
  g.into_.assign(nv, std::vector<std::vector<int>>(static_cast<std::size_t>(g.k_)));
  for (std::size_t i = 0; i < g.edges_.size(); ++i)
    g.into_[static_cast<std::size_t>(g.edges_[i].tgt)][static_cast<std::size_t>(g.edges_[i].color)]
        .push_back(static_cast<int>(i));

  auto edge_of = [&](const std::string& id) {
    if (!g.has_edge(id)) fail("ParseError", "square uses unknown edge '" + id + "'");
    return g.edge_index(id);
  };
  // squares: first = [x, y] is the word [y, x]
  for (const auto& sq : spec.squares) {
    int x1 = edge_of(sq.first[0]), y1 = edge_of(sq.first[1]);
    int x2 = edge_of(sq.second[0]), y2 = edge_of(sq.second[1]);
    std::pair<int, int> w1{y1, x1}, w2{y2, x2};
    std::string label = sq.first[1] + "." + sq.first[0] + " = " + sq.second[1] + "." + sq.second[0];
    auto& E = g.edges_;
    auto ed = [&](int i) -> const Edge& { return E[static_cast<std::size_t>(i)]; };
    if (ed(y1).src != ed(x1).tgt || ed(y2).src != ed(x2).tgt)
      fail("EndpointMismatch", "square " + label + " has a non-composable side");
    if (ed(y1).color == ed(x1).color)
      fail("EndpointMismatch", "square " + label + " is not bicolored");
    if (ed(y1).color != ed(x2).color || ed(x1).color != ed(y2).color)
      fail("EndpointMismatch", "square " + label + " does not swap colors");
    if (ed(y1).tgt != ed(y2).tgt || ed(x1).src != ed(x2).src)
      fail("EndpointMismatch", "square " + label + " has different range or source");
    for (auto [a, b] : {std::pair{w1, w2}, std::pair{w2, w1}}) {
      if (g.swap_.count(a))
        fail("NonBijectiveRule", "composite " + ed(a.first).id + "." + ed(a.second).id +
                                     " appears in more than one square");
      g.swap_[a] = b;
    }
  }
  // totality: every bicolored composable pair has a square
  for (std::size_t a = 0; a < g.edges_.size(); ++a) {
    const Edge& ea = g.edges_[a];
    for (int c = 0; c < g.k_; ++c) {
      if (c == ea.color) continue;
      for (int b : g.into_[static_cast<std::size_t>(ea.src)][static_cast<std::size_t>(c)]) {
        if (!g.swap_.count({static_cast<int>(a), b}))
          fail("MissingRule", "no square contains " + ea.id + "." + g.edge_name(b));
      }
    }
  }
  // cube condition
  if (g.k_ >= 3) {
    for (int i = 0; i < g.k_; ++i)
      for (int j = i + 1; j < g.k_; ++j)
        for (int l = j + 1; l < g.k_; ++l)
          for (std::size_t a = 0; a < g.edges_.size(); ++a) {
            if (g.edges_[a].color != l) continue;
            for (int b : g.edges_at(g.edges_[a].src, j))
              for (int c : g.edges_at(g.edges_[static_cast<std::size_t>(b)].src, i)) {
                std::array<int, 3> u{static_cast<int>(a), b, c}, w = u;
                auto sw = [&](std::array<int, 3>& t, int p) {
                  auto [x, y] = g.swap(t[static_cast<std::size_t>(p)], t[static_cast<std::size_t>(p + 1)]);
                  t[static_cast<std::size_t>(p)] = x;
                  t[static_cast<std::size_t>(p + 1)] = y;
                };
                sw(u, 0), sw(u, 1), sw(u, 0);
                sw(w, 1), sw(w, 0), sw(w, 1);
                if (u != w)
                  fail("CubeConditionFailure", g.edges_[a].id + "." + g.edge_name(b) + "." +
                                                   g.edge_name(c) + " normalizes to " +
                                                   g.edge_name(u[0]) + "." + g.edge_name(u[1]) + "." +
                                                   g.edge_name(u[2]) + " and " + g.edge_name(w[0]) +
                                                   "." + g.edge_name(w[1]) + "." + g.edge_name(w[2]));
              }
          }
  }
  // flags
  GraphFlags f;
  for (std::size_t v = 0; v < nv; ++v)
    for (int c = 0; c < g.k_; ++c) {
      if (g.into_[v][static_cast<std::size_t>(c)].empty()) f.has_sources = true;
      bool out = false;
      for (const Edge& e : g.edges_)
        if (e.src == static_cast<int>(v) && e.color == c) out = true;
      if (!out) f.has_sinks = true;
    }
  for (std::size_t v = 0; v < nv && f.locally_convex; ++v)
    for (int i = 0; i < g.k_; ++i)
      for (int j = 0; j < g.k_; ++j) {
        if (i == j) continue;
        if (g.into_[v][static_cast<std::size_t>(j)].empty()) continue;
        for (int e : g.into_[v][static_cast<std::size_t>(i)])
          if (!g.can_extend(g.edges_[static_cast<std::size_t>(e)].src, j)) f.locally_convex = false;
      }
  // finitely aligned: Lambda^min finite on all edge pairs (always, for finite skeletons)
  for (std::size_t a = 0; a < g.edges_.size(); ++a)
    for (std::size_t b = 0; b < g.edges_.size(); ++b)
      if (g.edges_[a].tgt == g.edges_[b].tgt)
        (void)g.lambda_min(g.edge_path(static_cast<int>(a)), g.edge_path(static_cast<int>(b)));
  g.flags_ = f;
  return g;
}

inline std::string omega_vertex_name(const Vec& p) {
  std::string s = "v";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "_" : "") + std::to_string(p[i]);
  return s;
}

inline std::string omega_edge_name(const Vec& p, int c) {
  std::string s = "c" + std::to_string(c + 1);
  for (std::size_t i = 0; i < p.size(); ++i) s += "_" + std::to_string(p[i]);
  return s;
}

// Omega_{k,m}: vertices p <= m, one edge (p, p+e_i) of color i with range p.
inline KGraph build_omega(int k, const Vec& m) {
  for (auto x : m)
    if (x >= kInf) fail("InfiniteDegreeUnsupportedHere", "build_omega needs a finite extent");
  if (static_cast<int>(m.size()) != k) fail("ParseError", "extent has wrong rank");
  GraphSpec spec;
  spec.rank = k;
  for (const Vec& p : box(m)) spec.vertices.push_back(omega_vertex_name(p));
  for (const Vec& p : box(m))
    for (int i = 0; i < k; ++i) {
      Vec q = p + unit_vec(k, i);
      if (!leq(q, m)) continue;
      spec.edges.push_back({omega_edge_name(p, i), i + 1, omega_vertex_name(q), omega_vertex_name(p)});
    }
  for (const Vec& p : box(m))
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        Vec q = p + unit_vec(k, i) + unit_vec(k, j);
        if (!leq(q, m)) continue;
        // traverse (p+ei+ej -> p+ei -> p) versus (p+ei+ej -> p+ej -> p)
        spec.squares.push_back({{omega_edge_name(p + unit_vec(k, i), j), omega_edge_name(p, i)},
                                {omega_edge_name(p + unit_vec(k, j), i), omega_edge_name(p, j)}});
      }
  KGraph g = validate(spec);
  g.set_name("Omega_" + std::to_string(k) + "," + to_string(m));
  return g;
}

}  // namespace kgraph
