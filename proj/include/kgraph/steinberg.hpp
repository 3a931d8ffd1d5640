#pragma once

#include <functional>
#include <map>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "kgraph/groupoid.hpp"
#include "kgraph/report.hpp"

namespace kgraph {

// ---- coefficient rings
//
// A ring is a value with zero/one/add/mul/neg/eq/str. The reduced
// indecomposable flag is reported, never enforced.

struct IntRing {
  using T = boost::multiprecision::cpp_int;
  std::string name() const { return "z"; }
  bool reduced_indecomposable() const { return true; }
  T zero() const { return 0; }
  T one() const { return 1; }
  T add(const T& a, const T& b) const { return a + b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T neg(const T& a) const { return -a; }
  bool eq(const T& a, const T& b) const { return a == b; }
  std::string str(const T& a) const { return a.str(); }
  friend bool operator==(const IntRing&, const IntRing&) = default;
};

struct RatRing {
  using T = boost::multiprecision::cpp_rational;
  std::string name() const { return "q"; }
  bool reduced_indecomposable() const { return true; }
  T zero() const { return 0; }
  T one() const { return 1; }
  T add(const T& a, const T& b) const { return a + b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T neg(const T& a) const { return -a; }
  bool eq(const T& a, const T& b) const { return a == b; }
  std::string str(const T& a) const { return a.str(); }
  friend bool operator==(const RatRing&, const RatRing&) = default;
};

struct ModRing {
  using T = std::int64_t;
  std::int64_t n = 2;

  explicit ModRing(std::int64_t modulus = 2) : n(modulus) {
    if (n < 2 || n > (std::int64_t{1} << 31)) fail("ParseError", "modulus must lie in [2, 2^31]");
  }
  std::string name() const { return "z/" + std::to_string(n); }
  // Z/n is reduced and indecomposable exactly when n is prime
  bool reduced_indecomposable() const {
    for (std::int64_t p = 2; p * p <= n; ++p)
      if (n % p == 0) return false;
    return true;
  }
  T zero() const { return 0; }
  T one() const { return 1 % n; }
  T reduce(__int128 a) const { return static_cast<T>(((a % n) + n) % n); }
  T add(T a, T b) const { return reduce(static_cast<__int128>(a) + b); }
  T mul(T a, T b) const { return reduce(static_cast<__int128>(a) * b); }
  T neg(T a) const { return reduce(-static_cast<__int128>(a)); }
  bool eq(T a, T b) const { return a == b; }
  std::string str(T a) const { return std::to_string(a); }
  friend bool operator==(const ModRing&, const ModRing&) = default;
};

// ---- algebra elements: finite sums c * 1_B over disjoint basis bisections

template <class R>
struct AlgebraElement {
  const KGraph* g = nullptr;
  R ring;
  std::vector<std::pair<typename R::T, Bisection>> terms;  // disjoint supports, sorted

  bool is_zero() const { return terms.empty(); }
};

namespace detail {

template <class R>
void check_compatible(const AlgebraElement<R>& a, const AlgebraElement<R>& b) {
  if (a.g != b.g) fail("GraphMismatch", "operands live over different graphs");
  if (!(a.ring == b.ring)) fail("RingMismatch", a.ring.name() + " vs " + b.ring.name());
}

// Z(L|M) = union of Z(L b | M b) over the color-i edges b into s(L), when
// there are any.
inline std::optional<std::pair<Path, Path>> parent(const KGraph& g, const Path& L, const Path& M, int i) {
  auto s = static_cast<std::size_t>(i);
  if (L.d[s] == 0 || M.d[s] == 0) return std::nullopt;
  Vec e = unit_vec(g.rank(), i);
  Path tl = g.segment(L, L.d - e, L.d), tm = g.segment(M, M.d - e, M.d);
  if (tl != tm) return std::nullopt;
  return std::make_pair(g.segment(L, zero_vec(g.rank()), L.d - e), g.segment(M, zero_vec(g.rank()), M.d - e));
}

}  // namespace detail

// Refine every term to range level N (the join of d(l) + d(nu), nu in G):
// there the pieces Z(l a | mu a), a in s(l) Lambda^{<= N - d(l)}, are equal or
// disjoint. Then merge complete sibling families with equal coefficients.
template <class R>
AlgebraElement<R> normalize(const KGraph& g, const R& ring, const std::vector<std::pair<typename R::T, Bisection>>& in) {
  if (!g.flags().locally_convex) fail("NotLocallyConvex", "normal forms need a locally convex graph");
  const int k = g.rank();
  Vec N = zero_vec(k);
  for (const auto& [c, b] : in) {
    Vec t = b.l.d;
    for (const Path& nu : b.G) t = join(t, b.l.d + nu.d);
    N = join(N, t);
  }
  std::map<std::pair<Path, Path>, typename R::T> atoms;
  for (const auto& [c, b] : in) {
    if (ring.eq(c, ring.zero())) continue;
    for (const Path& a : g.paths_upto(b.l.s, N - b.l.d)) {
      bool cut = false;
      for (const Path& nu : b.G)
        if (leq(nu.d, a.d) && g.segment(a, zero_vec(k), nu.d) == nu) cut = true;
      if (cut) continue;
      auto key = std::make_pair(g.compose(b.l, a), g.compose(b.mu, a));
      auto it = atoms.find(key);
      if (it == atoms.end())
        atoms.emplace(key, c);
      else
        it->second = ring.add(it->second, c);
    }
  }
  for (auto it = atoms.begin(); it != atoms.end();)
    it = ring.eq(it->second, ring.zero()) ? atoms.erase(it) : std::next(it);

  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < k; ++i) {
      std::set<std::pair<Path, Path>> parents;
      for (const auto& [key, c] : atoms)
        if (auto p = detail::parent(g, key.first, key.second, i)) parents.insert(*p);
      for (const auto& [L, M] : parents) {
        const auto& es = g.edges_at(L.s, i);
        std::optional<typename R::T> coef;
        bool full = !es.empty();
        for (std::size_t j = 0; j < es.size() && full; ++j) {
          Path b = g.edge_path(es[j]);
          auto it = atoms.find({g.compose(L, b), g.compose(M, b)});
          if (it == atoms.end() || (coef && !ring.eq(*coef, it->second))) full = false;
          else coef = it->second;
        }
        if (!full) continue;
        for (int e : es) {
          Path b = g.edge_path(e);
          atoms.erase({g.compose(L, b), g.compose(M, b)});
        }
        atoms.emplace(std::make_pair(L, M), *coef);
        changed = true;
      }
    }
  }
  AlgebraElement<R> out{&g, ring, {}};
  for (const auto& [key, c] : atoms) out.terms.emplace_back(c, Bisection{key.first, key.second, {}});
  std::sort(out.terms.begin(), out.terms.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

template <class R>
AlgebraElement<R> alg_zero(const KGraph& g, const R& ring) {
  return AlgebraElement<R>{&g, ring, {}};
}

template <class R>
AlgebraElement<R> alg_basis(const KGraph& g, const R& ring, const Bisection& b, typename R::T c) {
  return normalize(g, ring, {{c, b}});
}

// s_lambda = 1_{Z(lambda | s(lambda))}
template <class R>
AlgebraElement<R> gen_s(const KGraph& g, const R& ring, const Path& l) {
  return alg_basis(g, ring, make_bisection(g, l, g.vertex(l.s)), ring.one());
}

template <class R>
AlgebraElement<R> gen_s_star(const KGraph& g, const R& ring, const Path& l) {
  return alg_basis(g, ring, make_bisection(g, g.vertex(l.s), l), ring.one());
}

template <class R>
AlgebraElement<R> alg_add(const AlgebraElement<R>& a, const AlgebraElement<R>& b) {
  detail::check_compatible(a, b);
  auto t = a.terms;
  t.insert(t.end(), b.terms.begin(), b.terms.end());
  return normalize(*a.g, a.ring, t);
}

template <class R>
AlgebraElement<R> alg_scale(const typename R::T& c, const AlgebraElement<R>& a) {
  auto t = a.terms;
  for (auto& [x, b] : t) x = a.ring.mul(c, x);
  return normalize(*a.g, a.ring, t);
}

template <class R>
AlgebraElement<R> alg_sub(const AlgebraElement<R>& a, const AlgebraElement<R>& b) {
  return alg_add(a, alg_scale(a.ring.neg(a.ring.one()), b));
}

// Convolution of indicators of bisections is the indicator of the product set.
template <class R>
AlgebraElement<R> alg_mul(const AlgebraElement<R>& a, const AlgebraElement<R>& b) {
  detail::check_compatible(a, b);
  std::vector<std::pair<typename R::T, Bisection>> t;
  for (const auto& [ca, A] : a.terms)
    for (const auto& [cb, B] : b.terms) {
      auto c = a.ring.mul(ca, cb);
      if (a.ring.eq(c, a.ring.zero())) continue;
      for (const Bisection& C : bisection_product(*a.g, A, B)) t.emplace_back(c, C);
    }
  return normalize(*a.g, a.ring, t);
}

template <class R>
AlgebraElement<R> alg_star(const AlgebraElement<R>& a) {
  auto t = a.terms;
  for (auto& [c, b] : t) std::swap(b.l, b.mu);
  return normalize(*a.g, a.ring, t);
}

template <class R>
bool alg_equal(const AlgebraElement<R>& a, const AlgebraElement<R>& b) {
  return alg_sub(a, b).is_zero();
}

template <class R>
AlgebraElement<R> grade_component(const AlgebraElement<R>& a, const Vec& n) {
  AlgebraElement<R> out{a.g, a.ring, {}};
  for (const auto& t : a.terms)
    if (t.second.lag() == n) out.terms.push_back(t);
  return out;
}

// Z(l|mu) meets the unit space only when l = mu, and then lies inside it.
template <class R>
bool is_diagonal(const AlgebraElement<R>& a) {
  for (const auto& t : a.terms)
    if (t.second.l != t.second.mu) return false;
  return true;
}

template <class R>
std::string format_element(const AlgebraElement<R>& a) {
  if (a.terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (i) s += " + ";
    s += a.ring.str(a.terms[i].first) + "*" + format_bisection(*a.g, a.terms[i].second);
  }
  return s;
}

// ---- relation check

using MinTable = std::function<std::vector<std::pair<Path, Path>>(const Path&, const Path&)>;

// Lambda^min with one pair dropped for a seeded choice of (lambda, mu).
inline MinTable corrupt_min_table(const KGraph& g, int depth, std::uint64_t seed) {
  std::vector<std::pair<Path, Path>> cands;
  const Vec top(static_cast<std::size_t>(g.rank()), depth);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    auto ps = g.paths_below(static_cast<int>(v), top);
    for (const Path& a : ps)
      for (const Path& b : ps)
        if (!g.lambda_min(a, b).empty()) cands.emplace_back(a, b);
  }
  if (cands.empty()) fail("RelationFailure", "no pair with a nonempty Lambda^min to corrupt");
  std::mt19937_64 rng(seed);
  auto bad = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
  return [&g, bad](const Path& a, const Path& b) {
    auto t = g.lambda_min(a, b);
    if (std::make_pair(a, b) == bad) t.pop_back();
    return t;
  };
}

// (KP1)-(KP4) as identities of algebra elements, over the paths of degree
// <= depth in each coordinate. (KP4) runs over the minimal exhaustive sets
// reachable by splitting {v} (members of total degree <= depth).
template <class R>
Report verify_kp(const KGraph& g, const R& ring, int depth, MinTable table = {}) {
  if (!table) table = [&g](const Path& a, const Path& b) { return g.lambda_min(a, b); };
  const int k = g.rank();
  Report rep;
  rep.envelope = {{"ring", ring.name()},
                  {"reduced_indecomposable", ring.reduced_indecomposable() ? "true" : "false"},
                  {"depth", std::to_string(depth)}};

  std::vector<Path> paths;
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (const Path& p : g.paths_below(static_cast<int>(v), Vec(static_cast<std::size_t>(k), depth))) paths.push_back(p);
  std::map<Path, AlgebraElement<R>> s, ss;
  auto S = [&](const Path& p) -> const AlgebraElement<R>& {
    auto it = s.find(p);
    return it != s.end() ? it->second : s.emplace(p, gen_s(g, ring, p)).first->second;
  };
  auto SS = [&](const Path& p) -> const AlgebraElement<R>& {
    auto it = ss.find(p);
    return it != ss.end() ? it->second : ss.emplace(p, gen_s_star(g, ring, p)).first->second;
  };

  Check kp1("KP1");
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    Path pv = g.vertex(static_cast<int>(v));
    kp1.record(alg_equal(alg_star(S(pv)), S(pv)), [&] { return "s_" + g.format(pv) + " is not self-adjoint"; });
    for (std::size_t w = 0; w < g.num_vertices(); ++w) {
      Path pw = g.vertex(static_cast<int>(w));
      auto prod = alg_mul(S(pv), S(pw));
      bool ok = v == w ? alg_equal(prod, S(pv)) : prod.is_zero();
      kp1.record(ok, [&] { return "s_" + g.format(pv) + " s_" + g.format(pw) + " = " + format_element(prod); });
    }
  }

  Check kp2("KP2");
  for (const Path& a : paths) {
    kp2.record(alg_equal(alg_mul(S(g.vertex(a.r)), S(a)), S(a)) && alg_equal(alg_mul(S(a), S(g.vertex(a.s))), S(a)),
           [&] { return "s_r(l) s_l s_s(l) != s_l for l = " + g.format(a); });
    for (const Path& b : paths) {
      if (a.s != b.r) continue;
      Path ab = g.compose(a, b);
      bool ok = alg_equal(alg_mul(S(a), S(b)), S(ab)) && alg_equal(alg_mul(SS(b), SS(a)), SS(ab));
      kp2.record(ok, [&] { return "l = " + g.format(a) + ", mu = " + g.format(b); });
    }
  }

  Check kp3("KP3");
  for (const Path& a : paths)
    for (const Path& b : paths) {
      auto lhs = alg_mul(SS(a), S(b));
      auto rhs = alg_zero(g, ring);
      if (a.r == b.r)
        for (const auto& [al, be] : table(a, b)) rhs = alg_add(rhs, alg_mul(S(al), SS(be)));
      kp3.record(alg_equal(lhs, rhs), [&] {
        return "l = " + g.format(a) + ", mu = " + g.format(b) + ": lhs " + format_element(lhs) + ", rhs " +
               format_element(rhs);
      });
    }

  Check kp4("KP4");
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const int vi = static_cast<int>(v);
    for (const auto& E : partition_sets(g, vi, depth, 256)) {
      bool has_vertex = false;
      for (const Path& p : E) has_vertex = has_vertex || p.is_vertex();
      if (has_vertex) continue;
      bool minimal = true;
      for (std::size_t j = 0; j < E.size() && minimal; ++j) {
        std::vector<Path> F = E;
        F.erase(F.begin() + static_cast<std::ptrdiff_t>(j));
        if (!F.empty() && g.is_exhaustive(vi, F)) minimal = false;
      }
      if (!minimal) continue;
      auto prod = S(g.vertex(vi));
      for (const Path& l : E) prod = alg_mul(prod, alg_sub(S(g.vertex(vi)), alg_mul(S(l), SS(l))));
      bool empty_complement = g.is_exhaustive(vi, E);
      kp4.record(prod.is_zero() && empty_complement, [&] {
        std::string es;
        for (const Path& l : E) es += (es.empty() ? "" : ",") + g.format(l);
        return "E = {" + es + "} at " + g.vertex_name(vi) + ": product " + format_element(prod);
      });
    }
  }

  rep.checks = {kp1, kp2, kp3, kp4};
  return rep;
}

inline void require_kp(const Report& rep) {
  for (const auto& r : rep.checks)
    if (!r.pass()) fail("RelationFailure", r.name + ": " + (r.witnesses.empty() ? "" : r.witnesses.front()));
}

}  // namespace kgraph
