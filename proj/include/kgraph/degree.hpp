#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace kgraph {

// Vectors in Z^k. Degrees are the nonnegative ones; boundary path degrees
// use kInf in coordinates where the path is infinite.
using Vec = std::vector<std::int64_t>;

inline constexpr std::int64_t kInf = std::int64_t{1} << 60;

inline Vec zero_vec(int k) { return Vec(static_cast<std::size_t>(k), 0); }

inline Vec unit_vec(int k, int i) {
  Vec v = zero_vec(k);
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

inline Vec ones_vec(int k) { return Vec(static_cast<std::size_t>(k), 1); }

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    r[i] = (a[i] >= kInf || b[i] >= kInf) ? kInf : a[i] + b[i];
  }
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] >= kInf ? kInf : a[i] - b[i];
  return r;
}

inline Vec operator-(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline Vec scale(const Vec& a, std::int64_t t) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * t;
  return r;
}

// componentwise order
inline bool leq(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Vec join(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline Vec meet(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

inline bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline bool is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

inline Vec pos_part(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max<std::int64_t>(a[i], 0);
  return r;
}

inline Vec neg_part(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max<std::int64_t>(-a[i], 0);
  return r;
}

inline std::int64_t total(const Vec& a) {
  return std::accumulate(a.begin(), a.end(), std::int64_t{0});
}

// Order by total degree, then lexicographically.
inline bool graded_less(const Vec& a, const Vec& b) {
  auto ta = total(a), tb = total(b);
  if (ta != tb) return ta < tb;
  return lex_less(a, b);
}

inline std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    if (v[i] >= kInf)
      os << "inf";
    else
      os << v[i];
  }
  os << ')';
  return os.str();
}

// All v with 0 <= v <= bound, in graded order.
inline std::vector<Vec> box(const Vec& bound) {
  std::vector<Vec> out;
  Vec cur = zero_vec(static_cast<int>(bound.size()));
  if (bound.empty()) return {cur};
  for (;;) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < cur.size()) {
      if (cur[i] < bound[i]) {
        ++cur[i];
        break;
      }
      cur[i] = 0;
      ++i;
    }
    if (i == cur.size()) break;
  }
  std::sort(out.begin(), out.end(), graded_less);
  return out;
}

// Vectors with fixed entries where fixed[i] >= 0, free entries >= lo (0 or 1),
// and free-entry sum at most budget; graded order.
inline std::vector<Vec> bounded_vectors(const Vec& fixed, std::int64_t lo, std::int64_t budget) {
  std::vector<Vec> out;
  Vec cur = fixed;
  std::vector<std::size_t> freei;
  for (std::size_t i = 0; i < fixed.size(); ++i)
    if (fixed[i] < 0) freei.push_back(i);
  auto rec = [&](auto&& self, std::size_t j, std::int64_t left) -> void {
    if (j == freei.size()) {
      out.push_back(cur);
      return;
    }
    for (std::int64_t x = lo; x <= left; ++x) {
      cur[freei[j]] = x;
      self(self, j + 1, left - x);
    }
  };
  rec(rec, 0, budget);
  std::sort(out.begin(), out.end(), graded_less);
  return out;
}

// ---- enumeration of N^k by total degree then lex (the default N^k <-> N map)

namespace detail {
inline unsigned __int128 binom(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < r) return 0;
  unsigned __int128 acc = 1;
  for (std::int64_t i = 1; i <= r; ++i) acc = acc * static_cast<unsigned __int128>(n - r + i) / i;
  return acc;
}
// number of vectors in N^k with entry sum t
inline unsigned __int128 compositions(std::int64_t t, int k) {
  if (k == 0) return t == 0 ? 1 : 0;
  return binom(t + k - 1, k - 1);
}
}  // namespace detail

inline std::uint64_t rk_to_r(const Vec& n) {
  const int k = static_cast<int>(n.size());
  std::int64_t t = total(n);
  unsigned __int128 idx = 0;
  for (std::int64_t s = 0; s < t; ++s) idx += detail::compositions(s, k);
  std::int64_t left = t;
  for (int i = 0; i + 1 < k; ++i) {
    for (std::int64_t v = 0; v < n[static_cast<std::size_t>(i)]; ++v)
      idx += detail::compositions(left - v, k - i - 1);
    left -= n[static_cast<std::size_t>(i)];
  }
  return static_cast<std::uint64_t>(idx);
}

inline Vec r_to_rk(std::uint64_t r, int k) {
  Vec out = zero_vec(k);
  if (k == 0) return out;
  unsigned __int128 idx = r;
  std::int64_t t = 0;
  while (idx >= detail::compositions(t, k)) {
    idx -= detail::compositions(t, k);
    ++t;
  }
  std::int64_t left = t;
  for (int i = 0; i + 1 < k; ++i) {
    std::int64_t v = 0;
    while (idx >= detail::compositions(left - v, k - i - 1)) {
      idx -= detail::compositions(left - v, k - i - 1);
      ++v;
    }
    out[static_cast<std::size_t>(i)] = v;
    left -= v;
  }
  out[static_cast<std::size_t>(k - 1)] = left;
  return out;
}

// ---- subgroups of Z^k in Hermite normal form

// Row-style HNF of the lattice spanned by rows: leading entries positive,
// entries above each pivot reduced into [0, pivot).
inline std::vector<Vec> hnf(std::vector<Vec> rows, int k) {
  std::vector<Vec> out;
  std::size_t col = 0;
  auto nonzero = [](const Vec& v) { return !is_zero(v); };
  rows.erase(std::remove_if(rows.begin(), rows.end(), [&](const Vec& v) { return !nonzero(v); }),
             rows.end());
  while (!rows.empty() && col < static_cast<std::size_t>(k)) {
    // euclid on column col among remaining rows
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i][col] != 0 &&
            (best == rows.size() || std::llabs(rows[i][col]) < std::llabs(rows[best][col])))
          best = i;
      if (best == rows.size()) break;
      bool done = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == best || rows[i][col] == 0) continue;
        std::int64_t q = rows[i][col] / rows[best][col];
        for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= q * rows[best][j];
        if (rows[i][col] != 0) done = false;
      }
      if (done) {
        Vec piv = rows[best];
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
        if (piv[col] < 0) piv = -piv;
        out.push_back(piv);
        break;
      }
    }
    rows.erase(std::remove_if(rows.begin(), rows.end(), [&](const Vec& v) { return !nonzero(v); }),
               rows.end());
    ++col;
  }
  // reduce above pivots
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t pc = 0;
    while (out[i][pc] == 0) ++pc;
    for (std::size_t j = 0; j < i; ++j) {
      std::int64_t a = out[j][pc], p = out[i][pc];
      std::int64_t q = a / p;
      if (a - q * p < 0) --q;
      for (std::size_t c = 0; c < out[j].size(); ++c) out[j][c] -= q * out[i][c];
    }
  }
  return out;
}

// Membership of v in the lattice with HNF basis h.
inline bool in_lattice(const std::vector<Vec>& h, Vec v) {
  for (const auto& row : h) {
    std::size_t pc = 0;
    while (row[pc] == 0) ++pc;
    for (std::size_t c = 0; c < pc; ++c)
      if (v[c] != 0) return false;
    if (v[pc] % row[pc] != 0) return false;
    std::int64_t q = v[pc] / row[pc];
    for (std::size_t c = 0; c < v.size(); ++c) v[c] -= q * row[c];
  }
  return is_zero(v);
}

}  // namespace kgraph
