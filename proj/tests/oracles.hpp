#pragma once

// Slow, direct implementations used only to pin values in the tests.
// They read everything off coset member lists and explicit loops, and do
// not share the histogram / rank-class shortcuts of the library.

#include <algorithm>
#include <numeric>
#include <vector>

#include "irspec/aggregators.hpp"
#include "irspec/hyper.hpp"
#include "irspec/laplacian.hpp"
#include "irspec/metrics.hpp"
#include "irspec/rational.hpp"
#include "irspec/rational_matrix.hpp"

namespace oracle {

using irs::Aggregator;
using irs::Coset;
using irs::Rational;

inline std::vector<Rational> profile(const Coset& K, int j, int m) {
  std::vector<Rational> v(m, 0);
  for (const auto& y : K.members) v[y.rank_of(j) - 1] += 1;
  for (auto& q : v) {
    q /= static_cast<long>(K.members.size());
    q.canonicalize();
  }
  return v;
}

inline Rational sqdist(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t t = 0; t < a.size(); ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
  return s;
}

inline Rational pow_int(std::size_t base, int e) {
  irs::BigInt b = 1;
  for (int i = 0; i < e; ++i) b *= static_cast<unsigned long>(base);
  return Rational(b);
}

struct IR {
  Rational distance;
  Rational indicator;
};

// sum_i sum_j E_{x, y_i} [x_i^{-1}(j) = y_i^{-1}(j)] * d(f(x), f(x^{-i}, y_i)).
inline IR ir(const Aggregator& f) {
  const auto& s = f.setting();
  const int m = s.m;
  const std::size_t N = s.group.order();
  IR out{0, 0};
  for (int i = 1; i <= s.n; ++i)
    for (std::size_t p = 0; p < s.profiles.count(); ++p)
      for (std::size_t y = 0; y < N; ++y) {
        const std::size_t q = s.profiles.with_vote(p, i, y);
        const auto& x_i = s.group[s.profiles.vote(p, i)];
        const auto& y_i = s.group[y];
        const Coset& a = s.H.coset(f.output(p));
        const Coset& b = s.H.coset(f.output(q));
        for (int j = 1; j <= m; ++j) {
          if (x_i.rank_of(j) != y_i.rank_of(j)) continue;
          const Rational d = sqdist(profile(a, j, m), profile(b, j, m));
          out.distance += d;
          if (d != 0) out.indicator += 1;
        }
      }
  const Rational norm = pow_int(N, s.n + 1);
  out.distance /= norm;
  out.indicator /= norm;
  out.distance.canonicalize();
  out.indicator.canonicalize();
  return out;
}

// Position of the profile vector among H.distinct_profiles(j), found by value.
inline int profile_id(const irs::Subgroup& H, const Coset& K, int j) {
  std::vector<int> c(H.m(), 0);
  for (const auto& y : K.members) ++c[y.rank_of(j) - 1];
  const auto& q = H.distinct_profiles(j);
  return static_cast<int>(std::find(q.begin(), q.end(), c) - q.begin());
}

// sum_i sum_j E_{x, y_i} [f(x^{-i}, y_i) strictly preferred to f(x) in <_{r,j}],
// r = x_i^{-1}(j).
inline Rational manipulation(const Aggregator& f, const irs::PreferenceOrders& o) {
  const auto& s = f.setting();
  const int m = s.m;
  const std::size_t N = s.group.order();
  Rational total = 0;
  for (int i = 1; i <= s.n; ++i)
    for (std::size_t p = 0; p < s.profiles.count(); ++p)
      for (std::size_t y = 0; y < N; ++y) {
        const std::size_t q = s.profiles.with_vote(p, i, y);
        const auto& x_i = s.group[s.profiles.vote(p, i)];
        for (int j = 1; j <= m; ++j) {
          const int r = x_i.rank_of(j);
          const auto& pos = o.position[(r - 1) * m + (j - 1)];
          if (pos[profile_id(s.H, s.H.coset(f.output(q)), j)] < pos[profile_id(s.H, s.H.coset(f.output(p)), j)])
            total += 1;
        }
      }
  total /= pow_int(N, s.n + 1);
  total.canonicalize();
  return total;
}

// tr(G L G^T) / |S_m|^2 for one voter with the dense bundle; G stacks
// the rows of g(x) as vectors indexed (x, a).
inline double dense_L_form(const Aggregator& f, const irs::LaplacianBundle& b) {
  const auto& s = f.setting();
  const irs::GEncoding g = irs::encode_g(f);
  const auto N = static_cast<Eigen::Index>(s.group.order());
  const int d = s.m - 1;
  double total = 0;
  for (int k = 0; k < d; ++k) {
    irs::Vector v(N * d);
    for (Eigen::Index x = 0; x < N; ++x)
      for (int a = 0; a < d; ++a) v(x * d + a) = g.values[x](k, a);
    total += v.dot(b.L * v);
  }
  return total / static_cast<double>(N * N);
}

// E (number of fixed points)^k over S_m.
inline Rational fixed_point_moment(int m, int k) {
  const auto all = irs::enumerate_group(m);
  Rational s = 0;
  for (const auto& x : all) {
    Rational t = 1;
    for (int e = 0; e < k; ++e) t *= irs::fixed_points(x);
    s += t;
  }
  s /= static_cast<long>(all.size());
  s.canonicalize();
  return s;
}

// Sum over index tuples a (constant on p) and b (constant on q) of
// prod_k A[a_k][b_k], by plain nested loops over [m]^4 x [m]^4.
inline Rational pattern_entry(const irs::RationalMatrix& A, const irs::Pattern& p, const irs::Pattern& q) {
  const int m = A.rows();
  auto fits = [](const irs::Pattern& pat, const int* t) {
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (pat.block[i] == pat.block[j] && t[i] != t[j]) return false;
    return true;
  };
  Rational s = 0;
  int a[4], b[4];
  for (int ai = 0; ai < m * m * m * m; ++ai) {
    for (int k = 0, v = ai; k < 4; ++k, v /= m) a[k] = v % m;
    if (!fits(p, a)) continue;
    for (int bi = 0; bi < m * m * m * m; ++bi) {
      for (int k = 0, v = bi; k < 4; ++k, v /= m) b[k] = v % m;
      if (!fits(q, b)) continue;
      s += A(a[0], b[0]) * A(a[1], b[1]) * A(a[2], b[2]) * A(a[3], b[3]);
    }
  }
  s.canonicalize();
  return s;
}

}  // namespace oracle
