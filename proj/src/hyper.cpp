#include "irspec/hyper.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "irspec/errors.hpp"
#include "irspec/parallel.hpp"

namespace irs {

namespace {

Rational pow_m(int m, int e) {
  Rational r = 1;
  const Rational base = e >= 0 ? Rational(m) : Rational(1, m);
  for (int i = 0; i < std::abs(e); ++i) r *= base;
  r.canonicalize();
  return r;
}

RationalMatrix mul_t(const RationalMatrix& A) { return A * A.transpose(); }

void require_square(const RationalMatrix& A) {
  if (A.rows() != A.cols() || A.rows() < 1) throw InputError("coefficient matrix must be square");
}

}  // namespace

MomentVector moments(const RationalMatrix& A) {
  require_square(A);
  const int m = A.rows();
  MomentVector mv;
  std::vector<Rational> rows(m, 0), cols(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Rational& a = A(i, j);
      const Rational a2 = a * a;
      mv.M1 += a;
      mv.M2 += a2;
      mv.M3 += a2 * a;
      mv.M4 += a2 * a2;
      rows[i] += a2;
      cols[j] += a2;
    }
  for (int i = 0; i < m; ++i) {
    mv.Mr += rows[i] * rows[i];
    mv.Mc += cols[i] * cols[i];
  }
  const RationalMatrix B = mul_t(A);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) mv.Mq += B(i, j) * B(i, j);
  return mv;
}

bool has_equal_margins(const RationalMatrix& A) {
  if (A.rows() != A.cols()) return false;
  const int m = A.rows();
  Rational first = 0;
  for (int j = 0; j < m; ++j) first += A(0, j);
  for (int i = 0; i < m; ++i) {
    Rational r = 0, c = 0;
    for (int j = 0; j < m; ++j) {
      r += A(i, j);
      c += A(j, i);
    }
    if (r != first || c != first) return false;
  }
  return true;
}

std::pair<Rational, Rational> mean_and_norm2(const RationalMatrix& A) {
  require_square(A);
  if (!has_equal_margins(A))
    throw InputError("mean_and_norm2: row and column sums of A must all be equal");
  const int m = A.rows();
  const MomentVector mv = moments(A);
  Rational mean = mv.M1 / m;
  if (m == 1) return {mean, mean * mean};
  Rational norm2 = (mv.M2 + Rational(m - 2) * mv.M1 * mv.M1 / (m * m)) / (m - 1);
  mean.canonicalize();
  norm2.canonicalize();
  return {mean, norm2};
}

Rational exhaustive_moment(const RationalMatrix& A, int k) {
  require_square(A);
  const int m = A.rows();
  if (m > 8) throw FeasibilityError("exhaustive moment over S_m", std::to_string(m) + "! permutations");
  std::vector<int> x(m);
  std::iota(x.begin(), x.end(), 0);
  Rational total = 0;
  long count = 0;
  do {
    Rational f = 0;
    for (int j = 0; j < m; ++j) f += A(x[j], j);
    Rational p = 1;
    for (int e = 0; e < k; ++e) p *= f;
    total += p;
    ++count;
  } while (std::next_permutation(x.begin(), x.end()));
  total /= count;
  total.canonicalize();
  return total;
}

RationalMatrix random_equal_margin(int m, std::mt19937_64& rng, const Rational& alpha) {
  std::uniform_int_distribution<int> d(-9, 9);
  std::vector<long> D(static_cast<std::size_t>(m * m));
  for (auto& v : D) v = d(rng);
  std::vector<long> r(m, 0), c(m, 0);
  long g = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      r[i] += D[i * m + j];
      c[j] += D[i * m + j];
      g += D[i * m + j];
    }
  RationalMatrix A(m, m);
  const Rational base = alpha / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Rational v = Rational(D[i * m + j]) - Rational(r[i], m) - Rational(c[j], m) + Rational(g, m * m);
      A(i, j) = base + v;
      A(i, j).canonicalize();
    }
  return A;
}

RationalMatrix apply_Tt(const RationalMatrix& A, const Rational& sigma) {
  require_square(A);
  const int m = A.rows();
  Rational M1 = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M1 += A(i, j);
  const Rational shift = (1 - sigma) * M1 / (m * m);
  RationalMatrix out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out(i, j) = sigma * A(i, j) + shift;
      out(i, j).canonicalize();
    }
  return out;
}

MomentVector moments_after_Tt(const MomentVector& mv, const Rational& s, int m, bool printed_m2) {
  const Rational t = (1 - s) / (m * m);
  const Rational M1 = mv.M1, M1_2 = M1 * M1, M1_3 = M1_2 * M1, M1_4 = M1_2 * M1_2;
  const Rational s2 = s * s, s3 = s2 * s, s4 = s2 * s2;
  const Rational t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  const Rational mm = m, m2 = m * m, m3 = m2 * m, m4 = m2 * m2;
  MomentVector o;
  o.M1 = M1;
  o.M2 = s2 * mv.M2 + 2 * s * t * M1_2 + t2 * M1_2 * (printed_m2 ? Rational(1) : m2);
  o.M3 = s3 * mv.M3 + 3 * s2 * t * M1 * mv.M2 + 3 * s * t2 * M1_3 + t3 * M1_3 * m2;
  o.M4 = s4 * mv.M4 + 4 * s3 * t * M1 * mv.M3 + 6 * s2 * t2 * M1_2 * mv.M2 + 4 * s * t3 * M1_4 + t4 * M1_4 * m2;
  auto star = [&](const Rational& base) -> Rational {
    return s4 * base + 4 * s3 * t * M1_2 * mv.M2 / mm + 2 * s2 * t2 * M1_2 * mv.M2 * mm +
           4 * s2 * t2 * M1_4 / mm + 4 * s * t3 * M1_4 * mm + t4 * M1_4 * m3;
  };
  o.Mr = star(mv.Mr);
  o.Mc = star(mv.Mc);
  o.Mq = s4 * mv.Mq + 4 * s3 * t * M1_4 / m2 + 6 * s2 * t2 * M1_4 + 4 * s * t3 * M1_4 * m2 + t4 * M1_4 * m4;
  for (Rational* q : {&o.M1, &o.M2, &o.M3, &o.M4, &o.Mr, &o.Mc, &o.Mq}) q->canonicalize();
  return o;
}

// ---- patterns ----

const std::array<Pattern, 15>& patterns() {
  static const std::array<Pattern, 15> table = [] {
    const std::array<std::pair<std::array<int, 4>, int>, 15> raw = {{
        {{0, 1, 2, 3}, 1},
        {{0, 0, 1, 2}, 2}, {{0, 1, 0, 2}, 2}, {{0, 1, 2, 0}, 2},
        {{0, 1, 1, 2}, 2}, {{0, 1, 2, 1}, 2}, {{0, 1, 2, 2}, 2},
        {{0, 0, 1, 1}, 3}, {{0, 1, 0, 1}, 3}, {{0, 1, 1, 0}, 3},
        {{0, 0, 0, 1}, 4}, {{0, 0, 1, 0}, 4}, {{0, 1, 0, 0}, 4}, {{0, 1, 1, 1}, 4},
        {{0, 0, 0, 0}, 5},
    }};
    std::array<Pattern, 15> out{};
    for (int p = 0; p < 15; ++p) {
      Pattern& q = out[p];
      q.block = raw[p].first;
      q.group = raw[p].second;
      q.blocks = *std::max_element(q.block.begin(), q.block.end()) + 1;
      for (int b = 0; b < q.blocks; ++b) {
        if (b) q.label += '|';
        for (int k = 0; k < 4; ++k)
          if (q.block[k] == b) q.label += static_cast<char>('0' + k);
      }
    }
    return out;
  }();
  return table;
}

int join_block_count(const Pattern& a, const Pattern& b) {
  std::array<int, 4> parent{0, 1, 2, 3};
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (a.block[i] == a.block[j] || b.block[i] == b.block[j]) parent[find(i)] = find(j);
  int roots = 0;
  for (int i = 0; i < 4; ++i) roots += find(i) == i;
  return roots;
}

Rational det_formula(int m) {
  BigInt d = 1;
  auto mul_pow = [&](long base, int e) {
    for (int i = 0; i < e; ++i) d *= base;
  };
  mul_pow(m, 15);
  mul_pow(m - 1, 14);
  mul_pow(m - 2, 7);
  mul_pow(m - 3, 1);
  return Rational(d);
}

AppendixTables build_appendix(int m) {
  if (m <= 3)
    throw InputError("the 15x15 Gram matrix is singular for m <= 3 (determinant factor m-3" +
                     std::string(m < 3 ? ", m-2" : "") + ")");
  AppendixTables t;
  t.m = m;
  t.C15 = RationalMatrix(15, 15);
  const auto& P = patterns();
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) t.C15(i, j) = pow_m(m, join_block_count(P[i], P[j]));
  t.det = t.C15.determinant();
  t.C15inv = t.C15.inverse();
  return t;
}

RationalMatrix gram_transcribed(int m) {
  // Exponents of m, row by row, in the E1..E5 order used throughout.
  static const char* rows[15] = {
      "433333322222221", "332222221122111", "323222212121211", "322322211212211", "322232211221121",
      "322223212112121", "322222321111221", "221111221111111", "212112112111111", "211221111211111",
      "222121111121111", "221212111112111", "212211211111211", "211122211111121", "111111111111111",
  };
  RationalMatrix C(15, 15);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) C(i, j) = pow_m(m, rows[i][j] - '0');
  return C;
}

// ---- blocks ----

std::string mono_name(Mono k) {
  switch (k) {
    case Mono::M1_4: return "M1^4";
    case Mono::M1M3: return "M1*M3";
    case Mono::M1_2M2: return "M1^2*M2";
    case Mono::M2_2: return "M2^2";
    case Mono::M4: return "M4";
    case Mono::Mr: return "Mr";
    case Mono::Mc: return "Mc";
    case Mono::Mq: return "Mq";
  }
  return "?";
}

std::string to_string(const BlockEntry& e) {
  std::string s = mono_name(e.mono);
  if (e.m_power != 0) s += " * m^" + std::to_string(e.m_power);
  return s;
}

namespace {

int group_start(int g) {
  static const int start[6] = {0, 0, 1, 7, 10, 14};
  return start[g];
}
int group_size(int g) {
  static const int size[6] = {0, 1, 6, 3, 4, 1};
  return size[g];
}

Rational mono_value(Mono k, const MomentVector& v) {
  switch (k) {
    case Mono::M1_4: return v.M1 * v.M1 * v.M1 * v.M1;
    case Mono::M1M3: return v.M1 * v.M3;
    case Mono::M1_2M2: return v.M1 * v.M1 * v.M2;
    case Mono::M2_2: return v.M2 * v.M2;
    case Mono::M4: return v.M4;
    case Mono::Mr: return v.Mr;
    case Mono::Mc: return v.Mc;
    case Mono::Mq: return v.Mq;
  }
  return 0;
}

}  // namespace

BlockTable blocks_transcribed() {
  BlockTable t{};
  std::array<std::array<bool, 15>, 15> set{};
  auto put = [&](int gi, int gj, auto entry) {
    for (int a = 0; a < group_size(gi); ++a)
      for (int b = 0; b < group_size(gj); ++b) {
        const int i = group_start(gi) + a, j = group_start(gj) + b;
        t[i][j] = entry(a, b);
        set[i][j] = true;
      }
  };
  auto all = [](Mono k, int p) { return [=](int, int) { return BlockEntry{k, p}; }; };

  put(1, 1, all(Mono::M1_4, 0));
  put(1, 2, all(Mono::M1_4, -1));
  put(1, 3, all(Mono::M1_4, 1));
  put(1, 4, all(Mono::M1_4, 1));
  put(1, 5, all(Mono::M1_4, -2));
  put(2, 2, [](int a, int b) { return a == b ? BlockEntry{Mono::M1_2M2, -2} : BlockEntry{Mono::M1_4, -1}; });
  {
    // 1-based (row, col) positions holding M1^2 M2 in the 6x3 block.
    static const int hit[6] = {1, 2, 3, 3, 2, 1};
    put(2, 3, [](int a, int b) {
      return hit[a] == b + 1 ? BlockEntry{Mono::M1_2M2, -1} : BlockEntry{Mono::M1_4, -3};
    });
  }
  {
    static const char* rows[6] = {"aabb", "abab", "baab", "abba", "baba", "bbaa"};
    put(2, 4, [](int a, int b) {
      return rows[a][b] == 'a' ? BlockEntry{Mono::M1_2M2, -1} : BlockEntry{Mono::M1_4, -3};
    });
  }
  put(2, 5, all(Mono::M1_2M2, -2));
  put(3, 3, [](int a, int b) { return a == b ? BlockEntry{Mono::M2_2, 0} : BlockEntry{Mono::Mq, 0}; });
  put(3, 4, all(Mono::M1_2M2, -2));
  put(3, 5, all(Mono::Mc, 0));
  put(4, 4, [](int a, int b) { return a == b ? BlockEntry{Mono::M1M3, -3} : BlockEntry{Mono::M1_2M2, -2}; });
  put(4, 5, all(Mono::M1M3, -1));
  put(5, 3, all(Mono::Mc, 0));
  put(5, 5, all(Mono::M4, 0));

  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j)
      if (!set[i][j]) {
        if (!set[j][i]) throw std::logic_error("transcribed block table incomplete");
        t[i][j] = t[j][i];
      }
  return t;
}

namespace {

// Sum over index tuples constant on the row and column patterns of
// prod_k A[a_k][b_k]. Rows are the blocks of p, columns the blocks of q,
// and position k is an edge. Leaves sum to a margin M1/m, isolated
// vertices to m, and what remains is one of a few small cores.
BlockEntry contract(const Pattern& p, const Pattern& q) {
  const int R = p.blocks, V = R + q.blocks;
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < 4; ++k) edges.emplace_back(p.block[k], R + q.block[k]);
  std::vector<bool> alive_edge(edges.size(), true), removed(V, false);
  auto degree = [&](int v) {
    int d = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (alive_edge[e]) d += (edges[e].first == v) + (edges[e].second == v);
    return d;
  };
  int m1 = 0, mp = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < V; ++v) {
      if (removed[v] || degree(v) != 1) continue;
      for (std::size_t e = 0; e < edges.size(); ++e)
        if (alive_edge[e] && (edges[e].first == v || edges[e].second == v)) alive_edge[e] = false;
      removed[v] = true;
      ++m1;
      --mp;
      changed = true;
    }
  }
  for (int v = 0; v < V; ++v)
    if (!removed[v] && degree(v) == 0) {
      removed[v] = true;
      ++mp;
    }

  // Remaining components.
  std::vector<Mono> cores;
  std::vector<int> comp(V, -1);
  for (int s = 0; s < V; ++s) {
    if (removed[s] || comp[s] >= 0) continue;
    std::vector<int> stack{s}, verts;
    comp[s] = s;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      verts.push_back(v);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!alive_edge[e]) continue;
        int w = -1;
        if (edges[e].first == v) w = edges[e].second;
        if (edges[e].second == v) w = edges[e].first;
        if (w >= 0 && comp[w] < 0) {
          comp[w] = s;
          stack.push_back(w);
        }
      }
    }
    int ne = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (alive_edge[e] && comp[edges[e].first] == s) ++ne;
    if (verts.size() == 2) {
      if (ne == 2) cores.push_back(Mono::M1_2M2);  // placeholder for M2
      else if (ne == 3) cores.push_back(Mono::M1M3);
      else if (ne == 4) cores.push_back(Mono::M4);
      else throw std::logic_error("unexpected multi-edge core");
    } else if (verts.size() == 3 && ne == 4) {
      int centre = -1;
      for (int v : verts)
        if (degree(v) == 4) centre = v;
      if (centre < 0) throw std::logic_error("unexpected three-vertex core");
      cores.push_back(centre < R ? Mono::Mr : Mono::Mc);
    } else if (verts.size() == 4 && ne == 4) {
      cores.push_back(Mono::Mq);
    } else {
      throw std::logic_error("unexpected core");
    }
  }

  // Combine: at most two cores, and M1 exponents make the total degree 4.
  int m2 = 0;
  std::vector<Mono> other;
  for (Mono c : cores) {
    if (c == Mono::M1_2M2) ++m2;
    else other.push_back(c);
  }
  if (other.empty()) {
    if (m2 == 0 && m1 == 4) return {Mono::M1_4, mp};
    if (m2 == 1 && m1 == 2) return {Mono::M1_2M2, mp};
    if (m2 == 2 && m1 == 0) return {Mono::M2_2, mp};
  } else if (other.size() == 1 && m2 == 0) {
    if (other[0] == Mono::M1M3 && m1 == 1) return {Mono::M1M3, mp};
    if (m1 == 0) return {other[0], mp};
  }
  throw std::logic_error("pattern contraction produced an unexpected monomial");
}

}  // namespace

BlockTable blocks_derived() {
  BlockTable t{};
  const auto& P = patterns();
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) t[i][j] = contract(P[i], P[j]);
  return t;
}

RationalMatrix evaluate_blocks(const BlockTable& t, const MomentVector& mv, int m) {
  RationalMatrix X(15, 15);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) {
      X(i, j) = mono_value(t[i][j].mono, mv) * pow_m(m, t[i][j].m_power);
      X(i, j).canonicalize();
    }
  return X;
}

RationalMatrix blocks_bruteforce(const RationalMatrix& A) {
  require_square(A);
  const int m = A.rows();
  const auto& P = patterns();
  RationalMatrix X(15, 15);
  auto tuples = [m](const Pattern& p) {
    std::vector<std::array<int, 4>> out;
    std::vector<int> vals(p.blocks, 0);
    for (;;) {
      std::array<int, 4> t{};
      for (int k = 0; k < 4; ++k) t[k] = vals[p.block[k]];
      out.push_back(t);
      int b = 0;
      while (b < p.blocks && ++vals[b] == m) vals[b++] = 0;
      if (b == p.blocks) break;
    }
    return out;
  };
  std::vector<std::vector<std::array<int, 4>>> T;
  for (const auto& p : P) T.push_back(tuples(p));
  parallel_blocks(225, 1, [&](std::size_t lo, std::size_t, std::size_t) {
    const int i = static_cast<int>(lo) / 15, j = static_cast<int>(lo) % 15;
    Rational s = 0;
    for (const auto& a : T[i])
      for (const auto& b : T[j]) s += A(a[0], b[0]) * A(a[1], b[1]) * A(a[2], b[2]) * A(a[3], b[3]);
    s.canonicalize();
    X(i, j) = s;
  });
  return X;
}

Rational norm4_with(const BlockTable& t, const RationalMatrix& A, const AppendixTables& tables) {
  require_square(A);
  if (A.rows() != tables.m) throw InputError("matrix size does not match the appendix tables");
  if (!has_equal_margins(A)) throw InputError("norm4: row and column sums of A must all be equal");
  const RationalMatrix X = evaluate_blocks(t, moments(A), tables.m);
  Rational r = (X * tables.C15inv).trace();
  r.canonicalize();
  return r;
}

Rational norm4_exact(const RationalMatrix& A, const AppendixTables& tables) {
  static const BlockTable derived = blocks_derived();
  return norm4_with(derived, A, tables);
}

AppendixAudit audit_appendix(int m, int samples, std::uint64_t seed) {
  AppendixAudit a;
  a.m = m;
  a.samples = samples;
  const AppendixTables tables = build_appendix(m);
  const BlockTable printed = blocks_transcribed(), derived = blocks_derived();
  const auto& P = patterns();
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j)
      if (!(printed[i][j] == derived[i][j]))
        a.diffs.push_back({i, j, "E" + std::to_string(P[i].group) + "E" + std::to_string(P[j].group), printed[i][j],
                           derived[i][j]});
  a.gram_matches_transcription = gram_transcribed(m) == tables.C15;
  a.det_matches_formula = tables.det == det_formula(m);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> alpha(-4, 4);
  std::uniform_int_distribution<int> sig(0, 8);
  for (int s = 0; s < samples; ++s) {
    const RationalMatrix A = random_equal_margin(m, rng, Rational(alpha(rng)));
    const MomentVector mv = moments(A);
    const RationalMatrix brute = blocks_bruteforce(A);
    a.derived_matches_bruteforce &= evaluate_blocks(derived, mv, m) == brute;
    a.printed_matches_bruteforce &= evaluate_blocks(printed, mv, m) == brute;
    if (m <= 7) {
      const Rational ex = exhaustive_moment(A, 4);
      a.norm4_derived_matches_exhaustive &= norm4_with(derived, A, tables) == ex;
      a.norm4_printed_matches_exhaustive &= norm4_with(printed, A, tables) == ex;
    }
    const Rational sigma(sig(rng), 8);
    const MomentVector direct = moments(apply_Tt(A, sigma));
    a.m2_transfer_corrected_matches &= moments_after_Tt(mv, sigma, m).M2 == direct.M2;
    a.m2_transfer_printed_matches &= moments_after_Tt(mv, sigma, m, true).M2 == direct.M2;
  }
  return a;
}

// ---- hypercontractivity ----

namespace {

struct SampleOut {
  Rational kurtosis;
  bool bounds_ok = true;
  bool valid = true;
};

SampleOut one_sample(int m, std::uint64_t seed, const AppendixTables& tables) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> alpha(-3, 3);
  const RationalMatrix A = random_equal_margin(m, rng, Rational(alpha(rng)));
  SampleOut out;
  const MomentVector mv = moments(A);
  const Rational norm2 = mean_and_norm2(A).second;
  if (norm2 == 0) {
    out.valid = false;
    return out;
  }
  // Bounds at ||f||_2 = 1, written without square roots.
  out.bounds_ok = mv.M1 * mv.M1 <= Rational(m * m) * norm2 && mv.M2 <= Rational(m - 1) * norm2 && mv.Mq <= mv.M2 * mv.M2;
  const RationalMatrix centred = A - RationalMatrix::ones(m, m) * (mv.M1 / (m * m));
  const Rational v = mean_and_norm2(centred).second;
  if (v == 0) {
    out.valid = false;
    return out;
  }
  out.kurtosis = norm4_exact(centred, tables) / (v * v);
  out.kurtosis.canonicalize();
  return out;
}

}  // namespace

HyperReport hypercontractivity_check(int m, std::optional<Rational> sigma4, int samples, std::uint64_t seed) {
  if (m < 4) throw InputError("hypercontractivity check needs m >= 4");
  HyperReport r;
  r.m = m;
  r.sigma4 = sigma4 ? *sigma4 : Rational(1, m * m);
  r.samples = samples;
  const AppendixTables tables = build_appendix(m);
  std::vector<SampleOut> outs(static_cast<std::size_t>(samples));
  parallel_blocks(outs.size(), 8, [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t i = lo; i < hi; ++i) outs[i] = one_sample(m, seed * 1000003ULL + i * 7919ULL + m, tables);
  });
  std::vector<Rational> valid;
  for (const auto& o : outs) {
    if (!o.bounds_ok) ++r.bound_failures;
    if (!o.valid) continue;
    valid.push_back(o.kurtosis);
    const Rational ratio = r.sigma4 * o.kurtosis;
    if (valid.size() == 1 || o.kurtosis > r.max_kurtosis) r.max_kurtosis = o.kurtosis;
    if (valid.size() == 1 || ratio > r.max_ratio) r.max_ratio = ratio;
    if (ratio > 1) ++r.violations;
  }
  // Products f1(x) f2(y) of independent centred functions: E (f1 f2)^4 is
  // k1 k2 and ||f1 f2||_2 = 1, so ||T(f1 f2)||_4^4 = sigma^8 k1 k2.
  for (std::size_t i = 0; i + 1 < valid.size(); i += 2) {
    ++r.degree2_pairs;
    if (r.sigma4 * r.sigma4 * valid[i] * valid[i + 1] > 1) ++r.degree2_violations;
  }
  return r;
}

HyperSweep hyper_sweep(int m_lo, int m_hi, int samples, std::uint64_t seed) {
  HyperSweep s;
  for (int m = std::max(4, m_lo); m <= m_hi; ++m) s.rows.push_back(hypercontractivity_check(m, std::nullopt, samples, seed));
  for (auto it = s.rows.rbegin(); it != s.rows.rend() && it->violations == 0; ++it) s.empirical_m0 = it->m;
  return s;
}

// ---- json ----

nlohmann::ordered_json to_json(const MomentVector& mv) {
  return {{"M1", to_string(mv.M1)}, {"M2", to_string(mv.M2)}, {"M3", to_string(mv.M3)}, {"M4", to_string(mv.M4)},
          {"Mr", to_string(mv.Mr)}, {"Mc", to_string(mv.Mc)}, {"Mq", to_string(mv.Mq)}};
}

nlohmann::ordered_json to_json(const AppendixAudit& a) {
  nlohmann::ordered_json diffs = nlohmann::ordered_json::array();
  const auto& P = patterns();
  for (const auto& d : a.diffs)
    diffs.push_back({{"block", d.block},
                     {"row", P[d.row].label},
                     {"col", P[d.col].label},
                     {"printed", to_string(d.printed)},
                     {"corrected", to_string(d.derived)}});
  return {{"m", a.m},
          {"samples", a.samples},
          {"gram_matches_transcription", a.gram_matches_transcription},
          {"det_matches_formula", a.det_matches_formula},
          {"derived_blocks_match_bruteforce", a.derived_matches_bruteforce},
          {"printed_blocks_match_bruteforce", a.printed_matches_bruteforce},
          {"norm4_derived_matches_exhaustive", a.norm4_derived_matches_exhaustive},
          {"norm4_printed_matches_exhaustive", a.norm4_printed_matches_exhaustive},
          {"m2_transfer_printed_matches", a.m2_transfer_printed_matches},
          {"m2_transfer_corrected_matches", a.m2_transfer_corrected_matches},
          {"block_corrections", diffs}};
}

nlohmann::ordered_json to_json(const HyperReport& r) {
  return {{"m", r.m},
          {"sigma4", to_string(r.sigma4)},
          {"samples", r.samples},
          {"max_norm4", to_string(r.max_ratio)},
          {"max_norm4_approx", to_double(r.max_ratio)},
          {"max_kurtosis", to_string(r.max_kurtosis)},
          {"violations", r.violations},
          {"moment_bound_failures", r.bound_failures},
          {"degree2_pairs", r.degree2_pairs},
          {"degree2_violations", r.degree2_violations}};
}

}  // namespace irs
