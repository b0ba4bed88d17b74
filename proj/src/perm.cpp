#include "irspec/perm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "irspec/errors.hpp"

namespace irs {

Permutation::Permutation(std::span<const int> word) {
  const int m = static_cast<int>(word.size());
  if (m < 1 || m > kMaxAlternatives)
    throw InputError("permutation size out of range: " + std::to_string(m));
  std::array<bool, kMaxAlternatives + 1> seen{};
  for (int r = 0; r < m; ++r) {
    const int v = word[r];
    if (v < 1 || v > m)
      throw InputError("symbol out of range: " + std::to_string(v));
    if (seen[v]) throw InputError("duplicate symbol: " + std::to_string(v));
    seen[v] = true;
    word_[r] = static_cast<std::uint8_t>(v);
  }
  m_ = static_cast<std::uint8_t>(m);
}

Permutation Permutation::identity(int m) {
  std::vector<int> w(m);
  std::iota(w.begin(), w.end(), 1);
  return Permutation(w);
}

int Permutation::rank_of(int name) const {
  for (int r = 0; r < m_; ++r)
    if (word_[r] == name) return r + 1;
  throw InputError("name not in permutation: " + std::to_string(name));
}

std::vector<int> Permutation::word() const {
  return std::vector<int>(word_.begin(), word_.begin() + m_);
}

Permutation parse_perm(std::string_view text, int m) {
  std::vector<int> w;
  if (m <= 9 && text.find(',') == std::string_view::npos) {
    for (char c : text) {
      if (c < '0' || c > '9')
        throw InputError("bad character in permutation: " + std::string(text));
      w.push_back(c - '0');
    }
  } else {
    std::string item;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, item, ',')) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("bad permutation literal: " + std::string(text));
      w.push_back(std::stoi(item));
    }
  }
  if (static_cast<int>(w.size()) != m)
    throw InputError("permutation '" + std::string(text) + "' does not have " +
                     std::to_string(m) + " symbols");
  return Permutation(w);
}

std::string to_string(const Permutation& x) {
  std::string out;
  for (int r = 1; r <= x.size(); ++r) {
    if (x.size() > 9 && r > 1) out += ',';
    out += std::to_string(x(r));
  }
  return out;
}

Permutation compose(const Permutation& x, const Permutation& y) {
  if (x.size() != y.size()) throw InputError("compose: mismatched m");
  std::vector<int> w(x.size());
  for (int r = 1; r <= x.size(); ++r) w[r - 1] = x(y(r));
  return Permutation(w);
}

Permutation inverse(const Permutation& x) {
  std::vector<int> w(x.size());
  for (int r = 1; r <= x.size(); ++r) w[x(r) - 1] = r;
  return Permutation(w);
}

Permutation multiply(const Permutation& x, const Permutation& y) {
  return compose(y, x);
}

int fixed_points(const Permutation& x) {
  int c = 0;
  for (int r = 1; r <= x.size(); ++r) c += (x(r) == r);
  return c;
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::vector<Permutation> enumerate_group(int m) {
  if (m < 2 || m > kMaxEnumerable)
    throw InputError("enumerate_group: m must be in [2, " +
                     std::to_string(kMaxEnumerable) + "], got " + std::to_string(m));
  std::vector<int> w(m);
  std::iota(w.begin(), w.end(), 1);
  std::vector<Permutation> out;
  out.reserve(factorial(m));
  do {
    out.emplace_back(w);
  } while (std::next_permutation(w.begin(), w.end()));
  return out;
}

SymmetricGroup::SymmetricGroup(int m) : m_(m), elements_(enumerate_group(m)) {
  const std::size_t N = elements_.size();
  inverse_.resize(N);
  rank_.resize(N * m_);
  for (std::size_t a = 0; a < N; ++a) {
    for (int r = 1; r <= m_; ++r)
      rank_[a * m_ + (elements_[a](r) - 1)] = static_cast<std::uint8_t>(r);
    inverse_[a] = static_cast<std::uint32_t>(index_of(inverse(elements_[a])));
  }
}

// Lehmer rank of the word; matches lexicographic enumeration order.
std::size_t SymmetricGroup::index_of(const Permutation& x) const {
  if (x.size() != m_) throw InputError("index_of: mismatched m");
  std::size_t idx = 0;
  for (int r = 1; r <= m_; ++r) {
    int smaller = 0;
    for (int s = r + 1; s <= m_; ++s) smaller += (x(s) < x(r));
    idx = idx * static_cast<std::size_t>(m_ - r + 1) + static_cast<std::size_t>(smaller);
  }
  return idx;
}

std::size_t SymmetricGroup::compose_index(std::size_t a, std::size_t b) const {
  return index_of(compose(elements_[a], elements_[b]));
}

ProfileSpace::ProfileSpace(std::size_t group_order, int n)
    : radix_(group_order), n_(n), count_(1), strides_(n) {
  if (n < 1) throw InputError("voter count must be >= 1");
  for (int i = n; i >= 1; --i) {
    strides_[i - 1] = count_;
    count_ *= radix_;
  }
}

void ProfileSpace::decode(std::size_t profile, std::vector<std::size_t>& votes) const {
  votes.resize(n_);
  for (int i = 1; i <= n_; ++i) votes[i - 1] = vote(profile, i);
}

std::size_t ProfileSpace::encode(std::span<const std::size_t> votes) const {
  if (static_cast<int>(votes.size()) != n_) throw InputError("profile size mismatch");
  std::size_t p = 0;
  for (int i = 1; i <= n_; ++i) p += votes[i - 1] * strides_[i - 1];
  return p;
}

Partition parse_partition(std::string_view text, int m) {
  Partition p;
  std::string block;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, block, '|')) {
    std::vector<int> b;
    std::string item;
    std::stringstream bs(block);
    while (std::getline(bs, item, ',')) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("bad partition literal: " + std::string(text));
      b.push_back(std::stoi(item));
    }
    p.push_back(std::move(b));
  }
  std::vector<bool> seen(m + 1, false);
  int covered = 0;
  for (auto& b : p) {
    if (b.empty()) throw InputError("empty partition block");
    for (int v : b) {
      if (v < 1 || v > m || seen[v])
        throw InputError("invalid partition: " + std::string(text));
      seen[v] = true;
      ++covered;
    }
    std::sort(b.begin(), b.end());
  }
  if (covered != m) throw InputError("partition does not cover 1.." + std::to_string(m));
  std::sort(p.begin(), p.end());
  return p;
}

std::string partition_to_string(const Partition& p) {
  std::string out;
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (b) out += '|';
    for (std::size_t k = 0; k < p[b].size(); ++k) {
      if (k) out += ',';
      out += std::to_string(p[b][k]);
    }
  }
  return out;
}

Partition singleton_partition(int m) {
  Partition p;
  for (int v = 1; v <= m; ++v) p.push_back({v});
  return p;
}

Partition scf_partition(int m) {
  Partition p{{1}, {}};
  for (int v = 2; v <= m; ++v) p[1].push_back(v);
  return p;
}

Subgroup Subgroup::fixing(const SymmetricGroup& group, const Partition& partition) {
  const int m = group.m();
  std::string text = partition_to_string(partition);
  Partition canon = parse_partition(text, m);  // validates

  std::vector<int> block_of(m + 1);
  for (std::size_t b = 0; b < canon.size(); ++b)
    for (int v : canon[b]) block_of[v] = static_cast<int>(b);

  Subgroup H;
  H.m_ = m;
  H.fixing_ = true;
  H.partition_ = canon;
  for (const auto& h : group.elements()) {
    bool ok = true;
    for (int v = 1; v <= m && ok; ++v) ok = block_of[h(v)] == block_of[v];
    if (ok) H.members_.push_back(h);
  }
  H.finish(group);
  return H;
}

Subgroup Subgroup::from_members(const SymmetricGroup& group,
                                std::vector<Permutation> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::set<Permutation> set(members.begin(), members.end());
  for (const auto& a : members) {
    if (a.size() != group.m()) throw InputError("subgroup member has wrong m");
    for (const auto& b : members)
      if (!set.count(compose(a, b))) throw InputError("members are not closed under composition");
  }
  if (!set.count(Permutation::identity(group.m())))
    throw InputError("subgroup lacks the identity");
  Subgroup H;
  H.m_ = group.m();
  H.fixing_ = false;
  H.members_ = std::move(members);
  H.finish(group);
  return H;
}

void Subgroup::finish(const SymmetricGroup& group) {
  const std::size_t N = group.order();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  coset_of_.assign(N, kUnset);
  // Elements are visited in lexicographic order, so the first element of
  // each new coset is its least member.
  for (std::size_t a = 0; a < N; ++a) {
    if (coset_of_[a] != kUnset) continue;
    const auto k = static_cast<std::uint32_t>(cosets_.size());
    Coset c;
    c.representative = group[a];
    for (const auto& h : members_) {
      Permutation y = compose(group[a], h);
      coset_of_[group.index_of(y)] = k;
      c.members.push_back(y);
    }
    std::sort(c.members.begin(), c.members.end());
    cosets_.push_back(std::move(c));
  }

  counts_.assign(cosets_.size() * m_ * m_, 0);
  for (std::size_t k = 0; k < cosets_.size(); ++k)
    for (const auto& y : cosets_[k].members)
      for (int r = 1; r <= m_; ++r) {
        const int j = y(r);
        ++counts_[(k * m_ + (j - 1)) * m_ + (r - 1)];
      }

  distinct_.assign(m_, {});
  profile_id_.assign(cosets_.size() * m_, 0);
  for (int j = 1; j <= m_; ++j) {
    std::map<std::vector<int>, int> ids;
    for (std::size_t k = 0; k < cosets_.size(); ++k) {
      auto s = profile_counts(k, j);
      ids.emplace(std::vector<int>(s.begin(), s.end()), 0);
    }
    int next = 0;
    for (auto& [vec, id] : ids) {
      id = next++;
      distinct_[j - 1].push_back(vec);
    }
    for (std::size_t k = 0; k < cosets_.size(); ++k) {
      auto s = profile_counts(k, j);
      profile_id_[k * m_ + (j - 1)] = ids.at(std::vector<int>(s.begin(), s.end()));
    }
  }
}

std::size_t Subgroup::coset_of(const Permutation& y) const {
  for (std::size_t k = 0; k < cosets_.size(); ++k)
    if (std::binary_search(cosets_[k].members.begin(), cosets_[k].members.end(), y))
      return k;
  throw InputError("permutation not in any coset");
}

std::span<const int> Subgroup::profile_counts(std::size_t k, int j) const {
  return std::span<const int>(counts_.data() + (k * m_ + (j - 1)) * m_, m_);
}

RankProfile j_profile(const Subgroup& H, std::size_t coset, int j) {
  if (j < 1 || j > H.m()) throw InputError("alternative out of range");
  RankProfile v;
  for (int c : H.profile_counts(coset, j))
    v.push_back(make_rational(c, static_cast<long>(H.order())));
  return v;
}

RankProfile j_profile(const Subgroup& H, const Coset& coset, int j) {
  if (j < 1 || j > H.m()) throw InputError("alternative out of range");
  RankProfile v(H.m(), Rational(0));
  for (const auto& y : coset.members) v[y.rank_of(j) - 1] += 1;
  for (auto& e : v) e /= static_cast<long>(coset.members.size());
  return v;
}

}  // namespace irs
