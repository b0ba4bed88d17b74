#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irspec/rational.hpp"

namespace irs {

// Largest m a Permutation can hold. Full enumeration of S_m is limited
// separately by kMaxEnumerable.
inline constexpr int kMaxAlternatives = 16;
inline constexpr int kMaxEnumerable = 10;

// A ranking of m alternatives. x(r) is the name placed at rank r; both
// ranks and names are 1-based.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::span<const int> word);

  static Permutation identity(int m);

  int size() const { return m_; }
  int operator()(int rank) const { return word_[rank - 1]; }
  int rank_of(int name) const;
  std::vector<int> word() const;

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.m_ == b.m_ && a.word_ == b.word_;
  }
  friend std::strong_ordering operator<=>(const Permutation& a,
                                          const Permutation& b) {
    if (a.m_ != b.m_) return a.m_ <=> b.m_;
    return a.word_ <=> b.word_;
  }

 private:
  std::array<std::uint8_t, kMaxAlternatives> word_{};
  std::uint8_t m_ = 0;
};

Permutation parse_perm(std::string_view text, int m);
std::string to_string(const Permutation& x);

// compose(x, y)(r) = x(y(r)).
Permutation compose(const Permutation& x, const Permutation& y);
Permutation inverse(const Permutation& x);

// Left-to-right product: apply x, then y. multiply(x, y) = compose(y, x).
// This is the product under which perm_matrix and rho1 are homomorphisms.
Permutation multiply(const Permutation& x, const Permutation& y);

int fixed_points(const Permutation& x);
std::uint64_t factorial(int k);

// S_m listed in lexicographic order, with O(m^2) index lookup.
class SymmetricGroup {
 public:
  explicit SymmetricGroup(int m);

  int m() const { return m_; }
  std::size_t order() const { return elements_.size(); }
  const Permutation& operator[](std::size_t idx) const { return elements_[idx]; }
  const std::vector<Permutation>& elements() const { return elements_; }
  std::size_t index_of(const Permutation& x) const;

  // Precomputed tables over element indices.
  std::size_t compose_index(std::size_t a, std::size_t b) const;
  std::size_t inverse_index(std::size_t a) const { return inverse_[a]; }
  int rank_of(std::size_t idx, int name) const {
    return rank_[idx * m_ + (name - 1)];
  }

 private:
  int m_;
  std::vector<Permutation> elements_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::uint8_t> rank_;
};

std::vector<Permutation> enumerate_group(int m);

// Profiles are handled by index: vote i of profile p is
// digit i of p in base m! (voter 1 most significant), so profile order
// is lexicographic in the votes.
class ProfileSpace {
 public:
  ProfileSpace(std::size_t group_order, int n);

  int voters() const { return n_; }
  std::size_t count() const { return count_; }
  std::size_t radix() const { return radix_; }
  // Stride of voter i (1-based) in the mixed-radix encoding.
  std::size_t stride(int i) const { return strides_[i - 1]; }
  std::size_t vote(std::size_t profile, int i) const {
    return (profile / strides_[i - 1]) % radix_;
  }
  std::size_t with_vote(std::size_t profile, int i, std::size_t v) const {
    return profile - vote(profile, i) * strides_[i - 1] + v * strides_[i - 1];
  }
  void decode(std::size_t profile, std::vector<std::size_t>& votes) const;
  std::size_t encode(std::span<const std::size_t> votes) const;

 private:
  std::size_t radix_;
  int n_;
  std::size_t count_;
  std::vector<std::size_t> strides_;
};

using Partition = std::vector<std::vector<int>>;

Partition parse_partition(std::string_view text, int m);
std::string partition_to_string(const Partition& p);
Partition singleton_partition(int m);
// [[1],[2..m]]: outputs are winners.
Partition scf_partition(int m);

struct Coset {
  Permutation representative;
  std::vector<Permutation> members;
};

// A subgroup H of S_m together with its cosets yH = {compose(y, h)}.
// For the fixing subgroup of a partition, members permute positions
// inside each block; the coset of y then reshuffles ranks within blocks
// and leaves the block of every name's rank unchanged.
class Subgroup {
 public:
  static Subgroup fixing(const SymmetricGroup& group, const Partition& partition);
  // Arbitrary subgroup given by its members; used for test fixtures such
  // as the alternating group. Throws InputError if not closed.
  static Subgroup from_members(const SymmetricGroup& group,
                               std::vector<Permutation> members);

  int m() const { return m_; }
  std::size_t order() const { return members_.size(); }
  bool is_fixing() const { return fixing_; }
  const Partition& partition() const { return partition_; }
  const std::vector<Permutation>& members() const { return members_; }
  const std::vector<Coset>& cosets() const { return cosets_; }
  std::size_t coset_count() const { return cosets_.size(); }

  std::size_t coset_of(std::size_t group_index) const { return coset_of_[group_index]; }
  std::size_t coset_of(const Permutation& y) const;
  const Coset& coset(std::size_t k) const { return cosets_[k]; }

  // Number of members y of coset k with y^{-1}(j) = r, for r = 1..m.
  // Dividing by |H| gives the j-profile.
  std::span<const int> profile_counts(std::size_t k, int j) const;
  // Id of the distinct j-profile of coset k among those of alternative j.
  int profile_id(std::size_t k, int j) const { return profile_id_[k * m_ + (j - 1)]; }
  // The distinct j-profiles (as counts) for alternative j, sorted.
  const std::vector<std::vector<int>>& distinct_profiles(int j) const {
    return distinct_[j - 1];
  }

 private:
  Subgroup() = default;
  void finish(const SymmetricGroup& group);

  int m_ = 0;
  bool fixing_ = false;
  Partition partition_;
  std::vector<Permutation> members_;
  std::vector<Coset> cosets_;
  std::vector<std::uint32_t> coset_of_;
  std::vector<int> counts_;
  std::vector<int> profile_id_;
  std::vector<std::vector<std::vector<int>>> distinct_;
};

inline Subgroup build_fixing_subgroup(const SymmetricGroup& group, const Partition& partition) {
  return Subgroup::fixing(group, partition);
}

using RankProfile = std::vector<Rational>;

RankProfile j_profile(const Subgroup& H, std::size_t coset, int j);
RankProfile j_profile(const Subgroup& H, const Coset& coset, int j);

}  // namespace irs
