#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pickchoose/element_set.hpp"

namespace pickchoose {

// Binomial coefficient C(n, k) for 0 <= n <= 64; zero when k < 0 or k > n.
std::uint64_t binomial(int n, int k);

// Colexicographic rank of a k-set of [n]: sum over the j-th smallest element
// s_j of C(s_j - 1, j). {1..k} has rank 0, {n-k+1..n} has rank C(n,k) - 1.
std::uint64_t rank(const KSet& s);
// Inverse of rank(). Throws InputError when r >= C(n, k).
KSet unrank(int n, int k, std::uint64_t r);

// A uniform family F of k-subsets of [n], stored as a bitset over colex
// ranks. (n, k, members) is the identity of a family: two families compare
// equal exactly when all three agree. Immutable once built and handed out.
class Family {
 public:
  Family() : Family(0, 0) {}
  // The empty family in C([n], k). Throws InputError unless 0 <= k <= n <= 30.
  Family(int n, int k);

  static Family full(int n, int k);
  static Family from_sets(int n, int k, const std::vector<KSet>& sets);

  int n() const { return n_; }
  int k() const { return k_; }
  // C(n, k): the number of candidate members.
  std::uint64_t universe_size() const { return universe_; }

  bool contains(const KSet& s) const;
  bool contains_rank(std::uint64_t r) const { return (words_[r >> 6] >> (r & 63)) & 1U; }
  void insert(const KSet& s);
  void insert_rank(std::uint64_t r) { words_[r >> 6] |= std::uint64_t{1} << (r & 63); }
  void erase_rank(std::uint64_t r) { words_[r >> 6] &= ~(std::uint64_t{1} << (r & 63)); }

  std::size_t size() const;
  bool empty() const;
  bool is_full() const;
  bool is_terminal() const { return k_ == 0 || k_ == n_; }

  // Members in colex order.
  std::vector<KSet> members() const;
  // Calls fn(rank, mask) for every member in ascending colex rank.
  void for_each_member(const std::function<void(std::uint64_t, std::uint32_t)>& fn) const;

  bool is_subfamily_of(const Family& other) const;

  std::size_t hash() const;
  bool operator==(const Family&) const = default;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  int n_;
  int k_;
  std::uint64_t universe_;
  std::vector<std::uint64_t> words_;
};

struct FamilyHash {
  std::size_t operator()(const Family& f) const { return f.hash(); }
};

// Colex-ordered masks of all k-subsets of [n], cached for n <= 20.
const std::vector<std::uint32_t>& colex_masks(int n, int k);

// --- Text formats ---------------------------------------------------------

// Structured form: {"n":7,"k":3,"sets":[[1,2,3],[1,2,4]]}.
// Throws InputError on missing n/k, duplicate sets, wrong cardinality or
// elements out of range, and CapacityError when n exceeds ground_set_cap.
Family parse_structured_family(std::string_view text, int ground_set_cap = kDefaultGroundSetCap);
Family family_from_json(const nlohmann::json& j, int ground_set_cap = kDefaultGroundSetCap);
nlohmann::json family_to_json(const Family& f);
std::string serialize_structured_family(const Family& f);

// Compact form: "123,124,127" with n (<= 9) supplied out of band. When k is
// omitted it is taken from the first token; an empty text is the empty
// family and then k is required. The k = 0 member (the empty set) is "{}".
Family parse_compact_family(std::string_view text, int n, std::optional<int> k = std::nullopt);
std::string serialize_compact_family(const Family& f);

// Dispatches on the first non-blank character: '{' means structured,
// anything else compact (which then needs n).
Family parse_family(std::string_view text, std::optional<int> n = std::nullopt,
                    std::optional<int> k = std::nullopt, int ground_set_cap = kDefaultGroundSetCap);

// --- Order-theoretic operations -------------------------------------------

// True iff F is closed upwards in the pointwise order. Checked on cover
// relations: S - {i} + {i+1} must be in F for every S in F, i in S, i+1 not
// in S.
bool is_increasing(const Family& f);

// Smallest increasing family containing f.
Family upward_closure(const Family& f);

// Pointwise comparison of two k-sets: s_i <= t_i for every i.
bool pointwise_leq(const KSet& s, const KSet& t);

// F_x^+ = {S \ {x} : x in S in F} and F_x^- = {S in F : x not in S}, both
// standardised onto [n-1]. Throw InputError when x is outside [1, n] or the
// section would leave 0 <= k' <= n' (k = 0 for plus, k = n for minus).
Family section_plus(const Family& f, int x);
Family section_minus(const Family& f, int x);

// {T in C([n], n-k) : [n] \ T not in F}. An involution; swaps the roles of
// protagonist and antagonist.
Family dual(const Family& f);

// T_n(t) = {{r} : t <= r <= n}, for 1 <= t <= n + 1 (t = n + 1 is empty).
Family singleton_family(int n, int t);

}  // namespace pickchoose
