#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace pickchoose {

// Ground sets are [n] = {1, ..., n} with n at most this value; element i is
// bit (i - 1) of a 32-bit mask.
inline constexpr int kHardGroundSetLimit = 30;

// Default cap on n for parsing and solving. Callers may lower or raise it
// up to kHardGroundSetLimit.
inline constexpr int kDefaultGroundSetCap = 24;

// A subset of the ground set [n]. Used both for the k-sets that make up a
// family and for element sets such as holdings and margins.
class ElementSet {
 public:
  constexpr ElementSet() = default;
  // Throws InputError if n is out of range or mask has bits above n.
  ElementSet(int n, std::uint32_t mask);
  ElementSet(int n, std::initializer_list<int> elements);
  static ElementSet from_elements(int n, const std::vector<int>& elements);
  static ElementSet full(int n);

  int n() const { return n_; }
  std::uint32_t mask() const { return mask_; }
  int size() const { return std::popcount(mask_); }
  bool empty() const { return mask_ == 0; }
  bool contains(int element) const {
    return element >= 1 && element <= n_ && ((mask_ >> (element - 1)) & 1U);
  }

  void insert(int element);
  void erase(int element);

  // Elements in ascending order.
  std::vector<int> elements() const;
  ElementSet complement() const;

  // Sets of the form {a, ..., n} (or empty).
  bool is_upper_interval() const;
  // Sets of the form {1, ..., b} (or empty).
  bool is_lower_interval() const;

  ElementSet operator&(const ElementSet& other) const;
  ElementSet operator|(const ElementSet& other) const;
  bool operator==(const ElementSet&) const = default;

  // "{1,2,4}"
  std::string to_string() const;
  // Interval notation for interval-shaped sets ("[3,7]", "[]"), otherwise
  // the same as to_string().
  std::string to_interval_string() const;

 private:
  int n_ = 0;
  std::uint32_t mask_ = 0;
};

// A k-set is an ElementSet whose cardinality is the family's k.
using KSet = ElementSet;

// Relabels [n] \ {x} onto [n-1] by the order-preserving bijection.
// Bit x-1 of the mask must be clear.
constexpr std::uint32_t standardise_mask(std::uint32_t mask, int x) {
  const std::uint32_t low = (std::uint32_t{1} << (x - 1)) - 1;
  return (mask & low) | ((mask >> x) << (x - 1));
}

}  // namespace pickchoose
