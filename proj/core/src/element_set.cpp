#include "pickchoose/element_set.hpp"

#include <sstream>

#include "pickchoose/errors.hpp"

namespace pickchoose {

namespace {

std::uint32_t full_mask(int n) {
  return n >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
}

void check_n(int n) {
  if (n < 0 || n > kHardGroundSetLimit) {
    throw InputError("ground-set size " + std::to_string(n) + " outside [0, " +
                     std::to_string(kHardGroundSetLimit) + "]");
  }
}

}  // namespace

ElementSet::ElementSet(int n, std::uint32_t mask) : n_(n), mask_(mask) {
  check_n(n);
  if ((mask & ~full_mask(n)) != 0) {
    throw InputError("element outside [1, " + std::to_string(n) + "]");
  }
}

ElementSet::ElementSet(int n, std::initializer_list<int> elements) : n_(n) {
  check_n(n);
  for (int e : elements) {
    if (e < 1 || e > n) {
      throw InputError("element " + std::to_string(e) + " outside [1, " + std::to_string(n) + "]");
    }
    if (contains(e)) {
      throw InputError("duplicate element " + std::to_string(e));
    }
    insert(e);
  }
}

ElementSet ElementSet::from_elements(int n, const std::vector<int>& elements) {
  ElementSet s(n, 0);
  for (int e : elements) {
    if (e < 1 || e > n) {
      throw InputError("element " + std::to_string(e) + " outside [1, " + std::to_string(n) + "]");
    }
    if (s.contains(e)) {
      throw InputError("duplicate element " + std::to_string(e));
    }
    s.insert(e);
  }
  return s;
}

ElementSet ElementSet::full(int n) { return ElementSet(n, full_mask(n)); }

void ElementSet::insert(int element) {
  if (element < 1 || element > n_) {
    throw InputError("element " + std::to_string(element) + " outside [1, " + std::to_string(n_) + "]");
  }
  mask_ |= std::uint32_t{1} << (element - 1);
}

void ElementSet::erase(int element) {
  if (element >= 1 && element <= n_) mask_ &= ~(std::uint32_t{1} << (element - 1));
}

std::vector<int> ElementSet::elements() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m) + 1);
  }
  return out;
}

ElementSet ElementSet::complement() const { return ElementSet(n_, full_mask(n_) & ~mask_); }

bool ElementSet::is_upper_interval() const {
  if (mask_ == 0) return true;
  const int lowest = std::countr_zero(mask_);
  return mask_ == (full_mask(n_) & ~((std::uint32_t{1} << lowest) - 1));
}

bool ElementSet::is_lower_interval() const {
  if (mask_ == 0) return true;
  return (mask_ & (mask_ + 1)) == 0;
}

ElementSet ElementSet::operator&(const ElementSet& other) const {
  return ElementSet(n_, mask_ & other.mask_);
}

ElementSet ElementSet::operator|(const ElementSet& other) const {
  return ElementSet(n_, mask_ | other.mask_);
}

std::string ElementSet::to_string() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (int e : elements()) {
    if (!first) out << ',';
    out << e;
    first = false;
  }
  out << '}';
  return out.str();
}

std::string ElementSet::to_interval_string() const {
  if (mask_ == 0) return "[]";
  const int lo = std::countr_zero(mask_) + 1;
  const int hi = 32 - std::countl_zero(mask_);
  if (std::popcount(mask_) != hi - lo + 1) return to_string();
  return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
}

}  // namespace pickchoose
