#include "pickchoose/family.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <memory>
#include <mutex>
#include <set>

#include <nlohmann/json.hpp>

#include "pickchoose/errors.hpp"

namespace pickchoose {

namespace {

using Table = std::array<std::array<std::uint64_t, 65>, 65>;

Table make_binomials() {
  Table t{};
  for (int n = 0; n <= 64; ++n) {
    t[n][0] = 1;
    for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
  }
  return t;
}

const Table& binomials() {
  static const Table table = make_binomials();
  return table;
}

constexpr int kMaskCacheLimit = 20;

std::uint64_t rank_of_mask(std::uint32_t mask) {
  const auto& c = binomials();
  std::uint64_t r = 0;
  int j = 1;
  for (std::uint32_t m = mask; m != 0; m &= m - 1, ++j) {
    r += c[std::countr_zero(m)][j];
  }
  return r;
}

std::uint32_t unrank_mask(int n, int k, std::uint64_t r) {
  const auto& c = binomials();
  std::uint32_t mask = 0;
  int top = n;
  for (int j = k; j >= 1; --j) {
    // Largest s with C(s - 1, j) <= r; s ranges over [j, top].
    int s = top;
    while (c[s - 1][j] > r) --s;
    mask |= std::uint32_t{1} << (s - 1);
    r -= c[s - 1][j];
    top = s - 1;
  }
  return mask;
}

std::uint32_t member_mask(int n, int k, std::uint64_t r) {
  if (n <= kMaskCacheLimit) return colex_masks(n, k)[r];
  return unrank_mask(n, k, r);
}

void check_shape(int n, int k) {
  if (n < 0 || n > kHardGroundSetLimit) {
    throw InputError("ground-set size n=" + std::to_string(n) + " outside [0, " +
                     std::to_string(kHardGroundSetLimit) + "]");
  }
  if (k < 0 || k > n) {
    throw InputError("cardinality k=" + std::to_string(k) + " outside [0, n=" + std::to_string(n) + "]");
  }
}

void check_cap(int n, int cap) {
  if (n > cap) {
    throw CapacityError("ground-set size n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 64 || k < 0 || k > n) return 0;
  return binomials()[n][k];
}

std::uint64_t rank(const KSet& s) { return rank_of_mask(s.mask()); }

KSet unrank(int n, int k, std::uint64_t r) {
  check_shape(n, k);
  if (r >= binomial(n, k)) {
    throw InputError("rank " + std::to_string(r) + " out of range for C(" + std::to_string(n) + "," +
                     std::to_string(k) + ")");
  }
  return KSet(n, unrank_mask(n, k, r));
}

const std::vector<std::uint32_t>& colex_masks(int n, int k) {
  check_shape(n, k);
  if (n > kMaskCacheLimit) throw CapacityError("colex mask cache covers n <= 20 only");
  static std::array<std::array<std::unique_ptr<std::vector<std::uint32_t>>, kMaskCacheLimit + 1>,
                    kMaskCacheLimit + 1>
      cache;
  static std::array<std::array<std::once_flag, kMaskCacheLimit + 1>, kMaskCacheLimit + 1> once;
  std::call_once(once[n][k], [n, k] {
    auto masks = std::make_unique<std::vector<std::uint32_t>>();
    const std::uint64_t total = binomial(n, k);
    masks->reserve(total);
    for (std::uint64_t r = 0; r < total; ++r) masks->push_back(unrank_mask(n, k, r));
    cache[n][k] = std::move(masks);
  });
  return *cache[n][k];
}

// --- Family ----------------------------------------------------------------

Family::Family(int n, int k) : n_(n), k_(k), universe_(0) {
  check_shape(n, k);
  universe_ = binomial(n, k);
  words_.assign((universe_ + 63) / 64, 0);
}

Family Family::full(int n, int k) {
  Family f(n, k);
  for (std::uint64_t r = 0; r < f.universe_; ++r) f.insert_rank(r);
  return f;
}

Family Family::from_sets(int n, int k, const std::vector<KSet>& sets) {
  Family f(n, k);
  for (const auto& s : sets) {
    if (f.contains(s)) throw InputError("duplicate set " + s.to_string());
    f.insert(s);
  }
  return f;
}

bool Family::contains(const KSet& s) const {
  if (s.n() != n_ || s.size() != k_) return false;
  return contains_rank(rank(s));
}

void Family::insert(const KSet& s) {
  if (s.n() != n_) {
    throw InputError("set " + s.to_string() + " lives on [" + std::to_string(s.n()) + "], family on [" +
                     std::to_string(n_) + "]");
  }
  if (s.size() != k_) {
    throw InputError("set " + s.to_string() + " has cardinality " + std::to_string(s.size()) + ", expected " +
                     std::to_string(k_));
  }
  insert_rank(rank(s));
}

std::size_t Family::size() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool Family::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

bool Family::is_full() const { return size() == universe_; }

std::vector<KSet> Family::members() const {
  std::vector<KSet> out;
  for_each_member([&](std::uint64_t, std::uint32_t mask) { out.emplace_back(n_, mask); });
  return out;
}

void Family::for_each_member(const std::function<void(std::uint64_t, std::uint32_t)>& fn) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    for (std::uint64_t bits = words_[w]; bits != 0; bits &= bits - 1) {
      const std::uint64_t r = w * 64 + static_cast<std::uint64_t>(std::countr_zero(bits));
      fn(r, member_mask(n_, k_, r));
    }
  }
}

bool Family::is_subfamily_of(const Family& other) const {
  if (n_ != other.n_ || k_ != other.k_) return false;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

std::size_t Family::hash() const {
  // splitmix-style mixing over (n, k, words).
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(n_) << 8) ^ static_cast<std::uint64_t>(k_);
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
  }
  h ^= h >> 29;
  return static_cast<std::size_t>(h);
}

// --- Text formats ------------------------------------------------------------

Family family_from_json(const nlohmann::json& j, int ground_set_cap) {
  if (!j.is_object()) throw InputError("family must be an object with n, k and sets");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw InputError("family is missing integer field \"n\"");
  if (!j.contains("k") || !j["k"].is_number_integer()) throw InputError("family is missing integer field \"k\"");
  if (!j.contains("sets") || !j["sets"].is_array()) throw InputError("family is missing array field \"sets\"");
  const int n = j["n"].get<int>();
  const int k = j["k"].get<int>();
  check_shape(n, k);
  check_cap(n, ground_set_cap);
  Family f(n, k);
  for (const auto& entry : j["sets"]) {
    if (!entry.is_array()) throw InputError("each set must be a list of integers, got " + entry.dump());
    std::vector<int> elements;
    for (const auto& e : entry) {
      if (!e.is_number_integer()) throw InputError("non-integer element " + e.dump() + " in " + entry.dump());
      elements.push_back(e.get<int>());
    }
    if (static_cast<int>(elements.size()) != k) {
      throw InputError("set " + entry.dump() + " has cardinality " + std::to_string(elements.size()) +
                       ", expected " + std::to_string(k));
    }
    const KSet s = KSet::from_elements(n, elements);
    if (f.contains(s)) throw InputError("duplicate set " + entry.dump());
    f.insert(s);
  }
  return f;
}

Family parse_structured_family(std::string_view text, int ground_set_cap) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed family object: ") + e.what());
  }
  return family_from_json(j, ground_set_cap);
}

nlohmann::json family_to_json(const Family& f) {
  std::vector<std::vector<int>> sets;
  for (const auto& s : f.members()) sets.push_back(s.elements());
  std::sort(sets.begin(), sets.end());
  return nlohmann::json{{"n", f.n()}, {"k", f.k()}, {"sets", sets}};
}

std::string serialize_structured_family(const Family& f) { return family_to_json(f).dump(); }

Family parse_compact_family(std::string_view text, int n, std::optional<int> k) {
  if (n < 0 || n > 9) throw InputError("compact family format needs 0 <= n <= 9, got n=" + std::to_string(n));
  std::vector<std::string> tokens;
  const std::string body = trim(text);
  if (!body.empty()) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = body.find(',', start);
      tokens.push_back(trim(std::string_view(body).substr(start, comma == std::string::npos ? std::string::npos
                                                                                             : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (tokens.empty()) {
    if (!k) throw InputError("empty compact family needs k supplied explicitly");
    return Family(n, *k);
  }
  auto token_size = [](const std::string& t) { return t == "{}" ? 0 : static_cast<int>(t.size()); };
  const int card = k.value_or(token_size(tokens.front()));
  Family f(n, card);
  for (const auto& t : tokens) {
    if (t.empty()) throw InputError("empty token in compact family");
    std::vector<int> elements;
    if (t != "{}") {
      for (char c : t) {
        if (c < '1' || c > '9') throw InputError("bad character '" + std::string(1, c) + "' in token \"" + t + "\"");
        elements.push_back(c - '0');
      }
    }
    if (static_cast<int>(elements.size()) != card) {
      throw InputError("token \"" + t + "\" has cardinality " + std::to_string(elements.size()) + ", expected " +
                       std::to_string(card) + " (mixed cardinality)");
    }
    const KSet s = KSet::from_elements(n, elements);
    if (f.contains(s)) throw InputError("duplicate set \"" + t + "\"");
    f.insert(s);
  }
  return f;
}

std::string serialize_compact_family(const Family& f) {
  if (f.n() > 9) throw InputError("compact family format needs n <= 9");
  std::vector<std::string> tokens;
  for (const auto& s : f.members()) {
    std::string t;
    for (int e : s.elements()) t.push_back(static_cast<char>('0' + e));
    tokens.push_back(t.empty() ? "{}" : t);
  }
  std::sort(tokens.begin(), tokens.end());
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(',');
    out += tokens[i];
  }
  return out;
}

Family parse_family(std::string_view text, std::optional<int> n, std::optional<int> k, int ground_set_cap) {
  const std::string body = trim(text);
  const auto quote = body.find_first_not_of(" \t\r\n", 1);
  if (!body.empty() && body.front() == '{' && quote != std::string::npos && body[quote] == '"') {
    return parse_structured_family(body, ground_set_cap);
  }
  if (!n) throw InputError("compact family format needs n supplied out of band");
  check_cap(*n, ground_set_cap);
  return parse_compact_family(body, *n, k);
}

// --- Order-theoretic operations ------------------------------------------------

bool is_increasing(const Family& f) {
  const int n = f.n();
  bool ok = true;
  f.for_each_member([&](std::uint64_t, std::uint32_t mask) {
    if (!ok) return;
    for (std::uint32_t m = mask; m != 0; m &= m - 1) {
      const int i = std::countr_zero(m);  // element i + 1
      if (i + 1 >= n) continue;
      const std::uint32_t next = std::uint32_t{1} << (i + 1);
      if (mask & next) continue;
      const std::uint32_t cover = (mask & ~(std::uint32_t{1} << i)) | next;
      if (!f.contains_rank(rank_of_mask(cover))) {
        ok = false;
        return;
      }
    }
  });
  return ok;
}

Family upward_closure(const Family& f) {
  Family out = f;
  const int n = f.n();
  const int k = f.k();
  // Covers have strictly larger colex rank, so one ascending sweep suffices.
  for (std::uint64_t r = 0; r < out.universe_size(); ++r) {
    if (!out.contains_rank(r)) continue;
    const std::uint32_t mask = member_mask(n, k, r);
    for (std::uint32_t m = mask; m != 0; m &= m - 1) {
      const int i = std::countr_zero(m);
      if (i + 1 >= n) continue;
      const std::uint32_t next = std::uint32_t{1} << (i + 1);
      if (mask & next) continue;
      out.insert_rank(rank_of_mask((mask & ~(std::uint32_t{1} << i)) | next));
    }
  }
  return out;
}

bool pointwise_leq(const KSet& s, const KSet& t) {
  const auto a = s.elements();
  const auto b = t.elements();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

Family section_plus(const Family& f, int x) {
  if (x < 1 || x > f.n()) {
    throw InputError("section element " + std::to_string(x) + " outside [1, " + std::to_string(f.n()) + "]");
  }
  if (f.k() < 1) throw InputError("plus-section of a k = 0 family");
  Family out(f.n() - 1, f.k() - 1);
  const std::uint32_t bit = std::uint32_t{1} << (x - 1);
  f.for_each_member([&](std::uint64_t, std::uint32_t mask) {
    if (mask & bit) out.insert_rank(rank_of_mask(standardise_mask(mask & ~bit, x)));
  });
  return out;
}

Family section_minus(const Family& f, int x) {
  if (x < 1 || x > f.n()) {
    throw InputError("section element " + std::to_string(x) + " outside [1, " + std::to_string(f.n()) + "]");
  }
  if (f.k() > f.n() - 1) throw InputError("minus-section of a k = n family");
  Family out(f.n() - 1, f.k());
  const std::uint32_t bit = std::uint32_t{1} << (x - 1);
  f.for_each_member([&](std::uint64_t, std::uint32_t mask) {
    if (!(mask & bit)) out.insert_rank(rank_of_mask(standardise_mask(mask, x)));
  });
  return out;
}

Family dual(const Family& f) {
  const int n = f.n();
  Family out(n, n - f.k());
  const std::uint32_t all = n >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
  for (std::uint64_t r = 0; r < out.universe_size(); ++r) {
    const std::uint32_t mask = member_mask(n, n - f.k(), r);
    if (!f.contains_rank(rank_of_mask(all & ~mask))) out.insert_rank(r);
  }
  return out;
}

Family singleton_family(int n, int t) {
  if (n < 1 || n > kHardGroundSetLimit) throw InputError("ground-set size outside [1, 30]");
  if (t < 1 || t > n + 1) {
    throw InputError("threshold t=" + std::to_string(t) + " outside [1, " + std::to_string(n + 1) + "]");
  }
  Family out(n, 1);
  // The colex rank of {r} is r - 1.
  for (int r = t; r <= n; ++r) out.insert_rank(static_cast<std::uint64_t>(r - 1));
  return out;
}

}  // namespace pickchoose
