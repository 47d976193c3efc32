#include "pickchoose/football.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pickchoose/errors.hpp"

namespace pickchoose {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view raw) {
  const std::string_view token = strip(raw);
  auto bad = [&]() { return InputError("unparsable score \"" + std::string(token) + "\""); };
  if (token.empty()) throw InputError("empty score token");

  std::string_view body = token;
  bool negative = false;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational value;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw bad();
    const cpp_int q{std::string(den)};
    if (q == 0) throw InputError("zero denominator in \"" + std::string(token) + "\"");
    value = Rational(cpp_int(std::string(num)), q);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw bad();
    }
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const cpp_int int_part = whole.empty() ? cpp_int(0) : cpp_int(std::string(whole));
    const cpp_int frac_part = frac.empty() ? cpp_int(0) : cpp_int(std::string(frac));
    value = Rational(int_part * scale + frac_part, scale);
  } else {
    if (!all_digits(body)) throw bad();
    value = Rational(cpp_int(std::string(body)));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(q);
  if (boost::multiprecision::denominator(q) != 1) out << '/' << boost::multiprecision::denominator(q);
  return out.str();
}

// --- Board ---------------------------------------------------------------------------

Board::Board(std::vector<Rational> scores) : scores_(std::move(scores)) {
  if (scores_.empty()) throw InputError("board is empty");
  if (scores_.size() % 2 != 0) {
    throw InputError("board has odd cardinality " + std::to_string(scores_.size()));
  }
  if (scores_.size() > static_cast<std::size_t>(kHardGroundSetLimit)) {
    throw CapacityError("board of " + std::to_string(scores_.size()) + " scores exceeds the hard limit");
  }
  std::stable_sort(scores_.begin(), scores_.end());
}

Rational Board::total() const {
  Rational t = 0;
  for (const auto& s : scores_) t += s;
  return t;
}

Rational Board::sum(const ElementSet& s) const {
  Rational t = 0;
  for (int e : s.elements()) t += score(e);
  return t;
}

std::string Board::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (i) out.push_back(',');
    out += pickchoose::to_string(scores_[i]);
  }
  return out;
}

Board parse_board(std::string_view text) {
  std::vector<Rational> scores;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    scores.push_back(parse_rational(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                         : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Board(std::move(scores));
}

Family winning_family(const Board& board) {
  const int n = board.size();
  const int m = board.m();
  const Rational total = board.total();
  Family f(n, m);
  for (std::uint64_t r = 0; r < f.universe_size(); ++r) {
    if (2 * board.sum(unrank(n, m, r)) > total) f.insert_rank(r);
  }
  return f;
}

FootballAnalysis analyze(const Solver& solver, const Board& board) {
  if (board.size() > solver.config().ground_set_cap) {
    throw CapacityError("board of " + std::to_string(board.size()) + " scores exceeds the solver cap of " +
                        std::to_string(solver.config().ground_set_cap));
  }
  FootballAnalysis a;
  a.alice_family = winning_family(board);
  a.bob_strict_family = a.alice_family;
  a.alice_wins = solver.alice(a.alice_family);
  a.bob_wins = solver.bob(a.bob_strict_family);
  a.draw_possible = !a.alice_wins && !a.bob_wins;
  return a;
}

nlohmann::json analysis_to_json(const Board& board, const FootballAnalysis& a) {
  std::vector<std::string> scores;
  for (const auto& s : board.scores()) scores.push_back(to_string(s));
  return nlohmann::json{{"board", scores},
                        {"m", board.m()},
                        {"winning_family", family_to_json(a.alice_family)},
                        {"winning_family_size", a.alice_family.size()},
                        {"alice_wins", a.alice_wins},
                        {"bob_wins", a.bob_wins},
                        {"draw_possible", a.draw_possible}};
}

const char* to_string(FourElementRule r) { return r == FourElementRule::KeepTop ? "KEEP_TOP" : "FORCE_BOTTOM"; }

FourElementRule four_element_rule(const Board& board) {
  if (board.size() != 4) {
    throw InputError("four-element rule needs a board of 4 scores, got " + std::to_string(board.size()));
  }
  const auto& x = board.scores();
  return x[0] + x[3] >= x[1] + x[2] ? FourElementRule::KeepTop : FourElementRule::ForceBottom;
}

Family four_element_objective(FourElementRule rule) {
  Family f(4, 2);
  for (std::uint64_t r = 0; r < f.universe_size(); ++r) {
    const KSet s = unrank(4, 2, r);
    const bool member = rule == FourElementRule::KeepTop ? s.contains(4) : !s.contains(1);
    if (member) f.insert_rank(r);
  }
  return f;
}

}  // namespace pickchoose
