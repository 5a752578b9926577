#pragma once

// L-system genotype: one production rule per module symbol (C, B, J), axiom [C].
// Joint tokens carry their oscillator parameters, so the grammar encodes the
// body and the controller together.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evobot/controller.hpp"
#include "evobot/random.hpp"

namespace evobot {

enum class Symbol : char {
  Core = 'C',
  Brick = 'B',
  Joint = 'J',
  TurnLeft = 'l',
  TurnRight = 'r',
  Push = '[',
  Pop = ']',
};

inline bool is_module(Symbol s) noexcept {
  return s == Symbol::Core || s == Symbol::Brick || s == Symbol::Joint;
}

struct Token {
  Symbol symbol = Symbol::Brick;
  std::optional<OscillatorParams> joint;  // set iff symbol == Joint

  static Token core() { return {Symbol::Core, std::nullopt}; }
  static Token brick() { return {Symbol::Brick, std::nullopt}; }
  static Token joint_with(OscillatorParams p) { return {Symbol::Joint, p}; }
  static Token left() { return {Symbol::TurnLeft, std::nullopt}; }
  static Token right() { return {Symbol::TurnRight, std::nullopt}; }
  static Token push() { return {Symbol::Push, std::nullopt}; }
  static Token pop() { return {Symbol::Pop, std::nullopt}; }

  friend bool operator==(const Token&, const Token&) = default;
};

using Word = std::vector<Token>;

struct ProductionRule {
  Symbol predecessor = Symbol::Core;
  Word replacement;

  friend bool operator==(const ProductionRule&, const ProductionRule&) = default;
};

inline constexpr std::array<Symbol, 3> kPredecessors{Symbol::Core, Symbol::Brick, Symbol::Joint};

inline std::size_t rule_index(Symbol s) {
  switch (s) {
    case Symbol::Core: return 0;
    case Symbol::Brick: return 1;
    case Symbol::Joint: return 2;
    default: throw std::invalid_argument("no production rule for terminal symbol");
  }
}

struct Genotype {
  std::array<ProductionRule, 3> rules{ProductionRule{Symbol::Core, {Token::core()}},
                                      ProductionRule{Symbol::Brick, {Token::brick()}},
                                      ProductionRule{Symbol::Joint, {Token::brick()}}};

  const ProductionRule& rule(Symbol s) const { return rules[rule_index(s)]; }
  ProductionRule& rule(Symbol s) { return rules[rule_index(s)]; }

  static Word axiom() { return {Token::core()}; }

  friend bool operator==(const Genotype&, const Genotype&) = default;
};

struct RewriteConfig {
  std::size_t iterations = 3;
  std::size_t max_string_length = 1000;
};

// ---------------------------------------------------------------------------
// Validation

inline bool brackets_balanced(const Word& w) {
  long depth = 0;
  for (const auto& t : w) {
    if (t.symbol == Symbol::Push) ++depth;
    if (t.symbol == Symbol::Pop && --depth < 0) return false;
  }
  return depth == 0;
}

/// Empty when the rule satisfies every invariant, otherwise a description.
inline std::string rule_violation(const ProductionRule& r) {
  if (!is_module(r.predecessor)) return "predecessor must be C, B or J";
  if (r.replacement.empty()) return "empty replacement";
  for (std::size_t i = 0; i < r.replacement.size(); ++i) {
    const auto& t = r.replacement[i];
    if (t.joint.has_value() != (t.symbol == Symbol::Joint)) return "joint parameters misplaced";
    if (t.joint && !in_range(*t.joint)) return "joint parameters out of range";
    if (t.symbol == Symbol::Core) {
      if (r.predecessor != Symbol::Core) return "core token in non-core rule";
      if (i != 0) return "core token not at position 0";
    }
  }
  if (r.predecessor == Symbol::Core && r.replacement.front().symbol != Symbol::Core)
    return "core rule must start with C";
  if (!brackets_balanced(r.replacement)) return "unbalanced brackets";
  return {};
}

inline std::string genotype_violation(const Genotype& g) {
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    if (g.rules[i].predecessor != kPredecessors[i]) return "rules out of order";
    if (auto v = rule_violation(g.rules[i]); !v.empty())
      return std::string(1, static_cast<char>(kPredecessors[i])) + ": " + v;
  }
  return {};
}

inline bool is_valid(const Genotype& g) { return genotype_violation(g).empty(); }

// ---------------------------------------------------------------------------
// Random construction

// Parameters live on a 0.01 grid so that the two-decimal text form is exact.
inline OscillatorParams random_oscillator(Rng& rng) {
  auto grid = [&](int lo, int hi) { return std::uniform_int_distribution<int>{lo, hi}(rng); };
  OscillatorParams p;
  p.amplitude = grid(0, 100) / 100.0;
  p.period = grid(100, 1000) / 100.0;
  p.phase = grid(0, 99) / 100.0;
  return p;
}

inline Token random_growth_token(Rng& rng) {
  switch (uniform_index(rng, 4)) {
    case 0: return Token::brick();
    case 1: return Token::joint_with(random_oscillator(rng));
    case 2: return Token::left();
    default: return Token::right();
  }
}

/// Word of total length uniform in [2, 6]. With probability 0.2 a nonempty
/// suffix of the generated symbols is wrapped in a bracket pair; the pair
/// counts toward the length.
inline Word random_word(Symbol predecessor, Rng& rng) {
  const std::size_t length = 2 + uniform_index(rng, 5);
  const std::size_t head = predecessor == Symbol::Core ? 1 : 0;
  const bool wrap = bernoulli(rng, 0.2) && length >= head + 3;
  const std::size_t n_symbols = length - head - (wrap ? 2 : 0);

  Word body;
  for (std::size_t i = 0; i < n_symbols; ++i) body.push_back(random_growth_token(rng));
  if (wrap) {
    const auto start = static_cast<std::ptrdiff_t>(uniform_index(rng, n_symbols));
    body.insert(body.begin() + start, Token::push());
    body.push_back(Token::pop());
  }
  Word w;
  if (head) w.push_back(Token::core());
  w.insert(w.end(), body.begin(), body.end());
  return w;
}

inline Genotype random_genotype(Rng& rng) {
  Genotype g;
  for (auto s : kPredecessors) g.rule(s) = {s, random_word(s, rng)};
  return g;
}

inline Genotype random_genotype(std::uint64_t seed) {
  auto rng = make_rng(seed);
  return random_genotype(rng);
}

// ---------------------------------------------------------------------------
// Parallel rewriting

namespace detail {
/// Drops every bracket without a partner.
inline Word remove_unmatched_brackets(const Word& w) {
  std::vector<bool> drop(w.size(), false);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].symbol == Symbol::Push) {
      open.push_back(i);
    } else if (w[i].symbol == Symbol::Pop) {
      if (open.empty()) drop[i] = true;
      else open.pop_back();
    }
  }
  for (auto i : open) drop[i] = true;
  Word out;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!drop[i]) out.push_back(w[i]);
  return out;
}
}  // namespace detail

/// Expands the axiom `cfg.iterations` times. Output is capped at
/// `max_string_length` tokens; because each token rewrites independently, a
/// capped prefix rewrites to a prefix of the uncapped result, so capping every
/// round is equivalent to capping once at the end.
inline Word rewrite(const Genotype& g, const RewriteConfig& cfg) {
  Word current = Genotype::axiom();
  const auto cap = cfg.max_string_length;
  if (current.size() > cap) current.resize(cap);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    Word next;
    next.reserve(std::min(cap, current.size() * 6));
    for (const auto& t : current) {
      if (next.size() >= cap) break;
      if (is_module(t.symbol)) {
        for (const auto& r : g.rule(t.symbol).replacement) {
          if (next.size() >= cap) break;
          next.push_back(r);
        }
      } else {
        next.push_back(t);
      }
    }
    current = std::move(next);
  }
  return detail::remove_unmatched_brackets(current);
}

// ---------------------------------------------------------------------------
// Mutation

enum class MutationOp { Add, Delete, Swap };

struct Mutation {
  Symbol rule = Symbol::Core;
  MutationOp op = MutationOp::Add;
  std::size_t first = 0;   // insert position, deleted index, or first swap index
  std::size_t second = 0;  // second swap index
  Token inserted;          // Add only
};

inline Token random_insert_token(Rng& rng) {
  switch (uniform_index(rng, 6)) {
    case 0: return Token::brick();
    case 1: return Token::joint_with(random_oscillator(rng));
    case 2: return Token::left();
    case 3: return Token::right();
    case 4: return Token::push();
    default: return Token::pop();
  }
}

inline Mutation sample_mutation(const Genotype& g, Rng& rng) {
  Mutation m;
  m.rule = kPredecessors[uniform_index(rng, 3)];
  m.op = static_cast<MutationOp>(uniform_index(rng, 3));
  const auto len = g.rule(m.rule).replacement.size();
  switch (m.op) {
    case MutationOp::Add:
      m.first = uniform_index(rng, len + 1);
      m.inserted = random_insert_token(rng);
      break;
    case MutationOp::Delete:
      m.first = uniform_index(rng, len);
      break;
    case MutationOp::Swap:
      m.first = uniform_index(rng, len);
      m.second = len < 2 ? m.first : (m.first + 1 + uniform_index(rng, len - 1)) % len;
      break;
  }
  return m;
}

/// Applies one edit to one rule, then repairs: unmatched brackets are dropped,
/// and an edit that would break the core-token rule or empty the replacement
/// is reverted. Deleting from a length-1 replacement does nothing.
inline Genotype apply_mutation(Genotype g, const Mutation& m) {
  auto& rule = g.rule(m.rule);
  const Word original = rule.replacement;
  Word w = original;
  switch (m.op) {
    case MutationOp::Add:
      if (m.inserted.symbol == Symbol::Core) return g;
      w.insert(w.begin() + static_cast<std::ptrdiff_t>(std::min(m.first, w.size())), m.inserted);
      break;
    case MutationOp::Delete:
      if (w.size() <= 1 || m.first >= w.size()) return g;
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(m.first));
      break;
    case MutationOp::Swap:
      if (m.first >= w.size() || m.second >= w.size()) return g;
      std::swap(w[m.first], w[m.second]);
      break;
  }
  rule.replacement = detail::remove_unmatched_brackets(w);
  if (!rule_violation(rule).empty()) rule.replacement = original;
  return g;
}

inline Genotype mutate(const Genotype& g, Rng& rng) { return apply_mutation(g, sample_mutation(g, rng)); }

// ---------------------------------------------------------------------------
// Crossover

/// take_second[i] selects the rule for kPredecessors[i] from p2 instead of p1.
inline Genotype crossover_with(const Genotype& p1, const Genotype& p2,
                               const std::array<bool, 3>& take_second) {
  Genotype child = p1;
  for (std::size_t i = 0; i < 3; ++i)
    if (take_second[i]) child.rules[i] = p2.rules[i];
  return child;
}

inline Genotype crossover(const Genotype& p1, const Genotype& p2, Rng& rng) {
  std::array<bool, 3> flips{};
  for (auto& f : flips) f = bernoulli(rng, 0.5);
  return crossover_with(p1, p2, flips);
}

// ---------------------------------------------------------------------------
// Text form: `C -> C [ l J(0.50,2.00,0.25) ] B`, one rule per line.

inline std::string to_string(const Token& t) {
  if (t.symbol != Symbol::Joint || !t.joint) return std::string(1, static_cast<char>(t.symbol));
  char buf[64];
  std::snprintf(buf, sizeof buf, "J(%.2f,%.2f,%.2f)", t.joint->amplitude, t.joint->period,
                t.joint->phase);
  return buf;
}

inline std::string to_string(const Word& w) {
  std::string out;
  for (const auto& t : w) {
    if (!out.empty()) out += ' ';
    out += to_string(t);
  }
  return out;
}

inline std::string to_string(const ProductionRule& r) {
  return std::string(1, static_cast<char>(r.predecessor)) + " -> " + to_string(r.replacement);
}

/// Rules joined by `separator`; "\n" for files, "; " for single-line fields.
inline std::string to_text(const Genotype& g, std::string_view separator = "\n") {
  std::string out;
  for (const auto& r : g.rules) {
    if (!out.empty()) out += separator;
    out += to_string(r);
  }
  return out;
}

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline double parse_number(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("bad joint parameter '" + std::string(s) + "'");
  return v;
}

inline Word parse_word(std::string_view s) {
  Word w;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    switch (c) {
      case 'C': w.push_back(Token::core()); break;
      case 'B': w.push_back(Token::brick()); break;
      case 'l': w.push_back(Token::left()); break;
      case 'r': w.push_back(Token::right()); break;
      case '[': w.push_back(Token::push()); break;
      case ']': w.push_back(Token::pop()); break;
      case 'J': {
        if (i + 1 >= s.size() || s[i + 1] != '(') throw ParseError("joint token without parameters");
        const auto close = s.find(')', i);
        if (close == std::string_view::npos) throw ParseError("unterminated joint parameters");
        const auto inner = s.substr(i + 2, close - i - 2);
        const auto c1 = inner.find(',');
        const auto c2 = inner.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos)
          throw ParseError("joint needs three parameters");
        OscillatorParams p;
        p.amplitude = parse_number(inner.substr(0, c1));
        p.period = parse_number(inner.substr(c1 + 1, c2 - c1 - 1));
        p.phase = parse_number(inner.substr(c2 + 1));
        w.push_back(Token::joint_with(p));
        i = close + 1;
        continue;
      }
      default: throw ParseError(std::string("unknown symbol '") + c + "'");
    }
    ++i;
  }
  return w;
}
}  // namespace detail

/// Accepts rules separated by newlines or semicolons, in any order.
inline Genotype parse_genotype(std::string_view text) {
  Genotype g;
  std::array<bool, 3> seen{};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find_first_of("\n;", pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);
    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) throw ParseError("missing '->' in rule");
    auto lhs = line.substr(0, arrow);
    while (!lhs.empty() && (lhs.back() == ' ' || lhs.back() == '\t')) lhs.remove_suffix(1);
    if (lhs.size() != 1) throw ParseError("rule predecessor must be one symbol");
    const auto pred = static_cast<Symbol>(lhs[0]);
    if (!is_module(pred)) throw ParseError("rule predecessor must be C, B or J");
    const auto idx = rule_index(pred);
    if (seen[idx]) throw ParseError("duplicate rule for " + std::string(lhs));
    seen[idx] = true;
    g.rules[idx] = {pred, detail::parse_word(line.substr(arrow + 2))};
  }
  for (bool s : seen)
    if (!s) throw ParseError("genotype needs rules for C, B and J");
  if (auto v = genotype_violation(g); !v.empty()) throw ParseError("invalid genotype: " + v);
  return g;
}

}  // namespace evobot
