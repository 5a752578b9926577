#pragma once

// Flat modular bodies: turtle interpretation of a rewritten word onto a 2D grid.

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evobot/controller.hpp"
#include "evobot/lsystem.hpp"

namespace evobot {

enum class ModuleKind { Core, Brick, Joint };

inline const char* to_string(ModuleKind k) {
  switch (k) {
    case ModuleKind::Core: return "core";
    case ModuleKind::Brick: return "brick";
    case ModuleKind::Joint: return "joint";
  }
  return "?";
}

struct GridVec {
  int x = 0;
  int y = 0;

  constexpr GridVec rotated_ccw() const noexcept { return {-y, x}; }
  constexpr GridVec rotated_cw() const noexcept { return {y, -x}; }

  friend constexpr GridVec operator+(GridVec a, GridVec b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr GridVec operator-(GridVec a, GridVec b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr bool operator==(GridVec, GridVec) = default;
  friend constexpr auto operator<=>(GridVec, GridVec) = default;
};

struct BodyModule {
  std::size_t id = 0;
  ModuleKind kind = ModuleKind::Brick;
  GridVec grid_pos;
  std::optional<std::size_t> parent;  // empty iff core
  GridVec attach_dir;                 // parent -> this; zero for the core
  std::optional<OscillatorParams> joint;
  std::vector<std::size_t> children;
};

struct BodyLimits {
  std::size_t max_joints = 10;
  std::size_t max_bricks = 20;
};

/// Tree rooted at modules[0] (the core). Module ids equal their index.
struct BodyGraph {
  std::vector<BodyModule> modules;
  std::size_t n_joints = 0;
  std::size_t n_bricks = 0;

  const BodyModule& core() const { return modules.front(); }
  std::size_t size() const noexcept { return modules.size(); }
};

struct MorphDescriptors {
  std::size_t size = 0;
  std::size_t n_joints = 0;
  std::size_t n_bricks = 0;
  std::size_t branching = 0;
  double proportion = 1.0;
};

class DecodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Places modules by turtle interpretation. The core sits at (0,0) heading +x.
/// `l`/`r` turn the heading, brackets save and restore (cursor, heading), and
/// B/J attach a module to the cursor in the heading direction. Tokens whose
/// target cell is taken, or whose kind is at its limit, are skipped. Tokens
/// before the first core and any later cores are ignored.
inline BodyGraph decode(const Word& tokens, const BodyLimits& limits = {}) {
  const auto first_core = std::find_if(tokens.begin(), tokens.end(),
                                       [](const Token& t) { return t.symbol == Symbol::Core; });
  if (first_core == tokens.end()) throw DecodeError("token sequence has no core");

  BodyGraph body;
  std::map<GridVec, std::size_t> occupied;
  body.modules.push_back({0, ModuleKind::Core, {0, 0}, std::nullopt, {0, 0}, std::nullopt, {}});
  occupied.emplace(GridVec{0, 0}, 0);

  struct Turtle {
    std::size_t cursor;
    GridVec heading;
  };
  Turtle turtle{0, {1, 0}};
  std::vector<Turtle> stack;

  for (auto it = std::next(first_core); it != tokens.end(); ++it) {
    switch (it->symbol) {
      case Symbol::TurnLeft: turtle.heading = turtle.heading.rotated_ccw(); break;
      case Symbol::TurnRight: turtle.heading = turtle.heading.rotated_cw(); break;
      case Symbol::Push: stack.push_back(turtle); break;
      case Symbol::Pop:
        if (!stack.empty()) {
          turtle = stack.back();
          stack.pop_back();
        }
        break;
      case Symbol::Core: break;
      case Symbol::Brick:
      case Symbol::Joint: {
        const bool is_joint = it->symbol == Symbol::Joint;
        if (is_joint ? body.n_joints >= limits.max_joints : body.n_bricks >= limits.max_bricks)
          break;
        const GridVec target = body.modules[turtle.cursor].grid_pos + turtle.heading;
        if (occupied.contains(target)) break;
        const std::size_t id = body.modules.size();
        BodyModule m{id,
                     is_joint ? ModuleKind::Joint : ModuleKind::Brick,
                     target,
                     turtle.cursor,
                     turtle.heading,
                     is_joint ? it->joint : std::nullopt,
                     {}};
        if (is_joint && !m.joint) m.joint = OscillatorParams{};
        body.modules[turtle.cursor].children.push_back(id);
        body.modules.push_back(std::move(m));
        occupied.emplace(target, id);
        ++(is_joint ? body.n_joints : body.n_bricks);
        turtle.cursor = id;
        break;
      }
    }
  }
  return body;
}

inline BodyGraph decode(const Genotype& g, const RewriteConfig& rw, const BodyLimits& limits) {
  return decode(rewrite(g, rw), limits);
}

inline MorphDescriptors descriptors(const BodyGraph& b) {
  MorphDescriptors d;
  d.size = b.size();
  d.n_joints = b.n_joints;
  d.n_bricks = b.n_bricks;
  int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (const auto& m : b.modules) {
    if (m.children.size() >= 2) ++d.branching;
    min_x = std::min(min_x, m.grid_pos.x);
    max_x = std::max(max_x, m.grid_pos.x);
    min_y = std::min(min_y, m.grid_pos.y);
    max_y = std::max(max_y, m.grid_pos.y);
  }
  const int w = max_x - min_x + 1;
  const int h = max_y - min_y + 1;
  d.proportion = static_cast<double>(std::min(w, h)) / std::max(w, h);
  return d;
}

/// Debug dump, one module per line: `id kind (x,y) parent`.
inline void dump(std::ostream& os, const BodyGraph& b) {
  for (const auto& m : b.modules) {
    os << m.id << ' ' << to_string(m.kind) << " (" << m.grid_pos.x << ',' << m.grid_pos.y << ") ";
    if (m.parent) os << *m.parent;
    else os << '-';
    os << '\n';
  }
}

}  // namespace evobot
