#pragma once

#include <array>
#include <cstddef>

#include "pepsblend/errors.hpp"

namespace pepsblend {

// Legs of a site tensor in normative order. A vertex owns the subset of legs
// that exist on the open-boundary grid; absent legs are simply skipped, so a
// corner tensor has two legs, an edge tensor three, an interior tensor four.
enum class Leg : int { Up = 0, Right = 1, Down = 2, Left = 3 };

// Open-boundary rectangular lattice. Vertices are indexed row-major,
// v = y * width + x, with y = 0 the top row.
struct LatticeSpec {
  std::size_t width = 1;
  std::size_t height = 1;

  std::size_t vertices() const { return width * height; }
  std::size_t vertex(std::size_t x, std::size_t y) const { return y * width + x; }

  bool has_leg(std::size_t x, std::size_t y, Leg leg) const {
    switch (leg) {
      case Leg::Up: return y > 0;
      case Leg::Right: return x + 1 < width;
      case Leg::Down: return y + 1 < height;
      case Leg::Left: return x > 0;
    }
    return false;
  }

  int degree(std::size_t x, std::size_t y) const {
    int deg = 0;
    for (Leg l : {Leg::Up, Leg::Right, Leg::Down, Leg::Left}) {
      if (has_leg(x, y, l)) ++deg;
    }
    return deg;
  }

  void validate() const {
    if (width < 1 || height < 1) throw ConfigInvalid("lattice dimensions must be positive");
  }
};

inline constexpr std::array<Leg, 4> kLegOrder = {Leg::Up, Leg::Right, Leg::Down, Leg::Left};

}  // namespace pepsblend
