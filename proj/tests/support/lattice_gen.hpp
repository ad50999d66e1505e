//===- lattice_gen.hpp - Element enumeration and random generators --------===//
//
// The acceptance alphabet is {const 0, const 1, arg 0; +; not; f/1; phi/2}.
// enumerate_depth_le builds every element of depth <= k over it exactly once;
// sizes follow the recurrence |U0| = 5, |U(k+1)| = 5 + 2|Uk|^2 + 2|Uk|,
// giving |U1| = 65 and |U2| = 8585.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <random>
#include <vector>

#include "pva/lattice.hpp"

namespace pva::testgen {

inline const std::vector<LatticeElem> &leaves() {
  static const std::vector<LatticeElem> ls = {
      LatticeElem::top(),         LatticeElem::bottom(),
      LatticeElem::constant(0),   LatticeElem::constant(1),
      LatticeElem::argument(0),
  };
  return ls;
}

inline std::vector<LatticeElem> enumerate_depth_le(int k) {
  std::vector<LatticeElem> u = leaves();
  for (int layer = 0; layer < k; ++layer) {
    std::vector<LatticeElem> next = leaves();
    next.reserve(5 + 2 * u.size() * u.size() + 2 * u.size());
    for (const LatticeElem &a : u) {
      next.push_back(LatticeElem::unop(UnOpKind::Not, a));
      next.push_back(LatticeElem::fn_call("f", {a}));
      for (const LatticeElem &b : u) {
        next.push_back(LatticeElem::binop(BinOpKind::Add, a, b));
        next.push_back(LatticeElem::phi({a, b}));
      }
    }
    u = std::move(next);
  }
  return u;
}

// Random element over the acceptance alphabet, depth <= max_depth.
inline LatticeElem random_elem(std::mt19937_64 &rng, int max_depth) {
  std::uniform_int_distribution<int> leaf_pick(0, 4);
  if (max_depth == 0 || std::uniform_int_distribution<int>(0, 4)(rng) == 0)
    return leaves()[static_cast<std::size_t>(leaf_pick(rng))];
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
  case 0:
    return LatticeElem::binop(BinOpKind::Add, random_elem(rng, max_depth - 1),
                              random_elem(rng, max_depth - 1));
  case 1:
    return LatticeElem::unop(UnOpKind::Not, random_elem(rng, max_depth - 1));
  case 2:
    return LatticeElem::fn_call("f", {random_elem(rng, max_depth - 1)});
  default:
    return LatticeElem::phi({random_elem(rng, max_depth - 1),
                             random_elem(rng, max_depth - 1)});
  }
}

// Random element over a richer alphabet (every binop and unop, more
// primitives, call arities 0..2, phi arities 1..3) for stress tests.
inline LatticeElem random_rich_elem(std::mt19937_64 &rng, int max_depth) {
  auto child = [&] { return random_rich_elem(rng, max_depth - 1); };
  if (max_depth == 0 || std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
    switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
    case 0: return LatticeElem::top();
    case 1: return LatticeElem::bottom();
    case 2: return LatticeElem::constant(
        std::uniform_int_distribution<std::int64_t>(-2, 7)(rng));
    case 3: return LatticeElem::argument(
        std::uniform_int_distribution<int>(0, 1)(rng));
    case 4: return LatticeElem::mem_init(MemObject{"main::x", 0});
    case 5: return LatticeElem::global_init(MemObject{"g", 0});
    case 6: return LatticeElem::constant(0);
    default: return LatticeElem::argument(0);
    }
  }
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
  case 0: {
    auto op = static_cast<BinOpKind>(
        std::uniform_int_distribution<int>(0, 7)(rng));
    return LatticeElem::binop(op, child(), child());
  }
  case 1: {
    auto op = std::uniform_int_distribution<int>(0, 1)(rng) == 0
                  ? UnOpKind::Neg
                  : UnOpKind::Not;
    return LatticeElem::unop(op, child());
  }
  case 2: {
    const char *name =
        std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? "f" : "g2";
    int arity = std::uniform_int_distribution<int>(0, 2)(rng);
    std::vector<LatticeElem> args;
    for (int i = 0; i < arity; ++i)
      args.push_back(child());
    return LatticeElem::fn_call(name, std::move(args));
  }
  default: {
    int arity = std::uniform_int_distribution<int>(1, 3)(rng);
    std::vector<LatticeElem> args;
    for (int i = 0; i < arity; ++i)
      args.push_back(child());
    return LatticeElem::phi(std::move(args));
  }
  }
}

} // namespace pva::testgen
