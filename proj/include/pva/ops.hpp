//===- ops.hpp - Operator kinds shared by the IR and the lattice ---------===//

#pragma once

#include <optional>
#include <string_view>

namespace pva {

enum class BinOpKind { Add, Sub, Mul, Div, Eq, Ne, Lt, Le };
enum class UnOpKind { Neg, Not };

// "+", "-", "*", "/", "==", "!=", "<", "<=". Shared by IR text and element
// rendering.
constexpr std::string_view symbol(BinOpKind op) {
  switch (op) {
  case BinOpKind::Add: return "+";
  case BinOpKind::Sub: return "-";
  case BinOpKind::Mul: return "*";
  case BinOpKind::Div: return "/";
  case BinOpKind::Eq: return "==";
  case BinOpKind::Ne: return "!=";
  case BinOpKind::Lt: return "<";
  case BinOpKind::Le: return "<=";
  }
  return "?";
}

// IR spelling: "-" or "!".
constexpr std::string_view ir_symbol(UnOpKind op) {
  return op == UnOpKind::Neg ? "-" : "!";
}

// Element spelling: "neg" or "not".
constexpr std::string_view name(UnOpKind op) {
  return op == UnOpKind::Neg ? "neg" : "not";
}

constexpr std::optional<BinOpKind> binop_from_symbol(std::string_view s) {
  if (s == "+") return BinOpKind::Add;
  if (s == "-") return BinOpKind::Sub;
  if (s == "*") return BinOpKind::Mul;
  if (s == "/") return BinOpKind::Div;
  if (s == "==") return BinOpKind::Eq;
  if (s == "!=") return BinOpKind::Ne;
  if (s == "<") return BinOpKind::Lt;
  if (s == "<=") return BinOpKind::Le;
  return std::nullopt;
}

constexpr std::optional<UnOpKind> unop_from_ir_symbol(std::string_view s) {
  if (s == "-") return UnOpKind::Neg;
  if (s == "!") return UnOpKind::Not;
  return std::nullopt;
}

constexpr std::optional<UnOpKind> unop_from_name(std::string_view s) {
  if (s == "neg") return UnOpKind::Neg;
  if (s == "not") return UnOpKind::Not;
  return std::nullopt;
}

} // namespace pva
