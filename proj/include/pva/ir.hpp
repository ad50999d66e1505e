//===- ir.hpp - Toy SSA IR: programs, parsing, validation, CFG ------------===//
//
// Text format, one construct per production:
//
//   program  := (global | func)+
//   global   := "global" IDENT
//   func     := "func" IDENT "(" [IDENT ("," IDENT)*] ")" "{" block+ "}"
//   block    := IDENT ":" stmt*
//   stmt     := IDENT "=" operand
//             | IDENT "=" "&" IDENT
//             | IDENT "=" "*" IDENT
//             | "*" IDENT "=" operand
//             | IDENT "=" operand BINOP operand
//             | IDENT "=" UNOP operand
//             | "br" operand "," IDENT
//             | "goto" IDENT
//             | IDENT "=" "call" IDENT "(" [operand ("," operand)*] ")"
//             | "return" operand
//             | IDENT "=" "phi" "(" operand ":" IDENT ("," operand ":" IDENT)* ")"
//   operand  := IDENT | INT
//   BINOP    := "+" | "-" | "*" | "/" | "==" | "!=" | "<" | "<="
//   UNOP     := "-" | "!"
//
// "#" starts a comment until end of line. Whitespace is insignificant;
// statements are self-delimiting. "br" falls through to the lexically next
// block when the condition is zero.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pva/ops.hpp"

namespace pva::ir {

struct SourceLoc {
  int line = 0;
  int col = 0;
};

struct Operand {
  enum class Kind : std::uint8_t { Var, Int };

  Kind kind = Kind::Var;
  std::string var;
  std::int64_t value = 0;

  static Operand variable(std::string name) {
    Operand o;
    o.kind = Kind::Var;
    o.var = std::move(name);
    return o;
  }
  static Operand literal(std::int64_t v) {
    Operand o;
    o.kind = Kind::Int;
    o.value = v;
    return o;
  }

  bool is_var() const { return kind == Kind::Var; }
  bool is_int() const { return kind == Kind::Int; }

  friend bool operator==(const Operand &, const Operand &) = default;
};

struct Assign {
  std::string dst;
  Operand src;
};

struct AddrOf {
  std::string dst;
  std::string target;
};

struct Load {
  std::string dst;
  std::string addr;
};

struct Store {
  std::string addr;
  Operand src;
};

struct BinOpStmt {
  std::string dst;
  Operand lhs;
  BinOpKind op = BinOpKind::Add;
  Operand rhs;
};

struct UnOpStmt {
  std::string dst;
  UnOpKind op = UnOpKind::Neg;
  Operand src;
};

struct CondGoto {
  Operand cond;
  std::string target;
};

struct Goto {
  std::string target;
};

struct Call {
  std::string dst;
  std::string callee;
  std::vector<Operand> args;
};

struct Return {
  Operand value;
};

struct Phi {
  std::string dst;
  // (value, predecessor label) pairs; labels must match the block's CFG
  // predecessors exactly.
  std::vector<std::pair<Operand, std::string>> incoming;
};

struct Statement {
  std::variant<Assign, AddrOf, Load, Store, BinOpStmt, UnOpStmt, CondGoto,
               Goto, Call, Return, Phi>
      node;
  SourceLoc loc;

  template <class T> const T *get_if() const { return std::get_if<T>(&node); }

  bool is_terminator() const {
    return std::holds_alternative<CondGoto>(node) ||
           std::holds_alternative<Goto>(node) ||
           std::holds_alternative<Return>(node);
  }

  // Name defined by this statement, or nullptr for store/branch/goto/return.
  const std::string *defined_var() const;
};

std::string to_string(const Statement &s);

struct Block {
  std::string label;
  std::vector<Statement> stmts; // terminator last (enforced by validate)
  SourceLoc loc;

  const Statement &terminator() const { return stmts.back(); }
};

struct GlobalDecl {
  std::string name;
  SourceLoc loc;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<Block> blocks;
  SourceLoc loc;

  const std::string &entry_label() const { return blocks.front().label; }
  const Block *block(std::string_view label) const;
  int block_index(std::string_view label) const; // -1 when absent
  int param_index(std::string_view name) const;  // -1 when absent
};

struct Program {
  std::vector<GlobalDecl> globals;
  std::vector<Function> functions;

  const Function *function(std::string_view name) const;
  bool is_global(std::string_view name) const;
};

struct ParseError {
  SourceLoc loc;
  std::string message;
};

struct ValidationError {
  std::string function;
  std::string block;
  SourceLoc loc;
  std::string kind;
  std::string message;
};

// Parses a whole program; trailing unparsed input is an error.
// Throws ParseError.
Program parse_program(std::string_view source);

// Structural well-formedness: unique names, SSA single assignment, blocks end
// in exactly one terminator, the last block returns, labels resolve, phi
// inputs match CFG predecessors, no unreachable blocks, operands defined.
// Throws ValidationError on the first violation.
void validate(const Program &p);

struct Cfg {
  std::string entry;
  std::vector<std::string> nodes; // block order
  std::map<std::string, std::vector<std::string>> succs;
  std::map<std::string, std::vector<std::string>> preds;
  std::vector<std::string> exits; // blocks ending in return

  std::size_t edge_count() const;
};

// Derives the CFG of a validated function. Successor order: branch target
// first, fall-through second.
Cfg build_cfg(const Function &f);

// Canonical text: globals first, then functions, two-space statement indent.
// parse(pretty_print(parse(s))) is structurally equal to parse(s).
std::string pretty_print(const Program &p);

// Structural equality that ignores source locations.
bool structurally_equal(const Program &a, const Program &b);

} // namespace pva::ir
