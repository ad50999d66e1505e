//===- ir.cpp - Toy SSA IR: lexer, parser, validator, CFG, printer --------===//

#include "pva/ir.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

namespace pva::ir {

const std::string *Statement::defined_var() const {
  return std::visit(
      [](const auto &s) -> const std::string * {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Assign> || std::is_same_v<T, AddrOf> ||
                      std::is_same_v<T, Load> || std::is_same_v<T, BinOpStmt> ||
                      std::is_same_v<T, UnOpStmt> || std::is_same_v<T, Call> ||
                      std::is_same_v<T, Phi>)
          return &s.dst;
        else
          return nullptr;
      },
      node);
}

const Block *Function::block(std::string_view label) const {
  for (const Block &b : blocks)
    if (b.label == label)
      return &b;
  return nullptr;
}

int Function::block_index(std::string_view label) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].label == label)
      return static_cast<int>(i);
  return -1;
}

int Function::param_index(std::string_view name) const {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i] == name)
      return static_cast<int>(i);
  return -1;
}

const Function *Program::function(std::string_view name) const {
  for (const Function &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

bool Program::is_global(std::string_view name) const {
  for (const GlobalDecl &g : globals)
    if (g.name == name)
      return true;
  return false;
}

//===----------------------------------------------------------------------===//
// Lexer
//===----------------------------------------------------------------------===//

namespace {

struct Token {
  enum class Kind : std::uint8_t { Ident, Int, Punct, End };

  Kind kind = Kind::End;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

bool is_keyword(std::string_view s) {
  return s == "global" || s == "func" || s == "br" || s == "goto" ||
         s == "return" || s == "call" || s == "phi";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> toks;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto loc = [&] { return SourceLoc{line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n')
        advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      Token t;
      t.kind = Token::Kind::Ident;
      t.loc = loc();
      std::size_t start = i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                                src[i] == '_'))
        advance(1);
      t.text = std::string(src.substr(start, i - start));
      toks.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Token t;
      t.kind = Token::Kind::Int;
      t.loc = loc();
      std::size_t start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
        advance(1);
      std::string digits(src.substr(start, i - start));
      try {
        t.value = std::stoll(digits);
      } catch (const std::out_of_range &) {
        throw ParseError{t.loc, "integer literal out of range"};
      }
      t.text = std::move(digits);
      toks.push_back(std::move(t));
      continue;
    }
    // Two-character operators first.
    Token t;
    t.kind = Token::Kind::Punct;
    t.loc = loc();
    std::string_view two = src.substr(i, 2);
    if (two == "==" || two == "!=" || two == "<=") {
      t.text = std::string(two);
      advance(2);
      toks.push_back(std::move(t));
      continue;
    }
    static const std::string_view singles = "+-*/<!&=(){}:,";
    if (singles.find(c) != std::string_view::npos) {
      t.text = std::string(1, c);
      advance(1);
      toks.push_back(std::move(t));
      continue;
    }
    throw ParseError{loc(), std::string("unexpected character '") + c + "'"};
  }
  Token end;
  end.kind = Token::Kind::End;
  end.loc = loc();
  toks.push_back(std::move(end));
  return toks;
}

//===----------------------------------------------------------------------===//
// Parser
//===----------------------------------------------------------------------===//

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program parse() {
    Program p;
    if (at_end())
      throw ParseError{cur().loc, "expected 'global' or 'func'"};
    while (!at_end()) {
      if (is_ident("global")) {
        next();
        GlobalDecl g;
        g.loc = cur().loc;
        g.name = expect_name("global name");
        p.globals.push_back(std::move(g));
      } else if (is_ident("func")) {
        p.functions.push_back(parse_function());
      } else {
        throw ParseError{cur().loc, "expected 'global' or 'func'"};
      }
    }
    return p;
  }

private:
  const Token &cur() const { return toks_[pos_]; }
  const Token &peek(std::size_t n) const {
    std::size_t i = pos_ + n;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  void next() { ++pos_; }
  bool at_end() const { return cur().kind == Token::Kind::End; }

  bool is_punct(std::string_view s, std::size_t ahead = 0) const {
    const Token &t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == s;
  }
  bool is_ident(std::string_view s) const {
    return cur().kind == Token::Kind::Ident && cur().text == s;
  }

  void expect_punct(std::string_view s) {
    if (!is_punct(s))
      throw ParseError{cur().loc,
                       "expected '" + std::string(s) + "', found '" +
                           (at_end() ? "end of input" : cur().text) + "'"};
    next();
  }

  // An identifier usable as a name (variable, label, function, global).
  std::string expect_name(std::string_view what) {
    if (cur().kind != Token::Kind::Ident)
      throw ParseError{cur().loc, "expected " + std::string(what) +
                                      ", found '" +
                                      (at_end() ? "end of input" : cur().text) +
                                      "'"};
    if (is_keyword(cur().text))
      throw ParseError{cur().loc, "reserved word '" + cur().text +
                                      "' cannot be used as " +
                                      std::string(what)};
    std::string s = cur().text;
    next();
    return s;
  }

  Operand parse_operand() {
    if (cur().kind == Token::Kind::Int) {
      Operand o = Operand::literal(cur().value);
      next();
      return o;
    }
    if (cur().kind == Token::Kind::Ident && !is_keyword(cur().text)) {
      Operand o = Operand::variable(cur().text);
      next();
      return o;
    }
    throw ParseError{cur().loc, "expected operand, found '" +
                                    (at_end() ? "end of input" : cur().text) +
                                    "'"};
  }

  Function parse_function() {
    Function f;
    f.loc = cur().loc;
    next(); // 'func'
    f.name = expect_name("function name");
    expect_punct("(");
    if (!is_punct(")")) {
      f.params.push_back(expect_name("parameter name"));
      while (is_punct(",")) {
        next();
        f.params.push_back(expect_name("parameter name"));
      }
    }
    expect_punct(")");
    expect_punct("{");
    while (!is_punct("}")) {
      if (at_end())
        throw ParseError{cur().loc, "expected '}' before end of input"};
      if (!(cur().kind == Token::Kind::Ident && is_punct(":", 1)))
        throw ParseError{cur().loc, "expected block label"};
      Block b;
      b.loc = cur().loc;
      b.label = expect_name("block label");
      expect_punct(":");
      while (!is_punct("}") && !(cur().kind == Token::Kind::Ident &&
                                 !is_keyword(cur().text) && is_punct(":", 1)))
        b.stmts.push_back(parse_statement());
      f.blocks.push_back(std::move(b));
    }
    expect_punct("}");
    if (f.blocks.empty())
      throw ParseError{f.loc, "function '" + f.name + "' has no blocks"};
    return f;
  }

  Statement parse_statement() {
    Statement st;
    st.loc = cur().loc;
    if (is_punct("*")) {
      next();
      Store s;
      s.addr = expect_name("store address variable");
      expect_punct("=");
      s.src = parse_operand();
      st.node = std::move(s);
      return st;
    }
    if (is_ident("br")) {
      next();
      CondGoto s;
      s.cond = parse_operand();
      expect_punct(",");
      s.target = expect_name("branch target label");
      st.node = std::move(s);
      return st;
    }
    if (is_ident("goto")) {
      next();
      Goto s;
      s.target = expect_name("goto target label");
      st.node = std::move(s);
      return st;
    }
    if (is_ident("return")) {
      next();
      Return s;
      s.value = parse_operand();
      st.node = std::move(s);
      return st;
    }
    std::string dst = expect_name("variable");
    expect_punct("=");
    if (is_punct("&")) {
      next();
      AddrOf s;
      s.dst = std::move(dst);
      s.target = expect_name("address-of target");
      st.node = std::move(s);
      return st;
    }
    if (is_punct("*")) {
      next();
      Load s;
      s.dst = std::move(dst);
      s.addr = expect_name("load address variable");
      st.node = std::move(s);
      return st;
    }
    if (is_ident("call")) {
      next();
      Call s;
      s.dst = std::move(dst);
      s.callee = expect_name("callee name");
      expect_punct("(");
      if (!is_punct(")")) {
        s.args.push_back(parse_operand());
        while (is_punct(",")) {
          next();
          s.args.push_back(parse_operand());
        }
      }
      expect_punct(")");
      st.node = std::move(s);
      return st;
    }
    if (is_ident("phi")) {
      next();
      Phi s;
      s.dst = std::move(dst);
      expect_punct("(");
      for (;;) {
        Operand v = parse_operand();
        expect_punct(":");
        std::string label = expect_name("phi predecessor label");
        s.incoming.emplace_back(std::move(v), std::move(label));
        if (!is_punct(","))
          break;
        next();
      }
      expect_punct(")");
      st.node = std::move(s);
      return st;
    }
    if (is_punct("-") || is_punct("!")) {
      UnOpStmt s;
      s.dst = std::move(dst);
      s.op = *unop_from_ir_symbol(cur().text);
      next();
      s.src = parse_operand();
      st.node = std::move(s);
      return st;
    }
    Operand lhs = parse_operand();
    // "x = a * b" vs "x = a" followed by "*p = c": a '*' continues the
    // binop only when it is not the start of a store statement.
    bool store_ahead = is_punct("*") && peek(1).kind == Token::Kind::Ident &&
                       !is_keyword(peek(1).text) && is_punct("=", 2);
    if (!store_ahead && cur().kind == Token::Kind::Punct) {
      if (auto op = binop_from_symbol(cur().text)) {
        next();
        BinOpStmt s;
        s.dst = std::move(dst);
        s.lhs = std::move(lhs);
        s.op = *op;
        s.rhs = parse_operand();
        st.node = std::move(s);
        return st;
      }
    }
    Assign s;
    s.dst = std::move(dst);
    s.src = std::move(lhs);
    st.node = std::move(s);
    return st;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace

Program parse_program(std::string_view source) {
  return Parser(source).parse();
}

//===----------------------------------------------------------------------===//
// Validation
//===----------------------------------------------------------------------===//

namespace {

[[noreturn]] void verr(const std::string &fn, const std::string &block,
                       SourceLoc loc, std::string kind, std::string msg) {
  throw ValidationError{fn, block, loc, std::move(kind), std::move(msg)};
}

// Successor labels of each block assuming terminators are in place.
std::map<std::string, std::vector<std::string>>
derive_succs(const Function &f) {
  std::map<std::string, std::vector<std::string>> succs;
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    const Block &b = f.blocks[i];
    std::vector<std::string> out;
    const Statement &t = b.terminator();
    if (const auto *g = t.get_if<Goto>()) {
      out.push_back(g->target);
    } else if (const auto *c = t.get_if<CondGoto>()) {
      out.push_back(c->target);
      out.push_back(f.blocks[i + 1].label); // fall-through
    }
    succs[b.label] = std::move(out);
  }
  return succs;
}

void check_operand_defined(const Function &f, const Program &p,
                           const std::set<std::string> &defs,
                           const Operand &o, const std::string &block,
                           SourceLoc loc) {
  if (!o.is_var())
    return;
  if (f.param_index(o.var) >= 0 || p.is_global(o.var) || defs.count(o.var))
    return;
  verr(f.name, block, loc, "undefined-operand",
       "variable '" + o.var + "' is not a parameter, global, or defined local");
}

void validate_function(const Function &f, const Program &p,
                       const std::set<std::string> &fn_names) {
  // Parameters.
  std::set<std::string> params;
  for (const std::string &prm : f.params) {
    if (!params.insert(prm).second)
      verr(f.name, "", f.loc, "duplicate-param",
           "duplicate parameter '" + prm + "'");
    if (p.is_global(prm))
      verr(f.name, "", f.loc, "shadows-global",
           "parameter '" + prm + "' shadows a global");
    if (fn_names.count(prm))
      verr(f.name, "", f.loc, "shadows-function",
           "parameter '" + prm + "' shadows a function");
  }

  // Block labels and terminator placement.
  std::set<std::string> labels;
  for (const Block &b : f.blocks) {
    if (!labels.insert(b.label).second)
      verr(f.name, b.label, b.loc, "duplicate-label",
           "duplicate block label '" + b.label + "'");
    if (b.stmts.empty())
      verr(f.name, b.label, b.loc, "missing-terminator",
           "block '" + b.label + "' is empty");
    for (std::size_t i = 0; i + 1 < b.stmts.size(); ++i)
      if (b.stmts[i].is_terminator())
        verr(f.name, b.label, b.stmts[i].loc, "terminator-mid-block",
             "terminator before the end of block '" + b.label + "'");
    if (!b.terminator().is_terminator())
      verr(f.name, b.label, b.stmts.back().loc, "missing-terminator",
           "block '" + b.label + "' does not end in br, goto, or return");
    bool past_phis = false;
    for (const Statement &s : b.stmts) {
      if (s.get_if<Phi>()) {
        if (past_phis)
          verr(f.name, b.label, s.loc, "phi-not-grouped",
               "phi after a non-phi statement in block '" + b.label + "'");
      } else {
        past_phis = true;
      }
    }
  }

  // The function's last block is its exit and must return.
  if (!f.blocks.back().terminator().get_if<Return>())
    verr(f.name, f.blocks.back().label, f.blocks.back().terminator().loc,
         "missing-return", "last block of '" + f.name + "' must return");

  // Referenced labels exist; branches are not degenerate.
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    const Block &b = f.blocks[i];
    for (const Statement &s : b.stmts) {
      if (const auto *g = s.get_if<Goto>()) {
        if (!labels.count(g->target))
          verr(f.name, b.label, s.loc, "undefined-label",
               "goto target '" + g->target + "' does not exist");
      } else if (const auto *c = s.get_if<CondGoto>()) {
        if (!labels.count(c->target))
          verr(f.name, b.label, s.loc, "undefined-label",
               "branch target '" + c->target + "' does not exist");
        if (i + 1 < f.blocks.size() && c->target == f.blocks[i + 1].label)
          verr(f.name, b.label, s.loc, "degenerate-branch",
               "branch target equals the fall-through block '" + c->target +
                   "'");
      } else if (const auto *ph = s.get_if<Phi>()) {
        for (const auto &[op, label] : ph->incoming)
          if (!labels.count(label))
            verr(f.name, b.label, s.loc, "undefined-label",
                 "phi predecessor '" + label + "' does not exist");
      }
    }
  }

  // SSA: single static assignment, no shadowing, no parameter writes.
  std::set<std::string> defs;
  for (const Block &b : f.blocks) {
    for (const Statement &s : b.stmts) {
      const std::string *dv = s.defined_var();
      if (!dv)
        continue;
      if (params.count(*dv))
        verr(f.name, b.label, s.loc, "assign-to-param",
             "parameter '" + *dv + "' cannot be reassigned");
      if (p.is_global(*dv))
        verr(f.name, b.label, s.loc, "shadows-global",
             "local '" + *dv + "' shadows a global");
      if (fn_names.count(*dv))
        verr(f.name, b.label, s.loc, "shadows-function",
             "local '" + *dv + "' shadows a function");
      if (!defs.insert(*dv).second)
        verr(f.name, b.label, s.loc, "ssa-redefinition",
             "variable '" + *dv + "' assigned more than once");
    }
  }

  // Operand uses, address-of targets, callees.
  for (const Block &b : f.blocks) {
    for (const Statement &s : b.stmts) {
      std::visit(
          [&](const auto &n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Assign>) {
              check_operand_defined(f, p, defs, n.src, b.label, s.loc);
            } else if constexpr (std::is_same_v<T, AddrOf>) {
              if (fn_names.count(n.target))
                verr(f.name, b.label, s.loc, "addr-of-function",
                     "cannot take the address of function '" + n.target + "'");
            } else if constexpr (std::is_same_v<T, Load>) {
              check_operand_defined(f, p, defs, Operand::variable(n.addr),
                                    b.label, s.loc);
            } else if constexpr (std::is_same_v<T, Store>) {
              check_operand_defined(f, p, defs, Operand::variable(n.addr),
                                    b.label, s.loc);
              check_operand_defined(f, p, defs, n.src, b.label, s.loc);
            } else if constexpr (std::is_same_v<T, BinOpStmt>) {
              check_operand_defined(f, p, defs, n.lhs, b.label, s.loc);
              check_operand_defined(f, p, defs, n.rhs, b.label, s.loc);
            } else if constexpr (std::is_same_v<T, UnOpStmt>) {
              check_operand_defined(f, p, defs, n.src, b.label, s.loc);
            } else if constexpr (std::is_same_v<T, CondGoto>) {
              check_operand_defined(f, p, defs, n.cond, b.label, s.loc);
            } else if constexpr (std::is_same_v<T, Call>) {
              if (p.is_global(n.callee))
                verr(f.name, b.label, s.loc, "call-of-global",
                     "cannot call global '" + n.callee + "'");
              if (const Function *callee = p.function(n.callee);
                  callee && callee->params.size() != n.args.size())
                verr(f.name, b.label, s.loc, "call-arity",
                     "call to '" + n.callee + "' passes " +
                         std::to_string(n.args.size()) + " argument(s), " +
                         "declared with " +
                         std::to_string(callee->params.size()));
              for (const Operand &a : n.args)
                check_operand_defined(f, p, defs, a, b.label, s.loc);
            } else if constexpr (std::is_same_v<T, Return>) {
              check_operand_defined(f, p, defs, n.value, b.label, s.loc);
            } else if constexpr (std::is_same_v<T, Phi>) {
              for (const auto &[op, label] : n.incoming)
                check_operand_defined(f, p, defs, op, b.label, s.loc);
            }
          },
          s.node);
    }
  }

  // CFG-level checks: reachability and phi predecessor sets.
  auto succs = derive_succs(f);
  std::set<std::string> reachable;
  std::deque<std::string> work{f.entry_label()};
  reachable.insert(f.entry_label());
  while (!work.empty()) {
    std::string cur = std::move(work.front());
    work.pop_front();
    for (const std::string &s : succs[cur])
      if (reachable.insert(s).second)
        work.push_back(s);
  }
  for (const Block &b : f.blocks)
    if (!reachable.count(b.label))
      verr(f.name, b.label, b.loc, "unreachable-block",
           "block '" + b.label + "' is unreachable from entry");

  std::map<std::string, std::set<std::string>> preds;
  for (const auto &[from, outs] : succs)
    for (const std::string &to : outs)
      preds[to].insert(from);
  for (const Block &b : f.blocks) {
    for (const Statement &s : b.stmts) {
      const auto *ph = s.get_if<Phi>();
      if (!ph)
        continue;
      std::set<std::string> in_labels;
      for (const auto &[op, label] : ph->incoming)
        if (!in_labels.insert(label).second)
          verr(f.name, b.label, s.loc, "phi-duplicate-pred",
               "phi lists predecessor '" + label + "' twice");
      if (in_labels != preds[b.label]) {
        std::string want;
        for (const std::string &x : preds[b.label])
          want += (want.empty() ? "" : ", ") + x;
        verr(f.name, b.label, s.loc, "phi-pred-mismatch",
             "phi inputs must cover exactly the predecessors {" + want + "}");
      }
    }
  }
}

} // namespace

void validate(const Program &p) {
  if (p.functions.empty() && p.globals.empty())
    verr("", "", SourceLoc{}, "empty-program", "program has no declarations");

  std::set<std::string> globals;
  for (const GlobalDecl &g : p.globals)
    if (!globals.insert(g.name).second)
      verr("", "", g.loc, "duplicate-global",
           "duplicate global '" + g.name + "'");

  std::set<std::string> fn_names;
  for (const Function &f : p.functions) {
    if (!fn_names.insert(f.name).second)
      verr(f.name, "", f.loc, "duplicate-function",
           "duplicate function '" + f.name + "'");
    if (globals.count(f.name))
      verr(f.name, "", f.loc, "global-function-clash",
           "'" + f.name + "' is declared both as global and function");
  }

  for (const Function &f : p.functions)
    validate_function(f, p, fn_names);
}

//===----------------------------------------------------------------------===//
// CFG
//===----------------------------------------------------------------------===//

std::size_t Cfg::edge_count() const {
  std::size_t n = 0;
  for (const auto &[from, outs] : succs)
    n += outs.size();
  return n;
}

Cfg build_cfg(const Function &f) {
  Cfg cfg;
  cfg.entry = f.entry_label();
  for (const Block &b : f.blocks)
    cfg.nodes.push_back(b.label);
  cfg.succs = derive_succs(f);
  for (const std::string &node : cfg.nodes)
    cfg.preds[node]; // ensure every node has an entry
  for (const std::string &from : cfg.nodes)
    for (const std::string &to : cfg.succs[from])
      cfg.preds[to].push_back(from);
  for (const Block &b : f.blocks)
    if (b.terminator().get_if<Return>())
      cfg.exits.push_back(b.label);
  return cfg;
}

//===----------------------------------------------------------------------===//
// Printing
//===----------------------------------------------------------------------===//

static std::string to_string(const Operand &o) {
  return o.is_var() ? o.var : std::to_string(o.value);
}

std::string to_string(const Statement &st) {
  return std::visit(
      [](const auto &s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Assign>) {
          return s.dst + " = " + to_string(s.src);
        } else if constexpr (std::is_same_v<T, AddrOf>) {
          return s.dst + " = &" + s.target;
        } else if constexpr (std::is_same_v<T, Load>) {
          return s.dst + " = *" + s.addr;
        } else if constexpr (std::is_same_v<T, Store>) {
          return "*" + s.addr + " = " + to_string(s.src);
        } else if constexpr (std::is_same_v<T, BinOpStmt>) {
          return s.dst + " = " + to_string(s.lhs) + " " +
                 std::string(symbol(s.op)) + " " + to_string(s.rhs);
        } else if constexpr (std::is_same_v<T, UnOpStmt>) {
          return s.dst + " = " + std::string(ir_symbol(s.op)) +
                 to_string(s.src);
        } else if constexpr (std::is_same_v<T, CondGoto>) {
          return "br " + to_string(s.cond) + ", " + s.target;
        } else if constexpr (std::is_same_v<T, Goto>) {
          return "goto " + s.target;
        } else if constexpr (std::is_same_v<T, Call>) {
          std::string out = s.dst + " = call " + s.callee + "(";
          for (std::size_t i = 0; i < s.args.size(); ++i) {
            if (i)
              out += ", ";
            out += to_string(s.args[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Return>) {
          return "return " + to_string(s.value);
        } else { // Phi
          std::string out = s.dst + " = phi(";
          for (std::size_t i = 0; i < s.incoming.size(); ++i) {
            if (i)
              out += ", ";
            out += to_string(s.incoming[i].first) + ":" + s.incoming[i].second;
          }
          return out + ")";
        }
      },
      st.node);
}

std::string pretty_print(const Program &p) {
  std::string out;
  for (const GlobalDecl &g : p.globals)
    out += "global " + g.name + "\n";
  for (std::size_t fi = 0; fi < p.functions.size(); ++fi) {
    const Function &f = p.functions[fi];
    if (!out.empty())
      out += "\n";
    out += "func " + f.name + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i)
        out += ", ";
      out += f.params[i];
    }
    out += ") {\n";
    for (const Block &b : f.blocks) {
      out += b.label + ":\n";
      for (const Statement &s : b.stmts)
        out += "  " + to_string(s) + "\n";
    }
    out += "}\n";
  }
  return out;
}

bool structurally_equal(const Program &a, const Program &b) {
  // The printer covers the full structure and ignores source locations.
  return pretty_print(a) == pretty_print(b);
}

} // namespace pva::ir
