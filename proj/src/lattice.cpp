//===- lattice.cpp - Recursive symbolic value lattice ---------------------===//

#include "pva/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <stdexcept>

namespace pva {

bool is_global_cell(const MemObject &o) {
  return o.base.find("::") == std::string::npos;
}

std::string to_string(const MemObject &o) {
  return o.base + "+" + std::to_string(o.offset);
}

Primitive prim_const(std::int64_t v) {
  Primitive p;
  p.kind = Primitive::Kind::Const;
  p.value = v;
  return p;
}

Primitive prim_arg(int index) {
  Primitive p;
  p.kind = Primitive::Kind::Arg;
  p.index = index;
  return p;
}

Primitive prim_mem(MemObject o) {
  Primitive p;
  p.kind = Primitive::Kind::Mem;
  p.object = std::move(o);
  return p;
}

Primitive prim_global(MemObject o) {
  Primitive p;
  p.kind = Primitive::Kind::Global;
  p.object = std::move(o);
  return p;
}

struct LatticeElem::Node {
  Kind kind = Kind::Prim;
  BinOpKind bin = BinOpKind::Add;
  UnOpKind un = UnOpKind::Neg;
  Primitive prim;
  std::string name;
  std::vector<LatticeElem> kids;
  int depth = 0;
};

LatticeElem LatticeElem::top() { return LatticeElem(Kind::Top, nullptr); }

LatticeElem LatticeElem::bottom() { return LatticeElem(Kind::Bot, nullptr); }

LatticeElem LatticeElem::primitive(Primitive p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prim;
  n->prim = std::move(p);
  n->depth = 0;
  return LatticeElem(Kind::Prim, std::move(n));
}

LatticeElem LatticeElem::constant(std::int64_t v) {
  return primitive(prim_const(v));
}

LatticeElem LatticeElem::argument(int index) {
  return primitive(prim_arg(index));
}

LatticeElem LatticeElem::mem_init(MemObject o) {
  return primitive(prim_mem(std::move(o)));
}

LatticeElem LatticeElem::global_init(MemObject o) {
  return primitive(prim_global(std::move(o)));
}

static int max_child_depth(const std::vector<LatticeElem> &kids) {
  int d = 0;
  for (const auto &k : kids)
    d = std::max(d, k.depth());
  return d;
}

LatticeElem LatticeElem::binop(BinOpKind op, LatticeElem l, LatticeElem r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::BinOp;
  n->bin = op;
  n->kids.reserve(2);
  n->kids.push_back(std::move(l));
  n->kids.push_back(std::move(r));
  n->depth = 1 + max_child_depth(n->kids);
  return LatticeElem(Kind::BinOp, std::move(n));
}

LatticeElem LatticeElem::unop(UnOpKind op, LatticeElem v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::UnOp;
  n->un = op;
  n->kids.push_back(std::move(v));
  n->depth = 1 + max_child_depth(n->kids);
  return LatticeElem(Kind::UnOp, std::move(n));
}

LatticeElem LatticeElem::phi(std::vector<LatticeElem> args) {
  if (args.empty())
    throw std::invalid_argument("phi needs at least one argument");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Phi;
  n->kids = std::move(args);
  n->depth = 1 + max_child_depth(n->kids);
  return LatticeElem(Kind::Phi, std::move(n));
}

LatticeElem LatticeElem::fn_call(std::string fn, std::vector<LatticeElem> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::FnCall;
  n->name = std::move(fn);
  n->kids = std::move(args);
  n->depth = 1 + max_child_depth(n->kids);
  return LatticeElem(Kind::FnCall, std::move(n));
}

const Primitive &LatticeElem::prim() const {
  assert(kind_ == Kind::Prim);
  return node_->prim;
}

BinOpKind LatticeElem::binop_kind() const {
  assert(kind_ == Kind::BinOp);
  return node_->bin;
}

UnOpKind LatticeElem::unop_kind() const {
  assert(kind_ == Kind::UnOp);
  return node_->un;
}

const std::string &LatticeElem::fn_name() const {
  assert(kind_ == Kind::FnCall);
  return node_->name;
}

std::span<const LatticeElem> LatticeElem::children() const {
  if (!node_)
    return {};
  return node_->kids;
}

int LatticeElem::depth() const { return node_ ? node_->depth : 0; }

int depth(const LatticeElem &l) { return l.depth(); }

bool operator==(const LatticeElem &a, const LatticeElem &b) {
  if (a.kind() != b.kind())
    return false;
  if (a.identity() == b.identity())
    return true; // covers top/bottom (both null) and shared nodes
  switch (a.kind()) {
  case LatticeElem::Kind::Top:
  case LatticeElem::Kind::Bot:
    return true;
  case LatticeElem::Kind::Prim:
    return a.prim() == b.prim();
  case LatticeElem::Kind::BinOp:
    if (a.binop_kind() != b.binop_kind())
      return false;
    break;
  case LatticeElem::Kind::UnOp:
    if (a.unop_kind() != b.unop_kind())
      return false;
    break;
  case LatticeElem::Kind::FnCall:
    if (a.fn_name() != b.fn_name())
      return false;
    break;
  case LatticeElem::Kind::Phi:
    break;
  }
  auto ak = a.children(), bk = b.children();
  if (ak.size() != bk.size())
    return false;
  if (a.depth() != b.depth())
    return false;
  for (std::size_t i = 0; i < ak.size(); ++i)
    if (!(ak[i] == bk[i]))
      return false;
  return true;
}

bool leq(const LatticeElem &a, const LatticeElem &b) {
  if (a.is_bottom() || b.is_top())
    return true;
  if (a.is_top() || b.is_bottom())
    return false;
  if (a.kind() != b.kind())
    return false;
  if (a.identity() == b.identity())
    return true;
  switch (a.kind()) {
  case LatticeElem::Kind::Prim:
    return a.prim() == b.prim();
  case LatticeElem::Kind::BinOp:
    if (a.binop_kind() != b.binop_kind())
      return false;
    break;
  case LatticeElem::Kind::UnOp:
    if (a.unop_kind() != b.unop_kind())
      return false;
    break;
  case LatticeElem::Kind::FnCall:
    if (a.fn_name() != b.fn_name())
      return false;
    break;
  default:
    break;
  }
  auto ak = a.children(), bk = b.children();
  if (ak.size() != bk.size())
    return false;
  for (std::size_t i = 0; i < ak.size(); ++i)
    if (!leq(ak[i], bk[i]))
      return false;
  return true;
}

LatticeElem join(const LatticeElem &a, const LatticeElem &b) {
  if (a.is_bottom())
    return b;
  if (b.is_bottom())
    return a;
  if (a.is_top())
    return a;
  if (b.is_top())
    return b;
  if (a.identity() == b.identity())
    return a;
  if (a.kind() != b.kind())
    return LatticeElem::top();
  switch (a.kind()) {
  case LatticeElem::Kind::Prim:
    return a.prim() == b.prim() ? a : LatticeElem::top();
  case LatticeElem::Kind::BinOp:
    if (a.binop_kind() != b.binop_kind())
      return LatticeElem::top();
    break;
  case LatticeElem::Kind::UnOp:
    if (a.unop_kind() != b.unop_kind())
      return LatticeElem::top();
    break;
  case LatticeElem::Kind::FnCall:
    if (a.fn_name() != b.fn_name())
      return LatticeElem::top();
    break;
  default:
    break;
  }
  auto ak = a.children(), bk = b.children();
  if (ak.size() != bk.size())
    return LatticeElem::top();
  std::vector<LatticeElem> kids;
  kids.reserve(ak.size());
  bool all_a = true, all_b = true;
  for (std::size_t i = 0; i < ak.size(); ++i) {
    LatticeElem j = join(ak[i], bk[i]);
    // Structural comparison: top and bottom share a null node, so identity
    // alone would conflate them.
    all_a = all_a && j == ak[i];
    all_b = all_b && j == bk[i];
    kids.push_back(std::move(j));
  }
  if (all_a)
    return a;
  if (all_b)
    return b;
  switch (a.kind()) {
  case LatticeElem::Kind::BinOp:
    return LatticeElem::binop(a.binop_kind(), std::move(kids[0]),
                              std::move(kids[1]));
  case LatticeElem::Kind::UnOp:
    return LatticeElem::unop(a.unop_kind(), std::move(kids[0]));
  case LatticeElem::Kind::FnCall:
    return LatticeElem::fn_call(a.fn_name(), std::move(kids));
  case LatticeElem::Kind::Phi:
    return LatticeElem::phi(std::move(kids));
  default:
    return LatticeElem::top(); // unreachable
  }
}

LatticeElem meet(const LatticeElem &a, const LatticeElem &b) {
  if (a.is_top())
    return b;
  if (b.is_top())
    return a;
  if (a.is_bottom())
    return a;
  if (b.is_bottom())
    return b;
  if (a.identity() == b.identity())
    return a;
  if (a.kind() != b.kind())
    return LatticeElem::bottom();
  switch (a.kind()) {
  case LatticeElem::Kind::Prim:
    return a.prim() == b.prim() ? a : LatticeElem::bottom();
  case LatticeElem::Kind::BinOp:
    if (a.binop_kind() != b.binop_kind())
      return LatticeElem::bottom();
    break;
  case LatticeElem::Kind::UnOp:
    if (a.unop_kind() != b.unop_kind())
      return LatticeElem::bottom();
    break;
  case LatticeElem::Kind::FnCall:
    if (a.fn_name() != b.fn_name())
      return LatticeElem::bottom();
    break;
  default:
    break;
  }
  auto ak = a.children(), bk = b.children();
  if (ak.size() != bk.size())
    return LatticeElem::bottom();
  std::vector<LatticeElem> kids;
  kids.reserve(ak.size());
  bool all_a = true, all_b = true;
  for (std::size_t i = 0; i < ak.size(); ++i) {
    LatticeElem m = meet(ak[i], bk[i]);
    all_a = all_a && m == ak[i];
    all_b = all_b && m == bk[i];
    kids.push_back(std::move(m));
  }
  if (all_a)
    return a;
  if (all_b)
    return b;
  switch (a.kind()) {
  case LatticeElem::Kind::BinOp:
    return LatticeElem::binop(a.binop_kind(), std::move(kids[0]),
                              std::move(kids[1]));
  case LatticeElem::Kind::UnOp:
    return LatticeElem::unop(a.unop_kind(), std::move(kids[0]));
  case LatticeElem::Kind::FnCall:
    return LatticeElem::fn_call(a.fn_name(), std::move(kids));
  case LatticeElem::Kind::Phi:
    return LatticeElem::phi(std::move(kids));
  default:
    return LatticeElem::bottom(); // unreachable
  }
}

LatticeElem truncate(const LatticeElem &l, int k) {
  if (l.depth() <= k)
    return l;
  if (k <= 0)
    return LatticeElem::top(); // too deep and no budget left
  auto kids_in = l.children();
  std::vector<LatticeElem> kids;
  kids.reserve(kids_in.size());
  for (const auto &c : kids_in)
    kids.push_back(truncate(c, k - 1));
  switch (l.kind()) {
  case LatticeElem::Kind::BinOp:
    return LatticeElem::binop(l.binop_kind(), std::move(kids[0]),
                              std::move(kids[1]));
  case LatticeElem::Kind::UnOp:
    return LatticeElem::unop(l.unop_kind(), std::move(kids[0]));
  case LatticeElem::Kind::FnCall:
    return LatticeElem::fn_call(l.fn_name(), std::move(kids));
  case LatticeElem::Kind::Phi:
    return LatticeElem::phi(std::move(kids));
  default:
    return LatticeElem::top(); // unreachable: depth 0 handled above
  }
}

LatticeElem widen(const LatticeElem &a, const LatticeElem &b, int k) {
  return truncate(join(a, b), k);
}

static int kind_rank(LatticeElem::Kind k) { return static_cast<int>(k); }

static int cmp_prim(const Primitive &a, const Primitive &b) {
  if (a.kind != b.kind)
    return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
  case Primitive::Kind::Const:
    if (a.value != b.value)
      return a.value < b.value ? -1 : 1;
    return 0;
  case Primitive::Kind::Arg:
    if (a.index != b.index)
      return a.index < b.index ? -1 : 1;
    return 0;
  default: {
    auto c = a.object <=> b.object;
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  }
}

int compare(const LatticeElem &a, const LatticeElem &b) {
  if (a.kind() != b.kind())
    return kind_rank(a.kind()) < kind_rank(b.kind()) ? -1 : 1;
  if (a.identity() == b.identity())
    return 0;
  switch (a.kind()) {
  case LatticeElem::Kind::Top:
  case LatticeElem::Kind::Bot:
    return 0;
  case LatticeElem::Kind::Prim:
    return cmp_prim(a.prim(), b.prim());
  case LatticeElem::Kind::BinOp:
    if (a.binop_kind() != b.binop_kind())
      return a.binop_kind() < b.binop_kind() ? -1 : 1;
    break;
  case LatticeElem::Kind::UnOp:
    if (a.unop_kind() != b.unop_kind())
      return a.unop_kind() < b.unop_kind() ? -1 : 1;
    break;
  case LatticeElem::Kind::FnCall:
    if (int c = a.fn_name().compare(b.fn_name()))
      return c < 0 ? -1 : 1;
    break;
  case LatticeElem::Kind::Phi:
    break;
  }
  auto ak = a.children(), bk = b.children();
  if (ak.size() != bk.size())
    return ak.size() < bk.size() ? -1 : 1;
  for (std::size_t i = 0; i < ak.size(); ++i)
    if (int c = compare(ak[i], bk[i]))
      return c;
  return 0;
}

static void render(const LatticeElem &l, std::string &out) {
  switch (l.kind()) {
  case LatticeElem::Kind::Top:
    out += 'T';
    return;
  case LatticeElem::Kind::Bot:
    out += 'B';
    return;
  case LatticeElem::Kind::Prim: {
    const Primitive &p = l.prim();
    switch (p.kind) {
    case Primitive::Kind::Const:
      out += "const(";
      out += std::to_string(p.value);
      out += ')';
      return;
    case Primitive::Kind::Arg:
      out += "arg(";
      out += std::to_string(p.index);
      out += ')';
      return;
    case Primitive::Kind::Mem:
      out += "mem(";
      out += to_string(p.object);
      out += ')';
      return;
    case Primitive::Kind::Global:
      out += "global(";
      out += to_string(p.object);
      out += ')';
      return;
    }
    return;
  }
  case LatticeElem::Kind::BinOp: {
    out += '(';
    out += symbol(l.binop_kind());
    for (const auto &c : l.children()) {
      out += ' ';
      render(c, out);
    }
    out += ')';
    return;
  }
  case LatticeElem::Kind::UnOp: {
    out += '(';
    out += name(l.unop_kind());
    out += ' ';
    render(l.children()[0], out);
    out += ')';
    return;
  }
  case LatticeElem::Kind::Phi:
  case LatticeElem::Kind::FnCall: {
    if (l.kind() == LatticeElem::Kind::Phi)
      out += "phi";
    else
      out += l.fn_name();
    out += '(';
    bool first = true;
    for (const auto &c : l.children()) {
      if (!first)
        out += ',';
      first = false;
      render(c, out);
    }
    out += ')';
    return;
  }
  }
}

std::string to_string(const LatticeElem &l) {
  std::string out;
  render(l, out);
  return out;
}

namespace {

// Tiny recursive-descent parser for the canonical element rendering.
class ElemParser {
public:
  explicit ElemParser(std::string_view text) : text_(text) {}

  LatticeElem parse() {
    LatticeElem e = elem();
    skip_ws();
    if (pos_ != text_.size())
      fail("trailing input after element");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string &msg) {
    throw std::invalid_argument("element parse error at offset " +
                                std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c))
      fail(std::string("expected '") + c + "'");
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string ident() {
    skip_ws();
    if (!ident_start(peek()))
      fail("expected identifier");
    std::size_t start = pos_;
    while (ident_char(peek()))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos_;
    if (peek() == '-')
      ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected integer");
    while (std::isdigit(static_cast<unsigned char>(peek())))
      ++pos_;
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  MemObject object() {
    MemObject o;
    o.base = ident();
    if (peek() == ':') {
      expect(':');
      expect(':');
      o.base += "::" + ident();
    }
    expect('+');
    o.offset = integer();
    return o;
  }

  std::vector<LatticeElem> arg_list(bool allow_empty) {
    expect('(');
    std::vector<LatticeElem> args;
    skip_ws();
    if (peek() == ')') {
      if (!allow_empty)
        fail("expected at least one argument");
      expect(')');
      return args;
    }
    args.push_back(elem());
    skip_ws();
    while (eat(',')) {
      args.push_back(elem());
      skip_ws();
    }
    expect(')');
    return args;
  }

  LatticeElem elem() {
    skip_ws();
    char c = peek();
    if (c == '(') { // (op l ...) form: binop or unop
      expect('(');
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != '(')
        ++pos_;
      std::string op(text_.substr(start, pos_ - start));
      if (auto b = binop_from_symbol(op)) {
        LatticeElem l = elem();
        LatticeElem r = elem();
        skip_ws();
        expect(')');
        return LatticeElem::binop(*b, std::move(l), std::move(r));
      }
      if (auto u = unop_from_name(op)) {
        LatticeElem v = elem();
        skip_ws();
        expect(')');
        return LatticeElem::unop(*u, std::move(v));
      }
      fail("unknown operator '" + op + "'");
    }
    if (!ident_start(c))
      fail("expected element");
    std::string head = ident();
    // An argument list binds only when the '(' is adjacent to the head, so
    // that "T (not B)" inside a binop stays two elements instead of a call.
    if (peek() != '(') {
      if (head == "T")
        return LatticeElem::top();
      if (head == "B")
        return LatticeElem::bottom();
      fail("bare identifier '" + head + "' is not an element");
    }
    if (head == "const") {
      expect('(');
      std::int64_t v = integer();
      skip_ws();
      expect(')');
      return LatticeElem::constant(v);
    }
    if (head == "arg") {
      expect('(');
      std::int64_t v = integer();
      skip_ws();
      expect(')');
      return LatticeElem::argument(static_cast<int>(v));
    }
    if (head == "mem" || head == "global") {
      expect('(');
      MemObject o = object();
      skip_ws();
      expect(')');
      return head == "mem" ? LatticeElem::mem_init(std::move(o))
                           : LatticeElem::global_init(std::move(o));
    }
    if (head == "phi")
      return LatticeElem::phi(arg_list(/*allow_empty=*/false));
    return LatticeElem::fn_call(head, arg_list(/*allow_empty=*/true));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace

LatticeElem parse_elem(std::string_view text) {
  return ElemParser(text).parse();
}

} // namespace pva
