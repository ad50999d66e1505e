//===- domains.cpp - Abstract state operations ----------------------------===//

#include "pva/domains.hpp"

#include <algorithm>
#include <iterator>

namespace pva {

std::string to_string(const PtsKey &k) {
  return k.kind == PtsKey::Kind::Var ? k.var : to_string(k.obj);
}

MemObject global_object(std::string name) {
  return MemObject{std::move(name), 0};
}

MemObject local_object(const std::string &fn, const std::string &name) {
  return MemObject{fn + "::" + name, 0};
}

LatticeElem sigma_read(const AbstractState &s, const std::string &name) {
  auto it = s.sigma.find(name);
  return it == s.sigma.end() ? LatticeElem::bottom() : it->second;
}

LatticeElem eval_operand(const AbstractState &s, const ir::Operand &o) {
  if (o.is_int())
    return LatticeElem::constant(o.value);
  return sigma_read(s, o.var);
}

LatticeElem mem_read(const AbstractState &s, const MemObject &o) {
  auto it = s.mem.find(o);
  if (it != s.mem.end())
    return it->second;
  if (is_global_cell(o))
    return LatticeElem::global_init(o);
  return LatticeElem::bottom();
}

const PtsSet &pts_read(const AbstractState &s, const PtsKey &k) {
  static const PtsSet empty;
  auto it = s.pts.find(k);
  return it == s.pts.end() ? empty : it->second;
}

AbstractState join_state(const AbstractState &a, const AbstractState &b) {
  AbstractState out = a;
  for (const auto &[k, v] : b.sigma) {
    auto it = out.sigma.find(k);
    if (it == out.sigma.end())
      out.sigma.emplace(k, v);
    else
      it->second = join(it->second, v);
  }
  for (const auto &[k, v] : b.mem) {
    auto it = out.mem.find(k);
    if (it == out.mem.end())
      out.mem.emplace(k, v);
    else
      it->second = join(it->second, v);
  }
  for (const auto &[k, v] : b.pts)
    out.pts[k].insert(v.begin(), v.end());
  return out;
}

bool leq_state(const AbstractState &a, const AbstractState &b) {
  for (const auto &[k, v] : a.sigma)
    if (!leq(v, sigma_read(b, k)))
      return false;
  for (const auto &[k, v] : a.mem) {
    auto it = b.mem.find(k);
    if (!leq(v, it == b.mem.end() ? LatticeElem::bottom() : it->second))
      return false;
  }
  for (const auto &[k, v] : a.pts) {
    const PtsSet &bv = pts_read(b, k);
    if (!std::includes(bv.begin(), bv.end(), v.begin(), v.end()))
      return false;
  }
  return true;
}

AbstractState initial_state(const ir::Function &f, const ir::Program &p) {
  AbstractState s;
  for (std::size_t i = 0; i < f.params.size(); ++i)
    s.sigma.emplace(f.params[i], LatticeElem::argument(static_cast<int>(i)));
  for (const ir::GlobalDecl &g : p.globals) {
    MemObject o = global_object(g.name);
    s.mem.emplace(o, LatticeElem::global_init(o));
    s.pts[PtsKey::for_var(g.name)].insert(o);
  }
  return s;
}

void normalize_state(AbstractState &s) {
  for (auto it = s.sigma.begin(); it != s.sigma.end();)
    it = it->second.is_bottom() ? s.sigma.erase(it) : std::next(it);
  for (auto it = s.mem.begin(); it != s.mem.end();) {
    bool drop = !is_global_cell(it->first) && it->second.is_bottom();
    it = drop ? s.mem.erase(it) : std::next(it);
  }
  for (auto it = s.pts.begin(); it != s.pts.end();)
    it = it->second.empty() ? s.pts.erase(it) : std::next(it);
}

AbstractState normalized(AbstractState s) {
  normalize_state(s);
  return s;
}

} // namespace pva
