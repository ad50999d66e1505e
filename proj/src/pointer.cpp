//===- pointer.cpp - Andersen-style points-to transfer and pre-analysis ---===//

#include "pva/pointer.hpp"

namespace pva {

MemObject addr_target_object(const std::string &name, const PaContext &ctx) {
  if (ctx.program && ctx.program->is_global(name))
    return global_object(name);
  return local_object(ctx.function->name, name);
}

static PtsSet pts_of_operand(const PointsTo &pts, const ir::Operand &o) {
  if (o.is_int())
    return {};
  auto it = pts.find(PtsKey::for_var(o.var));
  return it == pts.end() ? PtsSet{} : it->second;
}

PointsTo pa_transfer(const PointsTo &pts, const ir::Statement &stmt,
                     const PaContext &ctx) {
  PointsTo out = pts;
  if (const auto *s = stmt.get_if<ir::AddrOf>()) {
    out[PtsKey::for_var(s->dst)] = {addr_target_object(s->target, ctx)};
  } else if (const auto *s = stmt.get_if<ir::Assign>()) {
    out[PtsKey::for_var(s->dst)] = pts_of_operand(pts, s->src);
  } else if (const auto *s = stmt.get_if<ir::Load>()) {
    PtsSet gathered;
    for (const MemObject &o : pts_of_operand(pts, ir::Operand::variable(s->addr))) {
      auto it = pts.find(PtsKey::for_obj(o));
      if (it != pts.end())
        gathered.insert(it->second.begin(), it->second.end());
    }
    out[PtsKey::for_var(s->dst)] = std::move(gathered);
  } else if (const auto *s = stmt.get_if<ir::Store>()) {
    PtsSet targets = pts_of_operand(pts, ir::Operand::variable(s->addr));
    PtsSet incoming = pts_of_operand(pts, s->src);
    if (targets.size() == 1) {
      out[PtsKey::for_obj(*targets.begin())] = incoming;
    } else {
      for (const MemObject &o : targets)
        out[PtsKey::for_obj(o)].insert(incoming.begin(), incoming.end());
    }
  }
  return out;
}

namespace {

// Accumulates into `into`, reporting growth.
bool absorb(PtsSet &into, const PtsSet &from) {
  std::size_t before = into.size();
  into.insert(from.begin(), from.end());
  return into.size() != before;
}

} // namespace

PointsTo pa_solve_constraints(
    const std::vector<std::pair<const ir::Function *, const ir::Statement *>>
        &stmts,
    const ir::Program &p, PointsTo seed) {
  PointsTo pts = std::move(seed);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto &[fn, stmt] : stmts) {
      PaContext ctx{&p, fn};
      if (const auto *s = stmt->get_if<ir::AddrOf>()) {
        changed |= absorb(pts[PtsKey::for_var(s->dst)],
                          {addr_target_object(s->target, ctx)});
      } else if (const auto *s = stmt->get_if<ir::Assign>()) {
        changed |=
            absorb(pts[PtsKey::for_var(s->dst)], pts_of_operand(pts, s->src));
      } else if (const auto *s = stmt->get_if<ir::Load>()) {
        PtsSet gathered;
        for (const MemObject &o :
             pts_of_operand(pts, ir::Operand::variable(s->addr))) {
          auto it = pts.find(PtsKey::for_obj(o));
          if (it != pts.end())
            gathered.insert(it->second.begin(), it->second.end());
        }
        changed |= absorb(pts[PtsKey::for_var(s->dst)], gathered);
      } else if (const auto *s = stmt->get_if<ir::Store>()) {
        PtsSet targets = pts_of_operand(pts, ir::Operand::variable(s->addr));
        PtsSet incoming = pts_of_operand(pts, s->src);
        for (const MemObject &o : targets)
          changed |= absorb(pts[PtsKey::for_obj(o)], incoming);
      } else if (const auto *s = stmt->get_if<ir::Call>()) {
        const ir::Function *callee = p.function(s->callee);
        if (!callee)
          continue;
        for (std::size_t i = 0;
             i < s->args.size() && i < callee->params.size(); ++i)
          changed |= absorb(pts[PtsKey::for_var(callee->params[i])],
                            pts_of_operand(pts, s->args[i]));
        for (const ir::Block &b : callee->blocks)
          for (const ir::Statement &cs : b.stmts)
            if (const auto *r = cs.get_if<ir::Return>())
              changed |= absorb(pts[PtsKey::for_var(s->dst)],
                                pts_of_operand(pts, r->value));
      }
    }
  }
  return pts;
}

PointsTo pa_preanalyze(const ir::Program &p) {
  PointsTo seed;
  for (const ir::GlobalDecl &g : p.globals)
    seed[PtsKey::for_var(g.name)].insert(global_object(g.name));
  std::vector<std::pair<const ir::Function *, const ir::Statement *>> stmts;
  for (const ir::Function &f : p.functions)
    for (const ir::Block &b : f.blocks)
      for (const ir::Statement &s : b.stmts)
        stmts.emplace_back(&f, &s);
  return pa_solve_constraints(stmts, p, std::move(seed));
}

} // namespace pva
