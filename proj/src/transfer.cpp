//===- transfer.cpp - Abstract transfer over statements and blocks --------===//

#include "pva/transfer.hpp"

namespace pva {

const PtsSet &effective_pts(const AbstractState &s, const TransferContext &ctx,
                            const PtsKey &key) {
  if (ctx.pointer_mode == PointerMode::Pre) {
    static const PtsSet empty;
    auto it = ctx.frozen_pts->find(key);
    return it == ctx.frozen_pts->end() ? empty : it->second;
  }
  return pts_read(s, key);
}

namespace {

void diagnose(const TransferContext &ctx, const StmtLoc &loc, std::string code,
              std::string message) {
  if (!ctx.diags)
    return;
  Diagnostic d;
  d.function = ctx.function->name;
  d.block = loc.block;
  d.stmt_index = loc.index;
  d.code = std::move(code);
  d.message = std::move(message);
  ctx.diags->push_back(std::move(d));
}

// Updates the state's own points-to component; skipped entirely in pre mode
// where the frozen map stands in for it.
void update_pts(AbstractState &s, const ir::Statement &stmt,
                const TransferContext &ctx) {
  if (ctx.pointer_mode == PointerMode::Pre)
    return;
  PaContext pa{ctx.program, ctx.function};
  s.pts = pa_transfer(s.pts, stmt, pa);
}

} // namespace

AbstractState transfer_stmt(const AbstractState &in, const ir::Statement &stmt,
                            const TransferContext &ctx, const StmtLoc &loc) {
  AbstractState out = in;

  if (const auto *s = stmt.get_if<ir::Assign>()) {
    out.sigma[s->dst] = eval_operand(in, s->src);
    update_pts(out, stmt, ctx);
    return out;
  }
  if (const auto *s = stmt.get_if<ir::BinOpStmt>()) {
    out.sigma[s->dst] = LatticeElem::binop(s->op, eval_operand(in, s->lhs),
                                           eval_operand(in, s->rhs));
    return out;
  }
  if (const auto *s = stmt.get_if<ir::UnOpStmt>()) {
    out.sigma[s->dst] = LatticeElem::unop(s->op, eval_operand(in, s->src));
    return out;
  }
  if (const auto *s = stmt.get_if<ir::Phi>()) {
    std::vector<LatticeElem> args;
    args.reserve(s->incoming.size());
    for (const auto &[op, label] : s->incoming)
      args.push_back(eval_operand(in, op));
    out.sigma[s->dst] = LatticeElem::phi(std::move(args));
    return out;
  }
  if (stmt.get_if<ir::AddrOf>()) {
    // sigma(dst) deliberately untouched: the address is not a tracked value.
    update_pts(out, stmt, ctx);
    return out;
  }
  if (const auto *s = stmt.get_if<ir::Load>()) {
    const PtsSet &targets =
        effective_pts(in, ctx, PtsKey::for_var(s->addr));
    if (targets.empty()) {
      diagnose(ctx, loc, "load-empty-points-to",
               "load through '" + s->addr + "' with empty points-to set");
      out.sigma[s->dst] = LatticeElem::bottom();
    } else {
      LatticeElem v = LatticeElem::bottom();
      for (const MemObject &o : targets)
        v = join(v, mem_read(in, o));
      out.sigma[s->dst] = std::move(v);
    }
    update_pts(out, stmt, ctx);
    return out;
  }
  if (const auto *s = stmt.get_if<ir::Store>()) {
    const PtsSet &targets =
        effective_pts(in, ctx, PtsKey::for_var(s->addr));
    LatticeElem v = eval_operand(in, s->src);
    if (targets.empty()) {
      diagnose(ctx, loc, "store-empty-points-to",
               "store through '" + s->addr + "' with empty points-to set");
    } else if (targets.size() == 1) {
      out.mem[*targets.begin()] = std::move(v); // strong update
    } else {
      for (const MemObject &o : targets)
        out.mem[o] = join(mem_read(in, o), v); // weak update
    }
    update_pts(out, stmt, ctx);
    return out;
  }
  if (const auto *s = stmt.get_if<ir::Call>()) {
    if (ctx.calls) {
      if (auto outcome = ctx.calls->evaluate_call(in, *s, *ctx.function)) {
        out.sigma[s->dst] = std::move(outcome->ret);
        out.mem = std::move(outcome->mem);
        if (ctx.pointer_mode != PointerMode::Pre)
          out.pts = std::move(outcome->pts);
        return out;
      }
    }
    std::vector<LatticeElem> args;
    args.reserve(s->args.size());
    for (const ir::Operand &a : s->args)
      args.push_back(eval_operand(in, a));
    out.sigma[s->dst] = LatticeElem::fn_call(s->callee, std::move(args));
    return out;
  }
  if (const auto *s = stmt.get_if<ir::Return>()) {
    if (ctx.returns)
      ctx.returns->push_back(eval_operand(in, s->value));
    return out;
  }
  // br / goto: path-insensitive identity.
  return out;
}

AbstractState transfer_block(const AbstractState &in, const ir::Block &block,
                             const TransferContext &ctx) {
  AbstractState state = in;
  for (std::size_t i = 0; i < block.stmts.size(); ++i)
    state = transfer_stmt(state, block.stmts[i], ctx,
                          StmtLoc{block.label, static_cast<int>(i)});
  return state;
}

std::vector<AbstractState> block_prestates(const AbstractState &in,
                                           const ir::Block &block,
                                           const TransferContext &ctx) {
  std::vector<AbstractState> states;
  states.reserve(block.stmts.size() + 1);
  AbstractState state = in;
  for (std::size_t i = 0; i < block.stmts.size(); ++i) {
    states.push_back(state);
    state = transfer_stmt(state, block.stmts[i], ctx,
                          StmtLoc{block.label, static_cast<int>(i)});
  }
  states.push_back(std::move(state));
  return states;
}

} // namespace pva
