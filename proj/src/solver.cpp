//===- solver.cpp - Worklist fixpoint with depth-bounded widening ---------===//

#include "pva/solver.hpp"

#include <deque>
#include <random>

namespace pva {

AbstractState widen_state(const AbstractState &a, const AbstractState &b,
                          int k) {
  AbstractState out;
  for (const auto &[key, va] : a.sigma)
    out.sigma.emplace(key, widen(va, sigma_read(b, key), k));
  for (const auto &[key, vb] : b.sigma)
    if (!a.sigma.count(key))
      out.sigma.emplace(key, truncate(vb, k));
  auto read_raw = [](const AbstractState &s, const MemObject &o) {
    auto it = s.mem.find(o);
    return it == s.mem.end() ? LatticeElem::bottom() : it->second;
  };
  for (const auto &[key, va] : a.mem)
    out.mem.emplace(key, widen(va, read_raw(b, key), k));
  for (const auto &[key, vb] : b.mem)
    if (!a.mem.count(key))
      out.mem.emplace(key, truncate(vb, k));
  out.pts = a.pts;
  for (const auto &[key, set] : b.pts)
    out.pts[key].insert(set.begin(), set.end());
  return out;
}

namespace {

// Meet counterpart used only by the mutation knob.
AbstractState meet_state(const AbstractState &a, const AbstractState &b) {
  AbstractState out;
  for (const auto &[key, va] : a.sigma)
    out.sigma.emplace(key, meet(va, sigma_read(b, key)));
  auto read_raw = [](const AbstractState &s, const MemObject &o) {
    auto it = s.mem.find(o);
    return it == s.mem.end() ? LatticeElem::bottom() : it->second;
  };
  for (const auto &[key, va] : a.mem)
    out.mem.emplace(key, meet(va, read_raw(b, key)));
  for (const auto &[key, set] : a.pts) {
    const PtsSet &bs = pts_read(b, key);
    PtsSet inter;
    for (const MemObject &o : set)
      if (bs.count(o))
        inter.insert(o);
    if (!inter.empty())
      out.pts.emplace(key, std::move(inter));
  }
  return out;
}

// Merge the predecessor out-states (plus the entry state for the entry
// block) into a block's in-state. The first contribution is copied rather
// than merged so that the meet variant does not collapse everything into
// the empty (bottom) state.
AbstractState merged_in(const std::string &label, const ir::Cfg &cfg,
                        const std::map<std::string, AbstractState> &out_states,
                        const AbstractState &entry_in, bool join_as_meet) {
  AbstractState in;
  bool first = true;
  auto merge = [&](const AbstractState &next) {
    if (first) {
      in = next;
      first = false;
    } else {
      in = join_as_meet ? meet_state(in, next) : join_state(in, next);
    }
  };
  for (const std::string &pred : cfg.preds.at(label))
    merge(out_states.at(pred));
  if (label == cfg.entry)
    merge(entry_in);
  normalize_state(in);
  return in;
}

} // namespace

FunctionResult solve_function(const ir::Function &f, const ir::Program &p,
                              const ir::Cfg &cfg, const SolverOptions &opts) {
  TransferContext ctx;
  ctx.program = &p;
  ctx.function = &f;
  ctx.pointer_mode = opts.pointer_mode;
  ctx.frozen_pts = opts.frozen_pts;
  ctx.calls = opts.calls;

  AbstractState entry_in =
      opts.entry_state ? *opts.entry_state : initial_state(f, p);

  const long budget =
      opts.max_iterations > 0
          ? opts.max_iterations
          : 10L * static_cast<long>(f.blocks.size()) * (opts.widen_depth + 2);

  std::map<std::string, AbstractState> in_states, out_states;
  for (const std::string &b : cfg.nodes)
    out_states[b]; // bottom

  std::deque<std::string> work(cfg.nodes.begin(), cfg.nodes.end());
  std::set<std::string> queued(cfg.nodes.begin(), cfg.nodes.end());
  std::mt19937 rng(opts.worklist_seed);

  FunctionResult result;
  long iterations = 0;
  while (!work.empty()) {
    std::size_t pick = 0;
    if (opts.worklist_seed != 0)
      pick = std::uniform_int_distribution<std::size_t>(0, work.size() - 1)(rng);
    std::string label = work[pick];
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(pick));
    queued.erase(label);

    if (++iterations > budget)
      throw IterationBudgetExceeded{f.name, budget};
    ++result.visits[label];

    AbstractState in =
        merged_in(label, cfg, out_states, entry_in, opts.join_as_meet);
    in_states[label] = in;

    const ir::Block *block = f.block(label);
    AbstractState out = transfer_block(in, *block, ctx);
    out = widen_state(in, out, opts.widen_depth);
    normalize_state(out);

    if (!(out == out_states.at(label))) {
      out_states[label] = std::move(out);
      for (const std::string &succ : cfg.succs.at(label))
        if (queued.insert(succ).second)
          work.push_back(succ);
    }
  }
  result.iterations = iterations;

  // Reporting pass over the settled states: recompute each block's in-state
  // from the final predecessor outs, collect diagnostics and return elements
  // once, and join the states at the return points.
  ctx.diags = &result.diagnostics;
  result.return_value = LatticeElem::bottom();
  for (const std::string &label : cfg.nodes) {
    AbstractState in =
        merged_in(label, cfg, out_states, entry_in, opts.join_as_meet);
    in_states[label] = in;

    const ir::Block *block = f.block(label);
    std::vector<LatticeElem> returns;
    ctx.returns = &returns;
    std::vector<AbstractState> pre = block_prestates(in, *block, ctx);
    ctx.returns = nullptr;
    for (const LatticeElem &r : returns)
      result.return_value = join(result.return_value, r);
    if (block->terminator().get_if<ir::Return>()) {
      AbstractState at_return = pre[block->stmts.size() - 1];
      normalize_state(at_return);
      result.exit_state = join_state(result.exit_state, at_return);
    }
  }
  normalize_state(result.exit_state);

  result.in_states = std::move(in_states);
  result.out_states = std::move(out_states);
  return result;
}

} // namespace pva
