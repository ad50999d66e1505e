//===- interproc.cpp - Call graph and interprocedural evaluation ----------===//

#include "pva/interproc.hpp"

#include <algorithm>

#include "pva/pointer.hpp"

namespace pva {

CallGraph build_call_graph(const ir::Program &p) {
  CallGraph cg;
  std::map<std::string, std::set<std::string>> adj;
  for (const ir::Function &f : p.functions) {
    cg.nodes.push_back(f.name);
    adj[f.name];
  }
  for (const ir::Function &f : p.functions) {
    for (const ir::Block &b : f.blocks) {
      for (std::size_t i = 0; i < b.stmts.size(); ++i) {
        const auto *c = b.stmts[i].get_if<ir::Call>();
        if (!c)
          continue;
        cg.edges.push_back(
            CallSite{f.name, c->callee, b.label, static_cast<int>(i)});
        if (p.function(c->callee))
          adj[f.name].insert(c->callee);
        else
          cg.externals.insert(c->callee);
      }
    }
  }
  // A function is cyclic when it can reach itself through defined calls.
  for (const std::string &start : cg.nodes) {
    std::set<std::string> seen;
    std::vector<std::string> work(adj[start].begin(), adj[start].end());
    bool found = false;
    while (!work.empty() && !found) {
      std::string cur = work.back();
      work.pop_back();
      if (cur == start) {
        found = true;
        break;
      }
      if (!seen.insert(cur).second)
        continue;
      for (const std::string &n : adj[cur])
        work.push_back(n);
    }
    if (found)
      cg.cyclic.insert(start);
  }
  return cg;
}

InterEngine::InterEngine(const ir::Program &p, const AnalysisOptions &opts)
    : program_(p), opts_(opts) {
  if (opts_.pointer_mode == PointerMode::Pre)
    frozen_pts_ = pa_preanalyze(p);
  for (const ir::Function &f : p.functions)
    cfgs_.emplace(f.name, ir::build_cfg(f));
}

namespace {

// Caller's variable points-to entries survive a call unchanged; everything a
// callee can affect lives under object keys.
PointsTo merge_callee_pts(const PointsTo &caller, const PointsTo &callee_exit) {
  PointsTo out;
  for (const auto &[key, set] : caller)
    if (key.kind == PtsKey::Kind::Var)
      out.emplace(key, set);
  for (const auto &[key, set] : callee_exit)
    if (key.kind == PtsKey::Kind::Obj)
      out[key].insert(set.begin(), set.end());
  return out;
}

} // namespace

std::optional<CallOutcome>
InterEngine::evaluate_call(const AbstractState &state, const ir::Call &call,
                           const ir::Function & /*caller*/) {
  const ir::Function *callee = program_.function(call.callee);
  if (!callee)
    return std::nullopt; // external: keep the uninterpreted symbol
  if (std::find(stack_.begin(), stack_.end(), call.callee) != stack_.end())
    return std::nullopt; // cycle at this point: intraprocedural fallback

  // Entry context: fresh sigma binding parameters to evaluated arguments,
  // the caller's memory, object points-to entries, and parameter aliasing.
  AbstractState entry;
  for (std::size_t i = 0; i < callee->params.size(); ++i) {
    LatticeElem v = i < call.args.size() ? eval_operand(state, call.args[i])
                                         : LatticeElem::bottom();
    entry.sigma.emplace(callee->params[i], std::move(v));
  }
  entry.mem = state.mem;
  for (const auto &[key, set] : state.pts)
    if (key.kind == PtsKey::Kind::Obj)
      entry.pts.emplace(key, set);
  for (std::size_t i = 0; i < callee->params.size() && i < call.args.size();
       ++i) {
    const ir::Operand &arg = call.args[i];
    if (!arg.is_var())
      continue;
    const PtsSet &aliases = pts_read(state, PtsKey::for_var(arg.var));
    if (!aliases.empty())
      entry.pts[PtsKey::for_var(callee->params[i])] = aliases;
  }
  normalize_state(entry);

  Summary &sum = summaries_[call.callee];
  AbstractState joined = join_state(sum.entry, entry);
  normalize_state(joined);
  bool grew = !sum.solved || !(joined == sum.entry);
  if (grew) {
    sum.entry = std::move(joined);
    stack_.push_back(call.callee);
    SolverOptions sopts;
    sopts.widen_depth = opts_.widen_depth;
    sopts.max_iterations = opts_.max_iterations;
    sopts.pointer_mode = opts_.pointer_mode;
    sopts.frozen_pts = &frozen_pts_;
    sopts.calls = this;
    sopts.entry_state = &sum.entry;
    sopts.worklist_seed = opts_.worklist_seed;
    sopts.join_as_meet = opts_.join_as_meet;
    FunctionResult res =
        solve_function(*callee, program_, cfgs_.at(call.callee), sopts);
    stack_.pop_back();
    sum.total_iterations += res.iterations;
    AbstractState new_exit = join_state(sum.exit, res.exit_state);
    normalize_state(new_exit);
    LatticeElem new_ret = join(sum.ret, res.return_value);
    if (!(new_exit == sum.exit) || !(new_ret == sum.ret) || !sum.solved)
      changed_ = true;
    sum.exit = std::move(new_exit);
    sum.ret = std::move(new_ret);
    sum.last_result = std::move(res);
    sum.solved = true;
  }

  CallOutcome outcome;
  outcome.ret = sum.ret;
  outcome.mem = sum.exit.mem;
  outcome.pts = merge_callee_pts(state.pts, sum.exit.pts);
  return outcome;
}

AbstractState InterEngine::transfer_call_inter(const AbstractState &state,
                                               const ir::Call &call,
                                               const ir::Function &caller) {
  TransferContext ctx;
  ctx.program = &program_;
  ctx.function = &caller;
  ctx.pointer_mode = opts_.pointer_mode;
  ctx.frozen_pts = &frozen_pts_;
  ctx.calls = this;
  ir::Statement stmt;
  stmt.node = call;
  return transfer_stmt(state, stmt, ctx, StmtLoc{"", 0});
}

FunctionResult InterEngine::solve_root(const ir::Function &root) {
  stack_.push_back(root.name);
  SolverOptions sopts;
  sopts.widen_depth = opts_.widen_depth;
  sopts.max_iterations = opts_.max_iterations;
  sopts.pointer_mode = opts_.pointer_mode;
  sopts.frozen_pts = &frozen_pts_;
  sopts.calls = this;
  sopts.worklist_seed = opts_.worklist_seed;
  sopts.join_as_meet = opts_.join_as_meet;
  FunctionResult res =
      solve_function(root, program_, cfgs_.at(root.name), sopts);
  stack_.pop_back();
  return res;
}

namespace {

void collect_diagnostics(const ir::Program &p, AnalysisResult &result) {
  for (const ir::Function &f : p.functions) {
    auto it = result.functions.find(f.name);
    if (it == result.functions.end())
      continue;
    for (const Diagnostic &d : it->second.diagnostics)
      result.diagnostics.push_back(d);
  }
}

} // namespace

AnalysisResult analyze_program(const ir::Program &p,
                               const AnalysisOptions &opts) {
  AnalysisResult result;

  if (opts.mode == AnalysisMode::Intra) {
    PointsTo frozen;
    if (opts.pointer_mode == PointerMode::Pre) {
      frozen = pa_preanalyze(p);
      result.points_to_pre = frozen;
      result.used_pre = true;
    }
    for (const ir::Function &f : p.functions) {
      SolverOptions sopts;
      sopts.widen_depth = opts.widen_depth;
      sopts.max_iterations = opts.max_iterations;
      sopts.pointer_mode = opts.pointer_mode;
      sopts.frozen_pts = &frozen;
      sopts.worklist_seed = opts.worklist_seed;
      sopts.join_as_meet = opts.join_as_meet;
      ir::Cfg cfg = ir::build_cfg(f);
      result.functions.emplace(f.name, solve_function(f, p, cfg, sopts));
    }
    collect_diagnostics(p, result);
    return result;
  }

  const ir::Function *entry = p.function(opts.entry);
  if (!entry)
    throw EntryNotFound{opts.entry};

  auto engine_ptr = std::make_shared<InterEngine>(p, opts);
  InterEngine &engine = *engine_ptr;
  result.call_evaluator = engine_ptr;
  if (opts.pointer_mode == PointerMode::Pre) {
    result.points_to_pre = engine.frozen_pts_;
    result.used_pre = true;
  }

  // Roots: the entry first; once the current roots converge, any function
  // still lacking a summary (unreachable from every root so far) becomes a
  // standalone root in program order. Each convergence round re-solves all
  // roots until no summary grows, so reported states agree with the final
  // summaries.
  std::vector<const ir::Function *> roots{entry};
  std::set<std::string> root_names{entry->name};
  std::map<std::string, FunctionResult> root_results;
  const long pass_budget = 1000;
  long passes = 0;
  for (;;) {
    engine.reset_change_flag();
    std::map<std::string, FunctionResult> this_pass;
    for (const ir::Function *root : roots)
      this_pass[root->name] = engine.solve_root(*root);
    if (engine.summaries_changed()) {
      if (++passes > pass_budget)
        throw IterationBudgetExceeded{opts.entry, pass_budget};
      continue;
    }
    const ir::Function *uncovered = nullptr;
    for (const ir::Function &f : p.functions) {
      if (!root_names.count(f.name) && !engine.summaries().count(f.name)) {
        uncovered = &f;
        break;
      }
    }
    if (!uncovered) {
      root_results = std::move(this_pass);
      break;
    }
    roots.push_back(uncovered);
    root_names.insert(uncovered->name);
  }

  for (const ir::Function &f : p.functions) {
    auto rit = root_results.find(f.name);
    if (rit != root_results.end()) {
      result.functions.emplace(f.name, std::move(rit->second));
      continue;
    }
    auto sit = engine.summaries().find(f.name);
    if (sit != engine.summaries().end() && sit->second.solved) {
      FunctionResult fr = sit->second.last_result;
      fr.iterations = sit->second.total_iterations;
      result.functions.emplace(f.name, std::move(fr));
    }
  }
  collect_diagnostics(p, result);
  return result;
}

} // namespace pva
