//===- oracle.cpp - Concrete interpreter and soundness oracle -------------===//

#include "pva/oracle.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace pva {

//===----------------------------------------------------------------------===//
// Concrete arithmetic
//===----------------------------------------------------------------------===//

static std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}

static std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) -
                                   static_cast<std::uint64_t>(b));
}

static std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                   static_cast<std::uint64_t>(b));
}

std::optional<std::int64_t> eval_binop_concrete(BinOpKind op, std::int64_t a,
                                                std::int64_t b) {
  switch (op) {
  case BinOpKind::Add:
    return wrap_add(a, b);
  case BinOpKind::Sub:
    return wrap_sub(a, b);
  case BinOpKind::Mul:
    return wrap_mul(a, b);
  case BinOpKind::Div:
    if (b == 0 || (a == std::numeric_limits<std::int64_t>::min() && b == -1))
      return std::nullopt;
    return a / b;
  case BinOpKind::Eq:
    return a == b ? 1 : 0;
  case BinOpKind::Ne:
    return a != b ? 1 : 0;
  case BinOpKind::Lt:
    return a < b ? 1 : 0;
  case BinOpKind::Le:
    return a <= b ? 1 : 0;
  }
  return std::nullopt;
}

std::int64_t eval_unop_concrete(UnOpKind op, std::int64_t a) {
  switch (op) {
  case UnOpKind::Neg:
    return wrap_sub(0, a);
  case UnOpKind::Not:
    return a == 0 ? 1 : 0;
  }
  return 0;
}

std::string to_string(const ConcreteValue &v) {
  if (v.is_int())
    return std::to_string(v.i);
  return "&" + to_string(v.obj);
}

//===----------------------------------------------------------------------===//
// Interpreter
//===----------------------------------------------------------------------===//

namespace {

// True when `o` is the local cell of function `fn`.
bool owned_local(const MemObject &o, const std::string &fn) {
  if (is_global_cell(o))
    return false;
  auto pos = o.base.find("::");
  return o.base.compare(0, pos, fn) == 0;
}

struct TrapException {
  Trap trap;
};

struct Interp {
  const ir::Program &p;
  const StubTable &stubs;
  RunResult &out;
  long fuel;
  bool record_trace;

  [[noreturn]] void trap(std::string reason, const ir::Function &f,
                         const std::string &block, int idx) {
    throw TrapException{Trap{std::move(reason), f.name, block, idx}};
  }

  ConcreteValue exec(const ir::Function &f, std::vector<ConcreteValue> args,
                     ConcreteHeap &heap, int parent) {
    if (args.size() != f.params.size())
      throw std::invalid_argument("argument count mismatch calling " + f.name);
    // Fresh activation: this function's local cells start uninitialized, so
    // loads through stale pointers from earlier activations trap instead of
    // observing leftover values.
    std::erase_if(heap,
                  [&](const auto &kv) { return owned_local(kv.first, f.name); });
    int frame = static_cast<int>(out.frames.size());
    out.frames.push_back(FrameInfo{f.name, args, heap, parent});

    ConcreteEnv env;
    for (std::size_t i = 0; i < f.params.size(); ++i)
      env[f.params[i]] = args[i];

    auto value_of = [&](const ir::Operand &o, const std::string &block,
                        int idx) -> ConcreteValue {
      if (o.is_int())
        return ConcreteValue::integer(o.value);
      auto it = env.find(o.var);
      if (it != env.end())
        return it->second;
      if (p.is_global(o.var))
        return ConcreteValue::pointer(global_object(o.var));
      trap("undefined-read", f, block, idx);
    };

    const ir::Block *blk = &f.blocks.front();
    std::string came_from;
    for (;;) {
      bool jumped = false;
      for (std::size_t idx = 0; idx < blk->stmts.size(); ++idx) {
        const ir::Statement &st = blk->stmts[idx];
        int i = static_cast<int>(idx);
        if (record_trace)
          out.trace.push_back(
              TracePoint{frame, f.name, blk->label, i, env, heap});
        if (++out.steps > fuel)
          trap("fuel", f, blk->label, i);

        if (const auto *s = st.get_if<ir::Assign>()) {
          env[s->dst] = value_of(s->src, blk->label, i);
        } else if (const auto *s = st.get_if<ir::AddrOf>()) {
          MemObject o = p.is_global(s->target)
                            ? global_object(s->target)
                            : local_object(f.name, s->target);
          env[s->dst] = ConcreteValue::pointer(std::move(o));
        } else if (const auto *s = st.get_if<ir::Load>()) {
          ConcreteValue a = value_of(ir::Operand::variable(s->addr),
                                     blk->label, i);
          if (!a.is_ptr())
            trap("deref-non-pointer", f, blk->label, i);
          auto hit = heap.find(a.obj);
          if (hit == heap.end())
            trap("uninitialized-read", f, blk->label, i);
          env[s->dst] = hit->second;
        } else if (const auto *s = st.get_if<ir::Store>()) {
          ConcreteValue a = value_of(ir::Operand::variable(s->addr),
                                     blk->label, i);
          if (!a.is_ptr())
            trap("deref-non-pointer", f, blk->label, i);
          heap[a.obj] = value_of(s->src, blk->label, i);
        } else if (const auto *s = st.get_if<ir::BinOpStmt>()) {
          ConcreteValue l = value_of(s->lhs, blk->label, i);
          ConcreteValue r = value_of(s->rhs, blk->label, i);
          if (!l.is_int() || !r.is_int())
            trap("pointer-arithmetic", f, blk->label, i);
          auto v = eval_binop_concrete(s->op, l.i, r.i);
          if (!v)
            trap(r.i == 0 ? "div-by-zero" : "div-overflow", f, blk->label, i);
          env[s->dst] = ConcreteValue::integer(*v);
        } else if (const auto *s = st.get_if<ir::UnOpStmt>()) {
          ConcreteValue v = value_of(s->src, blk->label, i);
          if (!v.is_int())
            trap("pointer-arithmetic", f, blk->label, i);
          env[s->dst] = ConcreteValue::integer(eval_unop_concrete(s->op, v.i));
        } else if (const auto *s = st.get_if<ir::Phi>()) {
          const ir::Operand *chosen = nullptr;
          for (const auto &[op, label] : s->incoming)
            if (label == came_from)
              chosen = &op;
          if (!chosen)
            trap("phi-no-incoming", f, blk->label, i);
          env[s->dst] = value_of(*chosen, blk->label, i);
        } else if (const auto *s = st.get_if<ir::Call>()) {
          if (const ir::Function *callee = p.function(s->callee)) {
            std::vector<ConcreteValue> vals;
            vals.reserve(s->args.size());
            for (const ir::Operand &a : s->args)
              vals.push_back(value_of(a, blk->label, i));
            env[s->dst] = exec(*callee, std::move(vals), heap, frame);
          } else {
            auto fit = stubs.fns.find(s->callee);
            if (fit == stubs.fns.end())
              trap("missing-stub", f, blk->label, i);
            std::vector<std::int64_t> vals;
            vals.reserve(s->args.size());
            for (const ir::Operand &a : s->args) {
              ConcreteValue v = value_of(a, blk->label, i);
              if (!v.is_int())
                trap("external-pointer-arg", f, blk->label, i);
              vals.push_back(v.i);
            }
            auto r = fit->second(vals);
            if (!r)
              trap("stub-trap", f, blk->label, i);
            env[s->dst] = ConcreteValue::integer(*r);
          }
        } else if (const auto *s = st.get_if<ir::Goto>()) {
          came_from = blk->label;
          blk = f.block(s->target);
          jumped = true;
          break;
        } else if (const auto *s = st.get_if<ir::CondGoto>()) {
          ConcreteValue c = value_of(s->cond, blk->label, i);
          if (!c.is_int())
            trap("pointer-branch", f, blk->label, i);
          int bi = f.block_index(blk->label);
          came_from = blk->label;
          blk = c.i != 0 ? f.block(s->target)
                         : &f.blocks[static_cast<std::size_t>(bi) + 1];
          jumped = true;
          break;
        } else if (const auto *s = st.get_if<ir::Return>()) {
          return value_of(s->value, blk->label, i);
        }
      }
      if (!jumped)
        trap("fell-off-block", f, blk->label,
             static_cast<int>(blk->stmts.size()));
    }
  }
};

} // namespace

RunResult run_concrete(const ir::Program &p, const std::string &fname,
                       std::vector<ConcreteValue> args, ConcreteHeap heap,
                       const StubTable &stubs, long fuel, bool record_trace) {
  const ir::Function *f = p.function(fname);
  if (!f)
    throw std::invalid_argument("no such function: " + fname);
  RunResult out;
  Interp interp{p, stubs, out, fuel, record_trace};
  try {
    out.ret = interp.exec(*f, std::move(args), heap, -1);
  } catch (const TrapException &t) {
    out.trapped = true;
    out.trap = t.trap;
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Concretization by enumeration
//===----------------------------------------------------------------------===//

namespace {

// Finite enumeration with an escape hatch: top subterms, unknown externals,
// and blown size caps all collapse to "unenumerable", which membership treats
// as containing everything (the conservative direction for a soundness
// check: it can only mask violations, never invent them).
struct ValueSet {
  bool infinite = false;
  std::set<std::int64_t> values;
};

constexpr std::size_t kSetCap = 4096;
constexpr std::size_t kPairCap = 1 << 20;
constexpr std::size_t kCallTupleCap = 1024;

struct Concretizer {
  const Binding &binding;
  std::map<const void *, ValueSet> cache;

  const ValueSet &eval(const LatticeElem &e) {
    // Top and bottom share a null node, so they must bypass the
    // identity-keyed cache.
    if (e.is_top()) {
      static const ValueSet inf = infinite_set();
      return inf;
    }
    if (e.is_bottom()) {
      static const ValueSet empty;
      return empty;
    }
    auto it = cache.find(e.identity());
    if (it != cache.end())
      return it->second;
    ValueSet vs = compute(e);
    return cache.emplace(e.identity(), std::move(vs)).first->second;
  }

  bool member(std::int64_t v, const LatticeElem &e) {
    const ValueSet &vs = eval(e);
    return vs.infinite || vs.values.count(v) > 0;
  }

  static ValueSet infinite_set() {
    ValueSet vs;
    vs.infinite = true;
    return vs;
  }

  static bool add(ValueSet &vs, std::int64_t v) {
    vs.values.insert(v);
    if (vs.values.size() > kSetCap) {
      vs.infinite = true;
      vs.values.clear();
      return false;
    }
    return true;
  }

  ValueSet compute(const LatticeElem &e) {
    switch (e.kind()) {
    case LatticeElem::Kind::Top:
      return infinite_set();
    case LatticeElem::Kind::Bot:
      return {};
    case LatticeElem::Kind::Prim:
      return compute_prim(e.prim());
    case LatticeElem::Kind::BinOp: {
      const ValueSet &l = eval(e.children()[0]);
      const ValueSet &r = eval(e.children()[1]);
      if (l.infinite || r.infinite)
        return infinite_set();
      if (l.values.size() * r.values.size() > kPairCap)
        return infinite_set();
      ValueSet vs;
      for (std::int64_t a : l.values)
        for (std::int64_t b : r.values)
          if (auto v = eval_binop_concrete(e.binop_kind(), a, b))
            if (!add(vs, *v))
              return vs;
      return vs;
    }
    case LatticeElem::Kind::UnOp: {
      const ValueSet &c = eval(e.children()[0]);
      if (c.infinite)
        return infinite_set();
      ValueSet vs;
      for (std::int64_t a : c.values)
        if (!add(vs, eval_unop_concrete(e.unop_kind(), a)))
          return vs;
      return vs;
    }
    case LatticeElem::Kind::Phi: {
      ValueSet vs;
      for (const LatticeElem &c : e.children()) {
        const ValueSet &cs = eval(c);
        if (cs.infinite)
          return infinite_set();
        for (std::int64_t v : cs.values)
          if (!add(vs, v))
            return vs;
      }
      return vs;
    }
    case LatticeElem::Kind::FnCall:
      return compute_call(e);
    }
    return infinite_set();
  }

  ValueSet compute_prim(const Primitive &pr) {
    ValueSet vs;
    switch (pr.kind) {
    case Primitive::Kind::Const:
      add(vs, pr.value);
      return vs;
    case Primitive::Kind::Arg: {
      std::size_t i = static_cast<std::size_t>(pr.index);
      if (i < binding.args.size() && binding.args[i].is_int())
        add(vs, binding.args[i].i);
      return vs; // pointer or out-of-range argument covers no integer
    }
    case Primitive::Kind::Mem: {
      auto it = binding.initial_heap.find(pr.object);
      if (it != binding.initial_heap.end())
        add(vs, it->second);
      return vs;
    }
    case Primitive::Kind::Global: {
      auto it = binding.globals.find(pr.object);
      if (it != binding.globals.end())
        add(vs, it->second);
      return vs;
    }
    }
    return vs;
  }

  ValueSet compute_call(const LatticeElem &e) {
    const ir::Function *callee =
        binding.program ? binding.program->function(e.fn_name()) : nullptr;
    const bool stubbed =
        binding.stubs && binding.stubs->fns.count(e.fn_name()) > 0;
    if (!callee && !stubbed)
      return infinite_set(); // unknown external: any value

    std::vector<std::vector<std::int64_t>> argvals;
    std::size_t tuples = 1;
    for (const LatticeElem &c : e.children()) {
      const ValueSet &cs = eval(c);
      if (cs.infinite)
        return infinite_set();
      if (cs.values.empty())
        return {}; // no argument tuple exists
      argvals.emplace_back(cs.values.begin(), cs.values.end());
      tuples *= argvals.back().size();
      if (tuples > kCallTupleCap)
        return infinite_set();
    }

    ValueSet vs;
    std::vector<std::size_t> idx(argvals.size(), 0);
    for (;;) {
      std::vector<std::int64_t> tuple;
      tuple.reserve(argvals.size());
      for (std::size_t i = 0; i < argvals.size(); ++i)
        tuple.push_back(argvals[i][idx[i]]);

      std::optional<std::int64_t> r;
      if (callee) {
        std::vector<ConcreteValue> cargs;
        cargs.reserve(tuple.size());
        for (std::int64_t v : tuple)
          cargs.push_back(ConcreteValue::integer(v));
        ConcreteHeap heap;
        for (const auto &[obj, v] : binding.globals)
          heap[obj] = ConcreteValue::integer(v);
        static const StubTable empty_stubs;
        RunResult run = run_concrete(
            *binding.program, callee->name, std::move(cargs), std::move(heap),
            binding.stubs ? *binding.stubs : empty_stubs, binding.fuel,
            /*record_trace=*/false);
        if (!run.trapped && run.ret.is_int())
          r = run.ret.i;
      } else {
        r = binding.stubs->fns.at(e.fn_name())(tuple);
      }
      if (r && !add(vs, *r))
        return vs;

      std::size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < argvals[i].size())
          break;
        idx[i] = 0;
      }
      if (i == idx.size())
        break;
    }
    return vs;
  }
};

} // namespace

bool concretize_member(std::int64_t value, const LatticeElem &elem,
                       const Binding &binding) {
  Concretizer c{binding, {}};
  return c.member(value, elem);
}

//===----------------------------------------------------------------------===//
// Soundness fuzzing
//===----------------------------------------------------------------------===//

// Local cells of other frames are out of scope for a function's abstract
// state; globals are always in scope.
static bool cell_in_scope(const MemObject &o, const std::string &fn) {
  return is_global_cell(o) || owned_local(o, fn);
}

SoundnessReport soundness_check(const ir::Program &p, const std::string &fname,
                                const SoundnessOptions &opts) {
  const ir::Function *target = p.function(fname);
  if (!target)
    throw std::invalid_argument("no such function: " + fname);

  AnalysisOptions aopts;
  aopts.mode = opts.mode;
  aopts.widen_depth = opts.widen_depth;
  aopts.entry = fname;
  aopts.pointer_mode = opts.pointer_mode;
  aopts.join_as_meet = opts.join_as_meet;
  AnalysisResult ares = analyze_program(p, aopts);

  // Per-statement abstract pre-states, folded once from the fixpoint.
  std::map<std::string, std::map<std::string, std::vector<AbstractState>>> pre;
  for (const ir::Function &f : p.functions) {
    auto fit = ares.functions.find(f.name);
    if (fit == ares.functions.end())
      continue;
    TransferContext ctx;
    ctx.program = &p;
    ctx.function = &f;
    ctx.pointer_mode = opts.pointer_mode;
    ctx.frozen_pts = &ares.points_to_pre;
    ctx.calls = ares.call_evaluator.get();
    for (const ir::Block &b : f.blocks) {
      auto init = fit->second.in_states.find(b.label);
      AbstractState in =
          init != fit->second.in_states.end() ? init->second : AbstractState{};
      pre[f.name][b.label] = block_prestates(in, b, ctx);
    }
  }

  auto pts_of = [&](const AbstractState &st, const PtsKey &key)
      -> const PtsSet & {
    if (ares.used_pre) {
      static const PtsSet empty;
      auto it = ares.points_to_pre.find(key);
      return it != ares.points_to_pre.end() ? it->second : empty;
    }
    return pts_read(st, key);
  };

  CallGraph cg = build_call_graph(p);
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::int64_t> val_dist(-opts.value_range,
                                                       opts.value_range);
  std::uniform_int_distribution<std::int64_t> coef_dist(-3, 3);

  SoundnessReport rep;
  for (long trial = 0; trial < opts.trials; ++trial) {
    rep.trials++;

    std::vector<ConcreteValue> args;
    for (std::size_t i = 0; i < target->params.size(); ++i)
      args.push_back(ConcreteValue::integer(val_dist(rng)));
    std::map<MemObject, std::int64_t> globals;
    ConcreteHeap heap0;
    for (const ir::GlobalDecl &g : p.globals) {
      std::int64_t v = val_dist(rng);
      MemObject o = global_object(g.name);
      globals[o] = v;
      heap0[o] = ConcreteValue::integer(v);
    }
    StubTable stubs;
    for (const std::string &ext : cg.externals) {
      std::int64_t a = coef_dist(rng);
      std::int64_t b = coef_dist(rng);
      stubs.fns[ext] = [a, b](std::span<const std::int64_t> xs)
          -> std::optional<std::int64_t> {
        std::int64_t acc = b;
        for (std::int64_t x : xs)
          acc = wrap_add(acc, wrap_mul(a, x));
        return acc;
      };
    }

    RunResult run = run_concrete(p, fname, args, heap0, stubs, opts.fuel);
    if (run.trapped) {
      rep.trapped++;
      continue;
    }
    rep.executed++;

    // Interprocedural summaries only accumulate contexts from evaluated call
    // sites; calls that close a cycle fall back to an uninterpreted symbol,
    // so activations of cyclic functions (and anything they call) may run
    // under contexts the analysis never saw. Those frames are out of scope
    // for the per-point check; the caller-side check of the fallback symbol
    // still covers the call's result.
    std::vector<bool> covered(run.frames.size(), true);
    if (opts.mode == AnalysisMode::Inter) {
      for (std::size_t i = 1; i < run.frames.size(); ++i) {
        const FrameInfo &fr = run.frames[i];
        bool parent_ok = fr.parent < 0 ||
                         covered[static_cast<std::size_t>(fr.parent)];
        covered[i] = parent_ok && !cg.in_cycle(fr.function);
      }
    }

    Binding root_binding;
    root_binding.args = args;
    root_binding.globals = globals;
    root_binding.initial_heap = globals;
    root_binding.stubs = &stubs;
    root_binding.program = &p;
    root_binding.fuel = opts.fuel;

    // One concretizer per binding so enumeration caches stay valid; intra
    // mode interprets every frame against its own entry snapshot.
    std::map<int, Binding> frame_bindings;
    std::map<int, Concretizer> concretizers;
    auto concretizer_for = [&](const TracePoint &tp) -> Concretizer & {
      int key = opts.mode == AnalysisMode::Inter ? -1 : tp.frame;
      auto it = concretizers.find(key);
      if (it != concretizers.end())
        return it->second;
      if (key == -1)
        return concretizers.emplace(key, Concretizer{root_binding, {}})
            .first->second;
      const FrameInfo &fr = run.frames.at(static_cast<std::size_t>(tp.frame));
      Binding b;
      b.args = fr.args;
      for (const auto &[obj, v] : fr.heap_at_entry) {
        if (!v.is_int())
          continue;
        b.initial_heap[obj] = v.i;
        if (is_global_cell(obj))
          b.globals[obj] = v.i;
      }
      b.stubs = &stubs;
      b.program = &p;
      b.fuel = opts.fuel;
      Binding &stored = frame_bindings.emplace(key, std::move(b)).first->second;
      return concretizers.emplace(key, Concretizer{stored, {}}).first->second;
    };

    for (const TracePoint &tp : run.trace) {
      if (!covered[static_cast<std::size_t>(tp.frame)])
        continue;
      auto fpre = pre.find(tp.function);
      if (fpre == pre.end())
        continue;
      auto bpre = fpre->second.find(tp.block);
      if (bpre == fpre->second.end())
        continue;
      const AbstractState &st =
          bpre->second.at(static_cast<std::size_t>(tp.stmt_index));
      rep.points_checked++;
      Concretizer &cz = concretizer_for(tp);

      auto record = [&](const std::string &subject, std::string concrete,
                        std::string abstract) {
        rep.total_violations++;
        if (rep.violations.size() < opts.max_recorded_violations)
          rep.violations.push_back(SoundnessViolation{
              trial, tp.function, tp.block, tp.stmt_index, subject,
              std::move(concrete), std::move(abstract)});
      };
      auto render_pts = [](const PtsSet &s) {
        std::string out = "{";
        for (const MemObject &o : s) {
          if (out.size() > 1)
            out += ", ";
          out += to_string(o);
        }
        return out + "}";
      };

      for (const auto &[var, val] : tp.env) {
        if (val.is_int()) {
          rep.memberships++;
          LatticeElem a = sigma_read(st, var);
          if (!cz.member(val.i, a))
            record(var, to_string(val), to_string(a));
        } else {
          const PtsSet &s = pts_of(st, PtsKey::for_var(var));
          if (!s.count(val.obj))
            record(var, to_string(val), render_pts(s));
        }
      }
      for (const auto &[obj, val] : tp.heap) {
        if (!cell_in_scope(obj, tp.function))
          continue;
        if (val.is_int()) {
          rep.memberships++;
          LatticeElem a = mem_read(st, obj);
          if (!cz.member(val.i, a))
            record(to_string(obj), to_string(val), to_string(a));
        } else {
          const PtsSet &s = pts_of(st, PtsKey::for_obj(obj));
          if (!s.count(val.obj))
            record(to_string(obj), to_string(val), render_pts(s));
        }
      }
    }
  }
  return rep;
}

} // namespace pva
