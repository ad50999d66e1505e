//===- test_interproc.cpp - Call graphs and interprocedural summaries -----===//

#include "doctest.h"

#include <algorithm>

#include "pva/interproc.hpp"
#include "pva/pointer.hpp"
#include "support/corpus.hpp"

using namespace pva;

namespace {

const LatticeElem T = LatticeElem::top();
const LatticeElem B = LatticeElem::bottom();

AnalysisOptions options(AnalysisMode mode) {
  AnalysisOptions o;
  o.mode = mode;
  return o;
}

AnalysisResult analyze(const std::string &file, AnalysisMode mode) {
  ir::Program p = testgen::load_corpus(file);
  return analyze_program(p, options(mode));
}

std::string ret_str(const AnalysisResult &r, const std::string &fn) {
  return to_string(r.functions.at(fn).return_value);
}

std::string sigma_str(const AnalysisResult &r, const std::string &fn,
                      const std::string &var) {
  return to_string(sigma_read(r.functions.at(fn).exit_state, var));
}

void check_site(const CallSite &site, const std::string &caller,
                const std::string &callee, const std::string &block,
                int stmt_index) {
  CHECK(site.caller == caller);
  CHECK(site.callee == callee);
  CHECK(site.block == block);
  CHECK(site.stmt_index == stmt_index);
}

ir::Program parse_src(const std::string &src) {
  ir::Program p = ir::parse_program(src);
  ir::validate(p);
  return p;
}

} // namespace

TEST_CASE("call graph: single defined edge, no cycles") {
  ir::Program p = testgen::load_corpus("call_intra.ir");
  CallGraph cg = build_call_graph(p);

  CHECK(cg.nodes == std::vector<std::string>{"add", "main"});
  REQUIRE(cg.edges.size() == 1);
  check_site(cg.edges[0], "main", "add", "entry", 1);
  CHECK(cg.externals.empty());
  CHECK(cg.cyclic.empty());
  CHECK_FALSE(cg.in_cycle("add"));
  CHECK_FALSE(cg.in_cycle("main"));
}

TEST_CASE("call graph: self-recursion is a cycle") {
  ir::Program p = testgen::load_corpus("factorial.ir");
  CallGraph cg = build_call_graph(p);

  CHECK(cg.nodes == std::vector<std::string>{"fact", "main"});
  REQUIRE(cg.edges.size() == 2); // program order: fact's site, then main's
  check_site(cg.edges[0], "fact", "fact", "rec", 1);
  check_site(cg.edges[1], "main", "fact", "entry", 0);
  CHECK(cg.externals.empty());
  CHECK(cg.cyclic == std::set<std::string>{"fact"});
  CHECK(cg.in_cycle("fact"));
  CHECK_FALSE(cg.in_cycle("main"));
}

TEST_CASE("call graph: mutual recursion marks both partners cyclic") {
  ir::Program p = testgen::load_corpus("mutual.ir");
  CallGraph cg = build_call_graph(p);

  CHECK(cg.nodes == std::vector<std::string>{"is_even", "is_odd", "main"});
  REQUIRE(cg.edges.size() == 3);
  check_site(cg.edges[0], "is_even", "is_odd", "chk", 1);
  check_site(cg.edges[1], "is_odd", "is_even", "chk", 1);
  check_site(cg.edges[2], "main", "is_even", "entry", 1);
  CHECK(cg.cyclic == std::set<std::string>{"is_even", "is_odd"});
  CHECK_FALSE(cg.in_cycle("main"));
}

TEST_CASE("call graph: undefined callees are edges and externals") {
  ir::Program p = testgen::load_corpus("external_call.ir");
  CallGraph cg = build_call_graph(p);

  CHECK(cg.nodes == std::vector<std::string>{"main"});
  REQUIRE(cg.edges.size() == 2);
  check_site(cg.edges[0], "main", "read_input", "entry", 0);
  check_site(cg.edges[1], "main", "read_input", "entry", 1);
  CHECK(cg.externals == std::set<std::string>{"read_input"});
  CHECK(cg.cyclic.empty());
}

TEST_CASE("call graph: corpus-wide structural consistency") {
  for (const auto &path : testgen::corpus_files()) {
    ir::Program p = testgen::load_corpus(path.filename().string());
    CallGraph cg = build_call_graph(p);

    REQUIRE(cg.nodes.size() == p.functions.size());
    for (std::size_t i = 0; i < cg.nodes.size(); ++i)
      CHECK(cg.nodes[i] == p.functions[i].name);

    std::size_t call_stmts = 0;
    for (const ir::Function &f : p.functions)
      for (const ir::Block &b : f.blocks)
        for (const ir::Statement &s : b.stmts)
          if (s.get_if<ir::Call>())
            ++call_stmts;
    CHECK(cg.edges.size() == call_stmts);

    for (const CallSite &e : cg.edges) {
      CHECK(p.function(e.caller) != nullptr);
      // Every callee is either defined or recorded external, never both.
      bool defined = p.function(e.callee) != nullptr;
      CHECK(defined != (cg.externals.count(e.callee) > 0));
    }
    for (const std::string &fn : cg.cyclic) {
      CHECK(p.function(fn) != nullptr);
      CHECK(cg.in_cycle(fn));
    }
  }
}

TEST_CASE("intra mode leaves calls as uninterpreted symbols") {
  AnalysisResult r = analyze("call_intra.ir", AnalysisMode::Intra);

  CHECK(r.functions.size() == 2);
  CHECK(ret_str(r, "add") == "(+ arg(0) arg(1))");
  CHECK(ret_str(r, "main") ==
        "(* add((+ arg(0) const(1)),arg(1)) const(2))");
  CHECK(sigma_str(r, "main", "r") == "add((+ arg(0) const(1)),arg(1))");
  CHECK(r.call_evaluator == nullptr);
  CHECK_FALSE(r.used_pre);
  CHECK(r.points_to_pre.empty());
}

TEST_CASE("inter mode substitutes callee summaries at call sites") {
  AnalysisResult r = analyze("call_intra.ir", AnalysisMode::Inter);

  // add is solved under its accumulated entry context u=(+ arg(0) const(1)),
  // v=arg(1), so its reported states are phrased in main's terms.
  CHECK(ret_str(r, "add") == "(+ (+ arg(0) const(1)) arg(1))");
  CHECK(sigma_str(r, "add", "u") == "(+ arg(0) const(1))");
  CHECK(sigma_str(r, "add", "v") == "arg(1)");

  CHECK(sigma_str(r, "main", "r") == "(+ (+ arg(0) const(1)) arg(1))");
  CHECK(ret_str(r, "main") == "(* (+ (+ arg(0) const(1)) arg(1)) const(2))");
  CHECK(r.functions.at("main").iterations == 1);
  CHECK(r.call_evaluator != nullptr);
}

TEST_CASE("summaries join entry contexts across call sites") {
  ir::Program p = parse_src("func id(x) {\n"
                            "entry:\n"
                            "  return x\n"
                            "}\n"
                            "func main(a) {\n"
                            "entry:\n"
                            "  r1 = call id(1)\n"
                            "  r2 = call id(2)\n"
                            "  s = r1 + r2\n"
                            "  return s\n"
                            "}\n");
  AnalysisResult r = analyze_program(p, options(AnalysisMode::Inter));

  // join(const(1), const(2)) = T flows into the shared context, so both
  // sites see the merged summary even though each passed a constant.
  CHECK(sigma_read(r.functions.at("main").exit_state, "r1") == T);
  CHECK(sigma_read(r.functions.at("main").exit_state, "r2") == T);
  CHECK(ret_str(r, "main") == "(+ T T)");
  CHECK(ret_str(r, "id") == "T");

  auto engine = std::dynamic_pointer_cast<InterEngine>(r.call_evaluator);
  REQUIRE(engine != nullptr);
  const InterEngine::Summary &sum = engine->summaries().at("id");
  CHECK(sum.solved);
  CHECK(sigma_read(sum.entry, "x") == T);
  CHECK(sum.ret == T);
  // The reported iteration count accumulates over both solves of id.
  CHECK(r.functions.at("id").iterations == 2);
}

TEST_CASE("self-recursion falls back to the opaque symbol inside the cycle") {
  AnalysisResult intra = analyze("factorial.ir", AnalysisMode::Intra);
  AnalysisResult inter = analyze("factorial.ir", AnalysisMode::Inter);

  // The recursive site declines evaluation while fact is on the stack, so
  // the body keeps the uninterpreted fact(...) symbol in both modes and the
  // two return arms join to T.
  CHECK(sigma_str(inter, "fact", "r") == "fact((- arg(0) const(1)))");
  CHECK(ret_str(intra, "fact") == "T");
  CHECK(ret_str(inter, "fact") == "T");

  // Only main differs: intra keeps the call symbolic, inter adopts T.
  CHECK(ret_str(intra, "main") == "fact(arg(0))");
  CHECK(ret_str(inter, "main") == "T");
  CHECK(sigma_read(inter.functions.at("main").exit_state, "x") == T);
}

TEST_CASE("mutual recursion terminates and summarizes both partners") {
  AnalysisResult r = analyze("mutual.ir", AnalysisMode::Inter);

  CHECK(r.functions.size() == 3);
  CHECK(ret_str(r, "is_even") == "T");
  CHECK(ret_str(r, "is_odd") == "T");
  CHECK(ret_str(r, "main") == "T");

  auto engine = std::dynamic_pointer_cast<InterEngine>(r.call_evaluator);
  REQUIRE(engine != nullptr);
  CHECK(engine->summaries().count("is_even") == 1);
  CHECK(engine->summaries().count("is_odd") == 1);
}

TEST_CASE("external calls stay symbolic in both modes") {
  AnalysisResult intra = analyze("external_call.ir", AnalysisMode::Intra);
  AnalysisResult inter = analyze("external_call.ir", AnalysisMode::Inter);

  const std::string expected =
      "(+ read_input(arg(0)) read_input(read_input(arg(0))))";
  CHECK(ret_str(intra, "main") == expected);
  CHECK(ret_str(inter, "main") == expected);
  CHECK(intra.functions.at("main").exit_state ==
        inter.functions.at("main").exit_state);
}

TEST_CASE("zero-argument calls evaluate interprocedurally") {
  AnalysisResult intra = analyze("call_zero_args.ir", AnalysisMode::Intra);
  AnalysisResult inter = analyze("call_zero_args.ir", AnalysisMode::Inter);

  CHECK(sigma_str(intra, "main", "x") == "five()");
  CHECK(ret_str(intra, "main") == "(+ five() arg(0))");
  CHECK(sigma_str(inter, "main", "x") == "const(5)");
  CHECK(ret_str(inter, "main") == "(+ const(5) arg(0))");
}

TEST_CASE("stores through pointer parameters surface only in inter mode") {
  AnalysisResult intra =
      analyze("callee_writes_pointer.ir", AnalysisMode::Intra);
  AnalysisResult inter =
      analyze("callee_writes_pointer.ir", AnalysisMode::Inter);
  MemObject g0 = global_object("g");

  // Intra: the call is memory-free, so y reloads main's own store of arg(0)
  // and set_five in isolation stores through an alias-free parameter.
  CHECK(sigma_str(intra, "main", "x") == "set_five(B)");
  CHECK(sigma_str(intra, "main", "y") == "arg(0)");
  CHECK(ret_str(intra, "main") == "(+ arg(0) set_five(B))");
  CHECK(intra.functions.at("main").exit_state.mem.at(g0) ==
        LatticeElem::argument(0));
  REQUIRE(intra.diagnostics.size() == 1);
  CHECK(intra.diagnostics[0].function == "set_five");
  CHECK(intra.diagnostics[0].block == "entry");
  CHECK(intra.diagnostics[0].stmt_index == 0);
  CHECK(intra.diagnostics[0].code == "store-empty-points-to");

  // Inter: q inherits g's points-to from the call site, the callee's write
  // of const(5) lands in g+0, and the reload observes it.
  CHECK(sigma_str(inter, "main", "x") == "const(0)");
  CHECK(sigma_str(inter, "main", "y") == "const(5)");
  CHECK(ret_str(inter, "main") == "(+ const(5) const(0))");
  CHECK(inter.functions.at("main").exit_state.mem.at(g0) ==
        LatticeElem::constant(5));
  CHECK(inter.diagnostics.empty());

  // set_five's reported exit reflects its call-site context: q was bound to
  // the B data value of g, which normalization drops from sigma.
  CHECK(inter.functions.at("set_five").exit_state.sigma.count("q") == 0);
  CHECK(sigma_str(inter, "set_five", "z") == "const(0)");
  CHECK(inter.functions.at("set_five").exit_state.mem.at(g0) ==
        LatticeElem::constant(5));
}

TEST_CASE("inlined pair programs match their flattened twins") {
  for (int i = 1; i <= 5; ++i) {
    const std::string stem = "pair" + std::to_string(i);
    AnalysisResult call = analyze(stem + "_call.ir", AnalysisMode::Inter);
    AnalysisResult flat = analyze(stem + "_flat.ir", AnalysisMode::Inter);
    CAPTURE(stem);
    CHECK(call.functions.at("main").return_value ==
          flat.functions.at("main").return_value);
    CHECK(ret_str(call, "main") == ret_str(flat, "main"));
  }

  // The agreement is earned by call evaluation: intra mode on the calling
  // variant keeps an opaque symbol and disagrees with its own inter result.
  AnalysisResult intra1 = analyze("pair1_call.ir", AnalysisMode::Intra);
  AnalysisResult inter1 = analyze("pair1_call.ir", AnalysisMode::Inter);
  CHECK(intra1.functions.at("main").return_value !=
        inter1.functions.at("main").return_value);
}

TEST_CASE("functions unreachable from the entry are still analyzed") {
  ir::Program p = parse_src("func helper(h) {\n"
                            "entry:\n"
                            "  t = h * h\n"
                            "  return t\n"
                            "}\n"
                            "func main(a) {\n"
                            "entry:\n"
                            "  r = a + 1\n"
                            "  return r\n"
                            "}\n");
  AnalysisResult r = analyze_program(p, options(AnalysisMode::Inter));

  REQUIRE(r.functions.size() == 2);
  CHECK(ret_str(r, "helper") == "(* arg(0) arg(0))");
  CHECK(ret_str(r, "main") == "(+ arg(0) const(1))");
}

TEST_CASE("unreachable roots feed the same context-insensitive summaries") {
  ir::Program p = parse_src("func helper(h) {\n"
                            "entry:\n"
                            "  t = call add(h, h)\n"
                            "  return t\n"
                            "}\n"
                            "func add(u, v) {\n"
                            "entry:\n"
                            "  w = u + v\n"
                            "  return w\n"
                            "}\n"
                            "func main(a) {\n"
                            "entry:\n"
                            "  r = call add(a, 1)\n"
                            "  return r\n"
                            "}\n");
  AnalysisResult r = analyze_program(p, options(AnalysisMode::Inter));

  // helper joins v's context from const(1) to T; the convergence loop then
  // re-solves main so its reported result agrees with the merged summary.
  CHECK(ret_str(r, "add") == "(+ arg(0) T)");
  CHECK(ret_str(r, "helper") == "(+ arg(0) T)");
  CHECK(ret_str(r, "main") == "(+ arg(0) T)");
  CHECK(r.functions.at("add").iterations == 2);
}

TEST_CASE("missing entry function throws only in inter mode") {
  ir::Program p = testgen::load_corpus("call_intra.ir");

  AnalysisOptions inter = options(AnalysisMode::Inter);
  inter.entry = "nope";
  try {
    analyze_program(p, inter);
    FAIL("expected EntryNotFound");
  } catch (const EntryNotFound &e) {
    CHECK(e.name == "nope");
  }

  // Intra mode never consults the entry name.
  AnalysisOptions intra = options(AnalysisMode::Intra);
  intra.entry = "nope";
  AnalysisResult r = analyze_program(p, intra);
  CHECK(r.functions.size() == 2);
}

TEST_CASE("iteration budget propagates through call evaluation") {
  ir::Program p = testgen::load_corpus("factorial.ir");

  AnalysisOptions opts = options(AnalysisMode::Inter);
  opts.max_iterations = 2;
  try {
    analyze_program(p, opts);
    FAIL("expected IterationBudgetExceeded");
  } catch (const IterationBudgetExceeded &e) {
    // fact (three blocks) trips the budget inside main's call evaluation.
    CHECK(e.function == "fact");
    CHECK(e.budget == 2);
  }

  opts.max_iterations = 0; // default budget is ample
  CHECK(analyze_program(p, opts).functions.size() == 2);
}

TEST_CASE("transfer_call_inter evaluates a single call statement") {
  ir::Program p = testgen::load_corpus("call_intra.ir");
  InterEngine engine(p, options(AnalysisMode::Inter));
  const ir::Function &mainf = *p.function("main");

  AbstractState st = initial_state(mainf, p);
  st.sigma["t"] = LatticeElem::constant(7);
  ir::Call call;
  call.dst = "r";
  call.callee = "add";
  call.args = {ir::Operand::variable("t"), ir::Operand::variable("b")};

  AbstractState out = engine.transfer_call_inter(st, call, mainf);
  CHECK(to_string(sigma_read(out, "r")) == "(+ const(7) arg(1))");
  CHECK(sigma_read(out, "t") == LatticeElem::constant(7)); // untouched
}

TEST_CASE("diagnostics follow program function order") {
  // zfirst precedes afirst in the program but not alphabetically, so this
  // ordering cannot come from the functions map.
  ir::Program p = parse_src("func zfirst(a) {\n"
                            "entry:\n"
                            "  p = a + 0\n"
                            "  y = *p\n"
                            "  return y\n"
                            "}\n"
                            "func afirst(b) {\n"
                            "entry:\n"
                            "  q = b + 0\n"
                            "  *q = 1\n"
                            "  r = b + 1\n"
                            "  return r\n"
                            "}\n"
                            "func main(c) {\n"
                            "entry:\n"
                            "  return c\n"
                            "}\n");

  for (AnalysisMode mode : {AnalysisMode::Intra, AnalysisMode::Inter}) {
    AnalysisResult r = analyze_program(p, options(mode));
    REQUIRE(r.diagnostics.size() == 2);
    CHECK(r.diagnostics[0].function == "zfirst");
    CHECK(r.diagnostics[0].code == "load-empty-points-to");
    CHECK(r.diagnostics[1].function == "afirst");
    CHECK(r.diagnostics[1].code == "store-empty-points-to");
  }
}

TEST_CASE("pre pointer mode fills points_to_pre in both analysis modes") {
  ir::Program p = testgen::load_corpus("callee_writes_pointer.ir");
  MemObject g0 = global_object("g");

  for (AnalysisMode mode : {AnalysisMode::Intra, AnalysisMode::Inter}) {
    AnalysisOptions opts = options(mode);
    opts.pointer_mode = PointerMode::Pre;
    AnalysisResult r = analyze_program(p, opts);
    CHECK(r.used_pre);
    REQUIRE(r.points_to_pre.count(PtsKey::for_var("g")) == 1);
    CHECK(r.points_to_pre.at(PtsKey::for_var("g")) == PtsSet{g0});
    CHECK(r.points_to_pre == pa_preanalyze(p));

    AnalysisOptions flow = options(mode);
    AnalysisResult rf = analyze_program(p, flow);
    CHECK_FALSE(rf.used_pre);
    CHECK(rf.points_to_pre.empty());
  }
}

TEST_CASE("inter mode results are worklist-seed invariant") {
  for (const char *file : {"factorial.ir", "callee_writes_pointer.ir",
                           "mutual.ir", "pair4_call.ir"}) {
    ir::Program p = testgen::load_corpus(file);
    AnalysisOptions base = options(AnalysisMode::Inter);
    AnalysisResult r0 = analyze_program(p, base);
    for (unsigned seed : {1u, 99u}) {
      AnalysisOptions seeded = base;
      seeded.worklist_seed = seed;
      AnalysisResult rs = analyze_program(p, seeded);
      CAPTURE(file);
      CAPTURE(seed);
      REQUIRE(rs.functions.size() == r0.functions.size());
      for (const auto &[name, fr] : r0.functions) {
        CHECK(rs.functions.at(name).return_value == fr.return_value);
        CHECK(rs.functions.at(name).exit_state == fr.exit_state);
      }
      CHECK(rs.diagnostics.size() == r0.diagnostics.size());
    }
  }
}
