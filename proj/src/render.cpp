//===- render.cpp - Deterministic result rendering --------------------------===//

#include "pva/render.hpp"

#include <sstream>

#include "json.hpp"

namespace pva {

using nlohmann::json;

static std::string render_pts_set(const PtsSet &s) {
  std::string out = "{";
  bool first = true;
  for (const MemObject &o : s) {
    if (!first)
      out += ", ";
    first = false;
    out += to_string(o);
  }
  return out + "}";
}

std::string render_state(const AbstractState &s0) {
  AbstractState s = normalized(s0);
  std::ostringstream out;
  out << "sigma{";
  bool first = true;
  for (const auto &[var, elem] : s.sigma) {
    if (!first)
      out << ", ";
    first = false;
    out << var << " = " << to_string(elem);
  }
  out << "} mem{";
  first = true;
  for (const auto &[obj, elem] : s.mem) {
    if (!first)
      out << ", ";
    first = false;
    out << to_string(obj) << " = " << to_string(elem);
  }
  out << "} pts{";
  first = true;
  for (const auto &[key, set] : s.pts) {
    if (!first)
      out << ", ";
    first = false;
    out << to_string(key) << " -> " << render_pts_set(set);
  }
  out << "}";
  return out.str();
}

//===----------------------------------------------------------------------===//
// Text
//===----------------------------------------------------------------------===//

// A cell still at its initial symbol carries no information; text output
// keeps only written cells.
static bool cell_is_initial(const MemObject &o, const LatticeElem &v) {
  if (is_global_cell(o))
    return v == LatticeElem::global_init(o);
  return v.is_bottom();
}

static void render_state_text(std::ostringstream &out, const AbstractState &s0,
                              const char *indent) {
  AbstractState s = normalized(s0);
  for (const auto &[var, elem] : s.sigma)
    out << indent << var << " = " << to_string(elem) << "\n";
  for (const auto &[obj, elem] : s.mem)
    if (!cell_is_initial(obj, elem))
      out << indent << "mem[" << to_string(obj) << "] = " << to_string(elem)
          << "\n";
  for (const auto &[key, set] : s.pts)
    out << indent << "pts[" << to_string(key) << "] = " << render_pts_set(set)
        << "\n";
}

static std::string render_text(const ir::Program &p, const AnalysisResult &r) {
  std::ostringstream out;
  bool first_fn = true;
  for (const ir::Function &f : p.functions) {
    auto it = r.functions.find(f.name);
    if (it == r.functions.end())
      continue;
    const FunctionResult &fr = it->second;
    if (!first_fn)
      out << "\n";
    first_fn = false;
    out << "function " << f.name << " (iterations " << fr.iterations << ")\n";
    for (const ir::Block &b : f.blocks) {
      out << "  block " << b.label << "\n";
      auto in = fr.in_states.find(b.label);
      auto outs = fr.out_states.find(b.label);
      out << "    in:\n";
      if (in != fr.in_states.end())
        render_state_text(out, in->second, "      ");
      out << "    out:\n";
      if (outs != fr.out_states.end())
        render_state_text(out, outs->second, "      ");
    }
    out << "  return: " << to_string(fr.return_value) << "\n";
  }
  if (!r.diagnostics.empty()) {
    out << "\ndiagnostics:\n";
    for (const Diagnostic &d : r.diagnostics)
      out << "  " << d.function << "." << d.block << "[" << d.stmt_index
          << "]: " << d.code << ": " << d.message << "\n";
  }
  if (r.used_pre) {
    out << "\npoints-to (pre):\n";
    for (const auto &[key, set] : r.points_to_pre)
      out << "  " << to_string(key) << " = " << render_pts_set(set) << "\n";
  }
  return out.str();
}

//===----------------------------------------------------------------------===//
// JSON
//===----------------------------------------------------------------------===//

static json pts_set_json(const PtsSet &s) {
  json arr = json::array();
  for (const MemObject &o : s)
    arr.push_back(to_string(o));
  return arr;
}

static json state_json(const AbstractState &s0) {
  AbstractState s = normalized(s0);
  json sigma = json::object();
  for (const auto &[var, elem] : s.sigma)
    sigma[var] = to_string(elem);
  json mem = json::object();
  for (const auto &[obj, elem] : s.mem)
    mem[to_string(obj)] = to_string(elem);
  json pts = json::object();
  for (const auto &[key, set] : s.pts)
    pts[to_string(key)] = pts_set_json(set);
  return json{{"sigma", std::move(sigma)},
              {"mem", std::move(mem)},
              {"pts", std::move(pts)}};
}

static std::string render_json(const ir::Program &p, const AnalysisResult &r) {
  json out;
  json fns = json::object();
  for (const ir::Function &f : p.functions) {
    auto it = r.functions.find(f.name);
    if (it == r.functions.end())
      continue;
    const FunctionResult &fr = it->second;
    json blocks = json::object();
    for (const ir::Block &b : f.blocks) {
      json jb = json::object();
      auto in = fr.in_states.find(b.label);
      jb["in"] = in != fr.in_states.end() ? state_json(in->second)
                                          : state_json(AbstractState{});
      auto outs = fr.out_states.find(b.label);
      jb["out"] = outs != fr.out_states.end() ? state_json(outs->second)
                                              : state_json(AbstractState{});
      blocks[b.label] = std::move(jb);
    }
    fns[f.name] = json{{"blocks", std::move(blocks)},
                       {"return", to_string(fr.return_value)},
                       {"iterations", fr.iterations}};
  }
  out["functions"] = std::move(fns);
  json diags = json::array();
  for (const Diagnostic &d : r.diagnostics)
    diags.push_back(json{{"function", d.function},
                         {"block", d.block},
                         {"stmt", d.stmt_index},
                         {"code", d.code},
                         {"message", d.message}});
  out["diagnostics"] = std::move(diags);
  if (r.used_pre) {
    json pre = json::object();
    for (const auto &[key, set] : r.points_to_pre)
      pre[to_string(key)] = pts_set_json(set);
    out["points_to_pre"] = std::move(pre);
  }
  return out.dump(2) + "\n";
}

std::string render_result(const ir::Program &p, const AnalysisResult &r,
                          OutputFormat fmt) {
  return fmt == OutputFormat::Json ? render_json(p, r) : render_text(p, r);
}

} // namespace pva
