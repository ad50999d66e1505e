//===- render.hpp - Deterministic result rendering -------------------------===//

#pragma once

#include <string>

#include "pva/interproc.hpp"

namespace pva {

enum class OutputFormat { Text, Json };

// Single-line canonical form of a state: sorted maps, canonical element
// strings. Used by tests to compare runs structurally.
std::string render_state(const AbstractState &s);

// Whole-program rendering. Text lists functions and blocks in program order
// and elides memory cells still at their initial symbol; JSON is a complete
// dump with sorted object keys:
//
//   {"diagnostics": [{"block","code","function","message","stmt"}...],
//    "functions": {name: {"blocks": {label: {"in": state, "out": state}},
//                         "iterations": n, "return": elem}},
//    "points_to_pre": {key: [cells...]}}        (pre pointer mode only)
//
// where state = {"sigma": {var: elem}, "mem": {cell: elem},
//                "pts": {key: [cells...]}}.
std::string render_result(const ir::Program &p, const AnalysisResult &r,
                          OutputFormat fmt);

} // namespace pva
