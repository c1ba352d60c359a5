#pragma once

#include "lzeta/problem.hpp"

#include <string>
#include <string_view>

namespace lzeta {

/// Reads the INI-like problem format:
///
///   [function]  f, dimension
///   [domain]    constraint (repeatable, each means g > 0), window_x, window_y, base
///   [cutoff]    kind, eta, c0, c1, multiplier, partition_c0, partition_c1
///   [run]       branch, depth, tol, order, max_subdivisions, abs_floor, max_terms
///
/// Lines are `key = value`; `#` and `;` start comments. Unknown sections or
/// keys, duplicates of single-valued keys and malformed values raise
/// ParseError with the line number; well-formed but unsupported content
/// (three variables, empty window) raises SemanticError.
Problem parse_problem(std::string_view text);

Problem load_problem(const std::string& path);

/// Canonical text for a problem. parse_problem(emit_problem(p)) reproduces p
/// and emits identical text again.
std::string emit_problem(const Problem& p);

}  // namespace lzeta
