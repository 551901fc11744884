#pragma once

#include <string>
#include <vector>

#include "qtsp/circuits.hpp"
#include "qtsp/encodings.hpp"
#include "qtsp/optimizer.hpp"
#include "qtsp/resources.hpp"

namespace qtsp {

std::string instance_to_json(const TspInstance& inst);

/// Accepts {"n", "w", "a1", "a2", "b"}; weights must form an n x n matrix.
TspInstance instance_from_json(const std::string& text);

/// Compact encoding summary: kind, register size, term count and order (null
/// for the rank encoding), layout shape.
std::string problem_summary_json(const EncodedProblem& problem);

std::string polynomial_to_json(const BinaryPolynomial& p);

/// Depths, widths and (optionally) every gate of a schedule.
std::string schedule_to_json(const GateSchedule& s, bool include_gates);

std::string reports_to_json(const std::vector<ResourceReport>& rows);

/// Fixed-width text table of the same rows, one line per (kind, n).
std::string reports_to_table(const std::vector<ResourceReport>& rows);

/// Applies OptimizerConfig fields present in a JSON object; unknown keys are
/// rejected so typos cannot silently fall back to defaults.
void apply_config_json(const std::string& text, OptimizerConfig& cfg);

}  // namespace qtsp
