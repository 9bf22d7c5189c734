#ifndef QSTOKES_IO_HPP
#define QSTOKES_IO_HPP

#include <string>

#include <json.hpp>

#include "qstokes/module_rep.hpp"
#include "qstokes/special.hpp"
#include "qstokes/newton.hpp"

namespace qstokes {

// File format: q as {re, im}; blocks as {slope, matrix of {re, im}}; u keyed
// by "i,j" (1-based, i < j) with sparse {exp, re, im} entries.  Operator
// files instead carry "operator" keyed by degree.
nlohmann::json complex_to_json(const Complex& z);
Complex complex_from_json(const nlohmann::json& j, const std::string& field);

BlockModule parse_module(const nlohmann::json& j);
BlockModule parse_module_file(const std::string& path);
nlohmann::json emit_module(const BlockModule& m);

bool is_operator_description(const nlohmann::json& j);
QDiffOperator parse_operator(const nlohmann::json& j);

std::string dump_deterministic(const nlohmann::json& j);

} // namespace qstokes

#endif
