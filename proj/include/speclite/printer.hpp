#pragma once

#include <string>

#include "speclite/ast.hpp"

namespace speclite {

/// Canonical concrete syntax. Parsing the output yields a structurally equal
/// interface.
std::string pretty_print(const SpecInterface& spec);

std::string print_term(const TermPtr& term);
std::string print_type(const LogicalType& type);

}  // namespace speclite
