// Text input: the polynomial expression grammar used by all CLI commands
// (integer/rational literals, variable x, + - * / ^, parentheses), a JSON
// coefficient-array alternative, and rational literals.
#pragma once

#include <string>

#include "arbordyn/poly_q.hpp"

namespace arbordyn::exactalg {

// "1 - x^3", "(x^2-2)*(x-1)^3 + 5", "x^2/3 + 1/2", or a JSON array of
// coefficients lowest degree first, e.g. "[1, 0, \"1/3\"]".
PolyQ parse_poly(const std::string& text);

// "-3/7", "5"
Rat parse_rational(const std::string& text);

}  // namespace arbordyn::exactalg
