#pragma once

#include <string>

#include "wirt/expr.hpp"

namespace wirt {

// Render an expression in the input language. For canonicalized expressions
// the output parses back to the same canonical form (Series and Bilinear
// nodes, which have no surface syntax, print in a debug form instead).
std::string pretty_print(const ScalarExpr& e);
std::string pretty_print(const MatrixExpr& e);

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Scalar literal: "2", "-0.5", "2i", "(1+2i)".
std::string format_complex(cxd v);

}  // namespace wirt
