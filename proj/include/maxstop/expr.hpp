#pragma once

#include <string_view>

#include "maxstop/numerics.hpp"

namespace maxstop {

/// Compiles a one-variable arithmetic expression in `x`.
///
/// Grammar: numbers, the variable `x`, the constant `pi`, binary `+ - * /`, unary minus,
/// parentheses and the functions `exp`, `log`, `abs`, `sqrt`, `pow(a, b)`. Errors are
/// reported as ErrorKind::parse with the offending position.
RealFn compile_expression(std::string_view text);

}  // namespace maxstop
