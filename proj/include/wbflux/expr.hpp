#ifndef WBFLUX_EXPR_HPP
#define WBFLUX_EXPR_HPP

#include <string>

#include "wbflux/numerics.hpp"

namespace wbflux {

/// Compiles a scalar expression in one free variable into a callable.
/// Supported: numbers, the named variable, pi and e, + - * / ^, comparisons
/// (< > <= >=, yielding 0/1), parentheses, and the functions sin cos tan
/// sinh cosh tanh exp log sqrt abs sign atan min max pow if(cond, a, b).
/// Throws ConfigError on malformed input.
RealFn compile_expression(const std::string& text, const std::string& variable);

}  // namespace wbflux

#endif
