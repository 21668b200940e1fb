#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dendro {

/// Exact rational scalar used by the symbolic layer.
using Rational = mpq_class;

/// Parses "3", "-1/2", "12/8" (normalized). Throws ParseError.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" or "p" rendering.
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace dendro
