#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <type_traits>

namespace nilcohom {

/// Exact coefficient field. GMP keeps results of arithmetic canonical
/// (lowest terms, positive denominator).
using Rational = mpq_class;

/// Parses "p", "p/q" or a finite decimal such as "-1.25" exactly.
/// Throws ParseError on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Uniform conversion used by code templated on the scalar type.
template <class Scalar>
Scalar scalar_cast(const Rational& q)
{
	if constexpr (std::is_same_v<Scalar, Rational>)
		return q;
	else
		return static_cast<Scalar>(q.get_d());
}

} // namespace nilcohom
