#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilcohom {

/// Root of every error raised by the library. Callers that only need a
/// message catch this; tools map it to a "domain/validation" exit status.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Malformed structure-constant input: indices out of range, i >= j,
/// duplicate (i, j) pairs, or a nonpositive dimension.
class InvalidAlgebra : public Error {
public:
	using Error::Error;
};

class JacobiViolation : public Error {
public:
	JacobiViolation(int i, int j, int k, std::vector<std::string> residual, const std::string& what)
		: Error(what), i(i), j(j), k(k), residual(std::move(residual)) {}

	int i, j, k;                       // 0-based offending triple
	std::vector<std::string> residual; // exact residual coordinates
};

class NotNilpotent : public Error {
public:
	NotNilpotent(std::vector<int> series, const std::string& what)
		: Error(what), series(std::move(series)) {}

	std::vector<int> series; // lower central series dimensions until it stabilized
};

class DegreeOverflow : public Error {
public:
	using Error::Error;
};

class DimensionMismatch : public Error {
public:
	using Error::Error;
};

/// Parse failure in the map expression language. Positions are 1-based
/// character columns; end of input is reported as length + 1.
class SyntaxError : public Error {
public:
	SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& what)
		: Error(what), position(position), expected(std::move(expected)) {}

	std::size_t position;
	std::vector<std::string> expected;
};

class UnknownSymbol : public Error {
public:
	UnknownSymbol(std::string symbol, std::size_t position, const std::string& what)
		: Error(what), symbol(std::move(symbol)), position(position) {}

	std::string symbol;
	std::size_t position;
};

class ArityError : public Error {
public:
	ArityError(std::string function, std::size_t got, std::size_t position, const std::string& what)
		: Error(what), function(std::move(function)), got(got), position(position) {}

	std::string function;
	std::size_t got;
	std::size_t position;
};

/// Evaluation outside an operator's domain (log of a nonpositive value,
/// division by zero, ...).
class DomainError : public Error {
public:
	using Error::Error;
};

/// A left-invariant frame with |det| below 1e-12 was encountered.
class IllConditionedFrame : public Error {
public:
	using Error::Error;
};

class BoundaryTooClose : public Error {
public:
	BoundaryTooClose(double margin, const std::string& what) : Error(what), margin(margin) {}

	double margin;
};

class SingularTarget : public Error {
public:
	using Error::Error;
};

/// Structured-file or command-argument parse failure. line/column are
/// 1-based and zero when not applicable.
class ParseError : public Error {
public:
	ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
		: Error(what), line(line), column(column) {}

	std::size_t line;
	std::size_t column;
};

} // namespace nilcohom
