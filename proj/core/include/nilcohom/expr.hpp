#pragma once

#include "nilcohom/error.hpp"
#include "nilcohom/jet.hpp"

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nilcohom {

enum class Function { Sin, Cos, Exp, Log, Sqrt, Abs, Tanh };

std::string_view function_name(Function f);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Numeric literal; the source spelling is kept for printing.
struct NumberNode {
	double value;
	std::string text;
};

/// Variable slot from the symbol table, or the constant pi (slot -1).
struct SymbolNode {
	int slot;
	std::string name;
};

struct NegateNode {
	ExprPtr operand;
};

struct BinaryNode {
	char op; // one of + - * /
	ExprPtr left;
	ExprPtr right;
};

/// base ^ exponent, where the exponent folds to the integer `power`.
struct PowerNode {
	ExprPtr base;
	ExprPtr exponent;
	int power;
};

struct CallNode {
	Function function;
	ExprPtr argument;
};

struct Expr {
	std::variant<NumberNode, SymbolNode, NegateNode, BinaryNode, PowerNode, CallNode> node;
};

/// Names a parser may resolve to variable slots. The constant pi is always
/// available and cannot be shadowed.
class SymbolTable {
public:
	SymbolTable() = default;
	explicit SymbolTable(std::vector<std::string> names) : names_(std::move(names)) {}

	/// x1..xn.
	static SymbolTable coordinates(int n);

	int lookup(std::string_view name) const;
	std::size_t size() const noexcept { return names_.size(); }
	const std::vector<std::string>& names() const noexcept { return names_; }

private:
	std::vector<std::string> names_;
};

/// Precedence climbing over
///   expr  := term (('+' | '-') term)*
///   term  := unary (('*' | '/') unary)*
///   unary := ('-' | '+') unary | power
///   power := primary ('^' unary)?
///   primary := number | symbol | function '(' expr ')' | '(' expr ')'
/// so '^' is right associative and binds tighter than unary minus. The
/// exponent must be a constant expression with an integer value.
///
/// Throws SyntaxError (1-based position, expected tokens), UnknownSymbol
/// and ArityError.
ExprPtr parse_expression(std::string_view text, const SymbolTable& symbols);

/// Pretty printer with minimal parentheses; parse(to_string(e)) prints back
/// to the same string.
std::string to_string(const Expr& e);

/// Counters gathered while evaluating.
struct EvalDiagnostics {
	std::size_t kink_hits = 0; // abs() arguments within 1e-9 of 0
};

inline constexpr double kKinkTolerance = 1e-9;

/// Postfix bytecode compiled from an expression; evaluation is templated on
/// the scalar so the same program runs on doubles and on jets.
class Program {
public:
	Program() = default;
	explicit Program(const Expr& e);

	std::size_t slots() const noexcept { return slots_; }

	template <class T>
	T evaluate(std::span<const T> vars, EvalDiagnostics* diag = nullptr) const;

private:
	enum class Op : unsigned char { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
	struct Instr {
		Op op;
		int arg = 0;       // slot, power, or function
		double value = 0.; // constant
	};

	void emit(const Expr& e);
	template <class T>
	[[noreturn]] static void domain_failure(const std::string& what, std::span<const T> vars);

	std::vector<Instr> code_;
	std::size_t depth_ = 0;
	std::size_t slots_ = 0;
};

template <class T>
void Program::domain_failure(const std::string& what, std::span<const T> vars)
{
	std::ostringstream os;
	os.precision(17);
	os << what << " at (";
	for (std::size_t i = 0; i < vars.size(); ++i)
		os << (i ? ", " : "") << value_of(vars[i]);
	os << ')';
	throw DomainError(os.str());
}

template <class T>
T Program::evaluate(std::span<const T> vars, EvalDiagnostics* diag) const
{
	using std::abs, std::cos, std::exp, std::log, std::sin, std::sqrt, std::tanh;
	std::vector<T> stack;
	stack.reserve(depth_);
	for (const auto& in : code_) {
		switch (in.op) {
		case Op::Const:
			stack.emplace_back(in.value);
			break;
		case Op::Var:
			if (static_cast<std::size_t>(in.arg) >= vars.size())
				throw DimensionMismatch("expression refers to a variable beyond the supplied point");
			stack.push_back(vars[in.arg]);
			break;
		case Op::Neg:
			stack.back() = -stack.back();
			break;
		case Op::Add:
		case Op::Sub:
		case Op::Mul:
		case Op::Div: {
			T rhs = std::move(stack.back());
			stack.pop_back();
			T& lhs = stack.back();
			if (in.op == Op::Add)
				lhs = lhs + rhs;
			else if (in.op == Op::Sub)
				lhs = lhs - rhs;
			else if (in.op == Op::Mul)
				lhs = lhs * rhs;
			else {
				if (value_of(rhs) == 0.0)
					domain_failure("division by zero", vars);
				lhs = lhs / rhs;
			}
			break;
		}
		case Op::Pow: {
			T& base = stack.back();
			int p = in.arg;
			if (p < 0 && value_of(base) == 0.0)
				domain_failure("zero raised to a negative power", vars);
			T result(1.0);
			T factor = base;
			for (unsigned e = static_cast<unsigned>(p < 0 ? -p : p); e != 0; e >>= 1) {
				if (e & 1u)
					result = result * factor;
				if (e > 1)
					factor = factor * factor;
			}
			base = p < 0 ? T(1.0) / result : result;
			break;
		}
		case Op::Call: {
			T& x = stack.back();
			const double v = value_of(x);
			switch (static_cast<Function>(in.arg)) {
			case Function::Sin: x = sin(x); break;
			case Function::Cos: x = cos(x); break;
			case Function::Exp: x = exp(x); break;
			case Function::Tanh: x = tanh(x); break;
			case Function::Log:
				if (!(v > 0.0))
					domain_failure("log of a nonpositive value", vars);
				x = log(x);
				break;
			case Function::Sqrt:
				if (v < 0.0)
					domain_failure("sqrt of a negative value", vars);
				x = sqrt(x);
				break;
			case Function::Abs:
				if (diag && std::abs(v) <= kKinkTolerance)
					++diag->kink_hits;
				x = abs(x);
				break;
			}
			break;
		}
		}
	}
	return stack.back();
}

} // namespace nilcohom
