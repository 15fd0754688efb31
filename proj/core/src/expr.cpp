#include "nilcohom/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

namespace nilcohom {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 7> kFunctions{{
	{"sin", Function::Sin},
	{"cos", Function::Cos},
	{"exp", Function::Exp},
	{"log", Function::Log},
	{"sqrt", Function::Sqrt},
	{"abs", Function::Abs},
	{"tanh", Function::Tanh},
}};

std::optional<Function> find_function(std::string_view name)
{
	for (const auto& [n, f] : kFunctions)
		if (n == name)
			return f;
	return std::nullopt;
}

const std::vector<std::string> kOperandExpected = {"number", "symbol", "function", "(", "-", "+"};

enum class Tok { Number, Ident, Op, LParen, RParen, Comma, End };

struct Token {
	Tok kind;
	std::string text;
	std::size_t pos; // 1-based
};

std::string describe(const Token& t)
{
	return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
}

std::string join_expected(const std::vector<std::string>& e)
{
	std::string out;
	for (std::size_t i = 0; i < e.size(); ++i)
		out += (i ? ", " : "") + e[i];
	return out;
}

class Parser {
public:
	Parser(std::string_view text, const SymbolTable& symbols) : text_(text), symbols_(symbols) { advance(); }

	ExprPtr parse()
	{
		ExprPtr e = expr();
		if (tok_.kind != Tok::End)
			fail({"operator", "end of input"});
		return e;
	}

private:
	[[noreturn]] void fail(const std::vector<std::string>& expected)
	{
		throw SyntaxError(tok_.pos, expected,
			"syntax error at position " + std::to_string(tok_.pos) + ": unexpected " + describe(tok_) +
				", expected " + join_expected(expected));
	}

	void advance()
	{
		while (at_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[at_])))
			++at_;
		const std::size_t start = at_;
		if (at_ >= text_.size()) {
			tok_ = {Tok::End, "", text_.size() + 1};
			return;
		}
		const char c = text_[at_];
		if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
			while (at_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[at_])))
				++at_;
			if (at_ < text_.size() && text_[at_] == '.') {
				++at_;
				while (at_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[at_])))
					++at_;
			}
			if (at_ < text_.size() && (text_[at_] == 'e' || text_[at_] == 'E')) {
				std::size_t look = at_ + 1;
				if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
					++look;
				if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
					at_ = look;
					while (at_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[at_])))
						++at_;
				}
			}
			tok_ = {Tok::Number, std::string(text_.substr(start, at_ - start)), start + 1};
			if (tok_.text == ".")
				fail({"number"});
			return;
		}
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			while (at_ < text_.size() &&
				(std::isalnum(static_cast<unsigned char>(text_[at_])) || text_[at_] == '_'))
				++at_;
			tok_ = {Tok::Ident, std::string(text_.substr(start, at_ - start)), start + 1};
			return;
		}
		++at_;
		switch (c) {
		case '+':
		case '-':
		case '*':
		case '/':
		case '^':
			tok_ = {Tok::Op, std::string(1, c), start + 1};
			return;
		case '(':
			tok_ = {Tok::LParen, "(", start + 1};
			return;
		case ')':
			tok_ = {Tok::RParen, ")", start + 1};
			return;
		case ',':
			tok_ = {Tok::Comma, ",", start + 1};
			return;
		default:
			tok_ = {Tok::Op, std::string(1, c), start + 1};
			fail(kOperandExpected);
		}
	}

	bool is_op(char c) const { return tok_.kind == Tok::Op && tok_.text[0] == c; }

	ExprPtr expr()
	{
		ExprPtr left = term();
		while (is_op('+') || is_op('-')) {
			char op = tok_.text[0];
			advance();
			left = std::make_shared<const Expr>(Expr{BinaryNode{op, left, term()}});
		}
		return left;
	}

	ExprPtr term()
	{
		ExprPtr left = unary();
		while (is_op('*') || is_op('/')) {
			char op = tok_.text[0];
			advance();
			left = std::make_shared<const Expr>(Expr{BinaryNode{op, left, unary()}});
		}
		return left;
	}

	ExprPtr unary()
	{
		if (is_op('-')) {
			advance();
			return std::make_shared<const Expr>(Expr{NegateNode{unary()}});
		}
		if (is_op('+')) {
			advance();
			return unary();
		}
		return power();
	}

	ExprPtr power()
	{
		ExprPtr base = primary();
		if (!is_op('^'))
			return base;
		advance();
		const std::size_t exponent_pos = tok_.pos;
		ExprPtr exponent = unary();
		std::optional<double> folded = fold(*exponent);
		if (!folded || !std::isfinite(*folded) || std::round(*folded) != *folded || std::abs(*folded) > 1e6)
			throw SyntaxError(exponent_pos, {"integer exponent"},
				"syntax error at position " + std::to_string(exponent_pos) +
					": exponent must be a constant integer");
		return std::make_shared<const Expr>(Expr{PowerNode{base, exponent, static_cast<int>(*folded)}});
	}

	ExprPtr primary()
	{
		const Token t = tok_;
		switch (t.kind) {
		case Tok::Number: {
			advance();
			double value = 0.0;
			auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
			if (ec != std::errc() || ptr != t.text.data() + t.text.size())
				throw SyntaxError(t.pos, {"number"}, "malformed number '" + t.text + "'");
			return std::make_shared<const Expr>(Expr{NumberNode{value, t.text}});
		}
		case Tok::LParen: {
			advance();
			ExprPtr inner = expr();
			if (tok_.kind != Tok::RParen)
				fail({"operator", ")"});
			advance();
			return inner;
		}
		case Tok::Ident: {
			advance();
			if (tok_.kind == Tok::LParen)
				return call(t);
			if (t.text == "pi")
				return std::make_shared<const Expr>(Expr{SymbolNode{-1, "pi"}});
			const int slot = symbols_.lookup(t.text);
			if (slot < 0) {
				if (find_function(t.text))
					throw SyntaxError(tok_.pos, {"("},
						"syntax error at position " + std::to_string(tok_.pos) + ": function '" + t.text +
							"' must be followed by '('");
				throw UnknownSymbol(t.text, t.pos,
					"unknown symbol '" + t.text + "' at position " + std::to_string(t.pos));
			}
			return std::make_shared<const Expr>(Expr{SymbolNode{slot, t.text}});
		}
		default:
			fail(kOperandExpected);
		}
	}

	ExprPtr call(const Token& name)
	{
		auto fn = find_function(name.text);
		if (!fn)
			throw UnknownSymbol(name.text, name.pos,
				"unknown function '" + name.text + "' at position " + std::to_string(name.pos));
		advance(); // '('
		std::vector<ExprPtr> args;
		if (tok_.kind != Tok::RParen) {
			args.push_back(expr());
			while (tok_.kind == Tok::Comma) {
				advance();
				args.push_back(expr());
			}
		}
		if (tok_.kind != Tok::RParen)
			fail({"operator", ",", ")"});
		advance();
		if (args.size() != 1)
			throw ArityError(name.text, args.size(), name.pos,
				"function '" + name.text + "' at position " + std::to_string(name.pos) + " takes 1 argument, got " +
					std::to_string(args.size()));
		return std::make_shared<const Expr>(Expr{CallNode{*fn, args.front()}});
	}

	static std::optional<double> fold(const Expr& e)
	{
		return std::visit(
			[](const auto& n) -> std::optional<double> {
				using N = std::decay_t<decltype(n)>;
				if constexpr (std::is_same_v<N, NumberNode>) {
					return n.value;
				} else if constexpr (std::is_same_v<N, SymbolNode>) {
					if (n.slot < 0)
						return std::numbers::pi;
					return std::nullopt;
				} else if constexpr (std::is_same_v<N, NegateNode>) {
					auto v = fold(*n.operand);
					return v ? std::optional<double>(-*v) : std::nullopt;
				} else if constexpr (std::is_same_v<N, BinaryNode>) {
					auto a = fold(*n.left);
					auto b = fold(*n.right);
					if (!a || !b)
						return std::nullopt;
					switch (n.op) {
					case '+': return *a + *b;
					case '-': return *a - *b;
					case '*': return *a * *b;
					default: return *b == 0.0 ? std::nullopt : std::optional<double>(*a / *b);
					}
				} else if constexpr (std::is_same_v<N, PowerNode>) {
					auto a = fold(*n.base);
					if (!a)
						return std::nullopt;
					return std::pow(*a, n.power);
				} else {
					return std::nullopt;
				}
			},
			e.node);
	}

	std::string_view text_;
	const SymbolTable& symbols_;
	std::size_t at_ = 0;
	Token tok_{Tok::End, "", 0};
};

// Binding strength used by the printer.
enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

int precedence(const Expr& e)
{
	return std::visit(
		[](const auto& n) -> int {
			using N = std::decay_t<decltype(n)>;
			if constexpr (std::is_same_v<N, BinaryNode>)
				return (n.op == '+' || n.op == '-') ? kSum : kProduct;
			else if constexpr (std::is_same_v<N, NegateNode>)
				return kUnary;
			else if constexpr (std::is_same_v<N, PowerNode>)
				return kPower;
			else
				return kAtom;
		},
		e.node);
}

std::string print(const Expr& e, int min_prec)
{
	std::string s = to_string(e);
	return precedence(e) < min_prec ? "(" + s + ")" : s;
}

} // namespace

std::string_view function_name(Function f)
{
	for (const auto& [n, fn] : kFunctions)
		if (fn == f)
			return n;
	return "?";
}

SymbolTable SymbolTable::coordinates(int n)
{
	std::vector<std::string> names;
	for (int i = 1; i <= n; ++i)
		names.push_back("x" + std::to_string(i));
	return SymbolTable(std::move(names));
}

int SymbolTable::lookup(std::string_view name) const
{
	for (std::size_t i = 0; i < names_.size(); ++i)
		if (names_[i] == name)
			return static_cast<int>(i);
	return -1;
}

ExprPtr parse_expression(std::string_view text, const SymbolTable& symbols)
{
	return Parser(text, symbols).parse();
}

std::string to_string(const Expr& e)
{
	return std::visit(
		[](const auto& n) -> std::string {
			using N = std::decay_t<decltype(n)>;
			if constexpr (std::is_same_v<N, NumberNode>) {
				return n.text;
			} else if constexpr (std::is_same_v<N, SymbolNode>) {
				return n.name;
			} else if constexpr (std::is_same_v<N, NegateNode>) {
				return "-" + print(*n.operand, kUnary);
			} else if constexpr (std::is_same_v<N, BinaryNode>) {
				const int p = (n.op == '+' || n.op == '-') ? kSum : kProduct;
				const std::string sep = p == kSum ? std::string(" ") + n.op + " " : std::string(1, n.op);
				return print(*n.left, p) + sep + print(*n.right, p + 1);
			} else if constexpr (std::is_same_v<N, PowerNode>) {
				return print(*n.base, kAtom) + "^" + print(*n.exponent, kUnary);
			} else {
				return std::string(function_name(n.function)) + "(" + to_string(*n.argument) + ")";
			}
		},
		e.node);
}

Program::Program(const Expr& e)
{
	emit(e);
	std::size_t depth = 0;
	for (const auto& in : code_) {
		if (in.op == Op::Const || in.op == Op::Var)
			depth_ = std::max(depth_, ++depth);
		else if (in.op == Op::Add || in.op == Op::Sub || in.op == Op::Mul || in.op == Op::Div)
			--depth;
	}
}

void Program::emit(const Expr& e)
{
	std::visit(
		[this](const auto& n) {
			using N = std::decay_t<decltype(n)>;
			if constexpr (std::is_same_v<N, NumberNode>) {
				code_.push_back({Op::Const, 0, n.value});
			} else if constexpr (std::is_same_v<N, SymbolNode>) {
				if (n.slot < 0) {
					code_.push_back({Op::Const, 0, std::numbers::pi});
				} else {
					code_.push_back({Op::Var, n.slot, 0.0});
					slots_ = std::max(slots_, static_cast<std::size_t>(n.slot) + 1);
				}
			} else if constexpr (std::is_same_v<N, NegateNode>) {
				emit(*n.operand);
				code_.push_back({Op::Neg, 0, 0.0});
			} else if constexpr (std::is_same_v<N, BinaryNode>) {
				emit(*n.left);
				emit(*n.right);
				const Op op = n.op == '+' ? Op::Add : n.op == '-' ? Op::Sub : n.op == '*' ? Op::Mul : Op::Div;
				code_.push_back({op, 0, 0.0});
			} else if constexpr (std::is_same_v<N, PowerNode>) {
				emit(*n.base);
				code_.push_back({Op::Pow, n.power, 0.0});
			} else {
				emit(*n.argument);
				code_.push_back({Op::Call, static_cast<int>(n.function), 0.0});
			}
		},
		e.node);
}

} // namespace nilcohom
