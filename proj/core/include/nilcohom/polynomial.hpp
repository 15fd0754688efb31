#pragma once

#include "nilcohom/rational.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nilcohom {

/// Exact multivariate polynomial with rational coefficients. Monomials are
/// exponent vectors over a fixed number of variables.
class Polynomial {
public:
	using Exponents = std::vector<std::uint8_t>;

	Polynomial() = default;
	explicit Polynomial(int variables) : vars_(variables) {}

	static Polynomial constant(int variables, const Rational& c);
	static Polynomial variable(int variables, int index);

	int variables() const noexcept { return vars_; }
	bool is_zero() const noexcept { return terms_.empty(); }
	const std::map<Exponents, Rational>& terms() const noexcept { return terms_; }
	int total_degree() const;

	void add_term(const Exponents& e, const Rational& c);

	Polynomial& operator+=(const Polynomial& rhs);
	Polynomial& operator-=(const Polynomial& rhs);
	Polynomial& operator*=(const Rational& s);
	friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
	friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
	friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
	friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

	Polynomial derivative(int var) const;
	/// Sets variables in [first, first + count) to zero.
	Polynomial drop(int first, int count) const;

	Rational evaluate(std::span<const Rational> point) const;

	std::string to_string(const std::vector<std::string>& names = {}) const;

	bool operator==(const Polynomial&) const = default;

private:
	int vars_ = 0;
	std::map<Exponents, Rational> terms_;
};

/// Flattened polynomial for fast repeated evaluation on doubles, jets, or
/// (exactly) on rationals.
class CompiledPolynomial {
public:
	CompiledPolynomial() = default;
	explicit CompiledPolynomial(const Polynomial& p);

	template <class T>
	T evaluate(std::span<const T> point) const
	{
		T total(0);
		for (const auto& term : terms_) {
			T value = coefficient<T>(term);
			for (std::uint32_t f = term.first_factor; f < term.first_factor + term.factor_count; ++f) {
				const auto& [var, power] = factors_[f];
				for (int p = 0; p < power; ++p)
					value = value * point[var];
			}
			total = total + value;
		}
		return total;
	}

	bool is_zero() const noexcept { return terms_.empty(); }

private:
	struct Term {
		Rational exact;
		double approx;
		std::uint32_t first_factor;
		std::uint32_t factor_count;
	};

	template <class T>
	static T coefficient(const Term& t)
	{
		if constexpr (std::is_same_v<T, Rational>)
			return t.exact;
		else
			return T(t.approx);
	}

	std::vector<Term> terms_;
	std::vector<std::pair<int, int>> factors_;
};

} // namespace nilcohom
