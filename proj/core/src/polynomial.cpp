#include "nilcohom/polynomial.hpp"

#include <cassert>
#include <sstream>

namespace nilcohom {

Polynomial Polynomial::constant(int variables, const Rational& c)
{
	Polynomial p(variables);
	p.add_term(Exponents(variables, 0), c);
	return p;
}

Polynomial Polynomial::variable(int variables, int index)
{
	Polynomial p(variables);
	Exponents e(variables, 0);
	e[index] = 1;
	p.add_term(e, 1);
	return p;
}

int Polynomial::total_degree() const
{
	int best = 0;
	for (const auto& [e, c] : terms_) {
		int d = 0;
		for (auto x : e)
			d += x;
		best = std::max(best, d);
	}
	return best;
}

void Polynomial::add_term(const Exponents& e, const Rational& c)
{
	assert(static_cast<int>(e.size()) == vars_);
	if (sgn(c) == 0)
		return;
	auto [it, inserted] = terms_.try_emplace(e, c);
	if (!inserted) {
		it->second += c;
		if (sgn(it->second) == 0)
			terms_.erase(it);
	}
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs)
{
	assert(vars_ == rhs.vars_);
	for (const auto& [e, c] : rhs.terms_)
		add_term(e, c);
	return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs)
{
	assert(vars_ == rhs.vars_);
	for (const auto& [e, c] : rhs.terms_)
		add_term(e, -c);
	return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s)
{
	if (sgn(s) == 0) {
		terms_.clear();
		return *this;
	}
	for (auto& [e, c] : terms_)
		c *= s;
	return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
	assert(a.vars_ == b.vars_);
	Polynomial out(a.vars_);
	Polynomial::Exponents e(a.vars_);
	for (const auto& [ea, ca] : a.terms_)
		for (const auto& [eb, cb] : b.terms_) {
			for (int v = 0; v < a.vars_; ++v)
				e[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
			out.add_term(e, ca * cb);
		}
	return out;
}

Polynomial Polynomial::derivative(int var) const
{
	Polynomial out(vars_);
	for (const auto& [e, c] : terms_) {
		if (e[var] == 0)
			continue;
		Exponents d = e;
		--d[var];
		out.add_term(d, c * e[var]);
	}
	return out;
}

Polynomial Polynomial::drop(int first, int count) const
{
	Polynomial out(vars_);
	for (const auto& [e, c] : terms_) {
		bool vanishes = false;
		for (int v = first; v < first + count; ++v)
			vanishes = vanishes || e[v] != 0;
		if (!vanishes)
			out.add_term(e, c);
	}
	return out;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const
{
	assert(static_cast<int>(point.size()) == vars_);
	Rational total = 0;
	for (const auto& [e, c] : terms_) {
		Rational term = c;
		for (int v = 0; v < vars_; ++v)
			for (int p = 0; p < e[v]; ++p)
				term *= point[v];
		total += term;
	}
	return total;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const
{
	if (terms_.empty())
		return "0";
	std::ostringstream os;
	bool first = true;
	for (const auto& [e, c] : terms_) {
		os << (first ? "" : " + ") << c.get_str();
		for (int v = 0; v < vars_; ++v) {
			if (e[v] == 0)
				continue;
			os << '*' << (v < static_cast<int>(names.size()) ? names[v] : "v" + std::to_string(v));
			if (e[v] > 1)
				os << '^' << static_cast<int>(e[v]);
		}
		first = false;
	}
	return os.str();
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p)
{
	for (const auto& [e, c] : p.terms()) {
		Term t{c, c.get_d(), static_cast<std::uint32_t>(factors_.size()), 0};
		for (int v = 0; v < p.variables(); ++v)
			if (e[v] != 0) {
				factors_.emplace_back(v, e[v]);
				++t.factor_count;
			}
		terms_.push_back(std::move(t));
	}
}

} // namespace nilcohom
