#include "nilcohom/rational.hpp"

#include "nilcohom/error.hpp"

#include <cctype>

namespace nilcohom {

namespace {

bool all_digits(std::string_view s)
{
	if (s.empty())
		return false;
	for (char c : s)
		if (!std::isdigit(static_cast<unsigned char>(c)))
			return false;
	return true;
}

[[noreturn]] void fail(std::string_view text)
{
	throw ParseError("invalid rational literal '" + std::string(text) + "'");
}

} // namespace

Rational parse_rational(std::string_view text)
{
	std::string_view body = text;
	bool negative = false;
	if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
		negative = body.front() == '-';
		body.remove_prefix(1);
	}

	Rational q;
	if (auto slash = body.find('/'); slash != std::string_view::npos) {
		std::string_view num = body.substr(0, slash);
		std::string_view den = body.substr(slash + 1);
		if (!all_digits(num) || !all_digits(den))
			fail(text);
		mpz_class d(std::string(den), 10);
		if (d == 0)
			throw ParseError("zero denominator in rational literal '" + std::string(text) + "'");
		q = Rational(mpz_class(std::string(num), 10), d);
	} else if (auto dot = body.find('.'); dot != std::string_view::npos) {
		std::string_view whole = body.substr(0, dot);
		std::string_view frac = body.substr(dot + 1);
		if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
			(!frac.empty() && !all_digits(frac)))
			fail(text);
		std::string digits = std::string(whole) + std::string(frac);
		mpz_class scale;
		mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
		q = Rational(mpz_class(digits, 10), scale);
	} else {
		if (!all_digits(body))
			fail(text);
		q = Rational(mpz_class(std::string(body), 10));
	}
	q.canonicalize();
	return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

} // namespace nilcohom
