#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace nilcohom {

/// Largest domain dimension supported by forward-mode differentiation.
inline constexpr int kMaxJetDim = 12;

/// First-order jet: a value with its partial derivatives along the domain
/// coordinates. Arithmetic applies the usual forward-mode rules.
struct Jet {
	double value = 0.0;
	std::array<double, kMaxJetDim> d{};

	Jet() = default;
	Jet(double v) : value(v) {} // NOLINT(google-explicit-constructor)

	static Jet variable(double v, int index)
	{
		Jet j(v);
		j.d[static_cast<std::size_t>(index)] = 1.0;
		return j;
	}

	Jet& operator+=(const Jet& o)
	{
		value += o.value;
		for (std::size_t i = 0; i < d.size(); ++i)
			d[i] += o.d[i];
		return *this;
	}
	Jet& operator-=(const Jet& o)
	{
		value -= o.value;
		for (std::size_t i = 0; i < d.size(); ++i)
			d[i] -= o.d[i];
		return *this;
	}
	Jet& operator*=(const Jet& o)
	{
		for (std::size_t i = 0; i < d.size(); ++i)
			d[i] = d[i] * o.value + value * o.d[i];
		value *= o.value;
		return *this;
	}
	Jet& operator/=(const Jet& o)
	{
		const double inv = 1.0 / o.value;
		value *= inv;
		for (std::size_t i = 0; i < d.size(); ++i)
			d[i] = (d[i] - value * o.d[i]) * inv;
		return *this;
	}

	friend Jet operator+(Jet a, const Jet& b) { return a += b; }
	friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
	friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
	friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
	friend Jet operator-(Jet a)
	{
		a.value = -a.value;
		for (auto& x : a.d)
			x = -x;
		return a;
	}
};

namespace detail {

inline Jet chain(const Jet& x, double value, double slope)
{
	Jet out(value);
	for (std::size_t i = 0; i < out.d.size(); ++i)
		out.d[i] = slope * x.d[i];
	return out;
}

} // namespace detail

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value; }

inline Jet sin(const Jet& x) { return detail::chain(x, std::sin(x.value), std::cos(x.value)); }
inline Jet cos(const Jet& x) { return detail::chain(x, std::cos(x.value), -std::sin(x.value)); }
inline Jet exp(const Jet& x)
{
	const double e = std::exp(x.value);
	return detail::chain(x, e, e);
}
inline Jet log(const Jet& x) { return detail::chain(x, std::log(x.value), 1.0 / x.value); }
inline Jet sqrt(const Jet& x)
{
	const double s = std::sqrt(x.value);
	return detail::chain(x, s, 0.5 / s);
}
inline Jet tanh(const Jet& x)
{
	const double t = std::tanh(x.value);
	return detail::chain(x, t, 1.0 - t * t);
}
/// sign(0) is taken as 0, so the derivative at the kink is 0.
inline Jet abs(const Jet& x)
{
	const double s = x.value > 0 ? 1.0 : (x.value < 0 ? -1.0 : 0.0);
	return detail::chain(x, std::abs(x.value), s);
}

} // namespace nilcohom
