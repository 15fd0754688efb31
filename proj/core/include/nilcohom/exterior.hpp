#pragma once

#include "nilcohom/error.hpp"
#include "nilcohom/lie_algebra.hpp"
#include "nilcohom/rational.hpp"

#include <bit>
#include <cassert>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace nilcohom {

/// Strictly increasing index tuple I stored as the set bits of a mask.
using WedgeMask = std::uint32_t;

/// Lexicographic order of the sorted index tuples. Only meaningful between
/// masks of equal popcount, which is all a form ever holds.
struct LexLess {
	bool operator()(WedgeMask a, WedgeMask b) const noexcept
	{
		WedgeMask diff = a ^ b;
		return (a & diff & (~diff + 1)) != 0;
	}
};

inline int wedge_degree(WedgeMask m) noexcept { return std::popcount(m); }

std::vector<int> mask_indices(WedgeMask m);
WedgeMask mask_of(std::span<const int> indices);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<WedgeMask> wedge_basis(int n, int k);

/// Sign of e_I ^ e_J relative to e_{I u J} for disjoint I, J.
inline int wedge_sign(WedgeMask left, WedgeMask right) noexcept
{
	int inversions = 0;
	for (WedgeMask r = right; r != 0; r &= r - 1) {
		int j = std::countr_zero(r);
		WedgeMask above = j + 1 >= 32 ? 0u : ~((WedgeMask(1) << (j + 1)) - 1);
		inversions += std::popcount(left & above);
	}
	return (inversions & 1) ? -1 : 1;
}

/// An exterior k-cochain sum_I c_I e_I^* on an n-dimensional algebra, in the
/// determinant convention e_I^*(e_I) = 1. Zero coefficients are never
/// stored. KForm (exact) and RealForm (averages) share this template.
template <class Scalar>
class BasicForm {
public:
	using Terms = std::map<WedgeMask, Scalar, LexLess>;

	BasicForm() = default;
	BasicForm(int dim, int degree) : dim_(dim), degree_(degree)
	{
		assert(dim >= 0 && dim <= kMaxAlgebraDim && degree >= 0);
	}

	/// The single basis form e_{i1}^* ^ ... ^ e_{ik}^* (indices in any order;
	/// repeated indices give zero).
	static BasicForm basis(int dim, std::span<const int> indices, Scalar coeff = Scalar(1))
	{
		BasicForm f(dim, static_cast<int>(indices.size()));
		WedgeMask m = 0;
		int sign = 1;
		for (int idx : indices) {
			assert(idx >= 0 && idx < dim);
			WedgeMask bit = WedgeMask(1) << idx;
			if (m & bit)
				return f;
			sign *= wedge_sign(m, bit);
			m |= bit;
		}
		f.set(m, sign > 0 ? coeff : Scalar(-coeff));
		return f;
	}

	static BasicForm unit(int dim) { return basis(dim, std::span<const int>{}); }

	int dim() const noexcept { return dim_; }
	int degree() const noexcept { return degree_; }
	bool is_zero() const noexcept { return terms_.empty(); }
	std::size_t size() const noexcept { return terms_.size(); }
	const Terms& terms() const noexcept { return terms_; }

	Scalar coeff(WedgeMask m) const
	{
		auto it = terms_.find(m);
		return it == terms_.end() ? Scalar(0) : it->second;
	}

	void set(WedgeMask m, Scalar value)
	{
		assert(wedge_degree(m) == degree_);
		if (value == Scalar(0))
			terms_.erase(m);
		else
			terms_[m] = std::move(value);
	}

	void add(WedgeMask m, const Scalar& value)
	{
		assert(wedge_degree(m) == degree_);
		if (value == Scalar(0))
			return;
		auto [it, inserted] = terms_.try_emplace(m, value);
		if (!inserted) {
			it->second += value;
			if (it->second == Scalar(0))
				terms_.erase(it);
		}
	}

	BasicForm& operator+=(const BasicForm& rhs)
	{
		check_compatible(rhs);
		for (const auto& [m, c] : rhs.terms_)
			add(m, c);
		return *this;
	}
	BasicForm& operator-=(const BasicForm& rhs)
	{
		check_compatible(rhs);
		for (const auto& [m, c] : rhs.terms_)
			add(m, Scalar(-c));
		return *this;
	}
	BasicForm& operator*=(const Scalar& s)
	{
		if (s == Scalar(0)) {
			terms_.clear();
			return *this;
		}
		for (auto& [m, c] : terms_)
			c *= s;
		return *this;
	}

	friend BasicForm operator+(BasicForm a, const BasicForm& b) { return a += b; }
	friend BasicForm operator-(BasicForm a, const BasicForm& b) { return a -= b; }
	friend BasicForm operator*(const Scalar& s, BasicForm a) { return a *= s; }
	friend BasicForm operator-(BasicForm a) { return a *= Scalar(-1); }

	bool operator==(const BasicForm& rhs) const
	{
		return dim_ == rhs.dim_ && degree_ == rhs.degree_ && terms_ == rhs.terms_;
	}

	/// Coefficients over wedge_basis(dim, degree), zeros included.
	std::vector<Scalar> dense() const
	{
		std::vector<Scalar> out;
		for (WedgeMask m : wedge_basis(dim_, degree_))
			out.push_back(coeff(m));
		return out;
	}

	static BasicForm from_dense(int dim, int degree, std::span<const Scalar> coeffs)
	{
		BasicForm f(dim, degree);
		auto basis = wedge_basis(dim, degree);
		assert(basis.size() == coeffs.size());
		for (std::size_t i = 0; i < basis.size(); ++i)
			f.set(basis[i], coeffs[i]);
		return f;
	}

	template <class Other>
	BasicForm<Other> cast() const
	{
		BasicForm<Other> out(dim_, degree_);
		for (const auto& [m, c] : terms_) {
			if constexpr (std::is_same_v<Scalar, Rational>)
				out.set(m, scalar_cast<Other>(c));
			else
				out.set(m, static_cast<Other>(c));
		}
		return out;
	}

private:
	void check_compatible(const BasicForm& rhs) const
	{
		if (dim_ != rhs.dim_ || degree_ != rhs.degree_)
			throw DimensionMismatch("adding forms of different dimension or degree");
	}

	int dim_ = 0;
	int degree_ = 0;
	Terms terms_;
};

using KForm = BasicForm<Rational>;
using RealForm = BasicForm<double>;

/// Chevalley-Eilenberg differential with trivial coefficients:
///   df(X_1..X_{k+1}) = sum_{a<b} (-1)^{a+b} f([X_a, X_b], X_1..^a..^b..X_{k+1}).
/// For k = n the result is the (necessarily zero) form of degree n + 1.
template <class Scalar>
BasicForm<Scalar> ce_differential(const LieAlgebra& alg, const BasicForm<Scalar>& f)
{
	if (f.dim() != alg.dim())
		throw DimensionMismatch("form dimension does not match the algebra");
	const int n = alg.dim();
	const int k = f.degree();
	BasicForm<Scalar> out(n, k + 1);
	if (k + 1 > n || f.is_zero())
		return out;

	for (WedgeMask target : wedge_basis(n, k + 1)) {
		std::vector<int> idx = mask_indices(target);
		Scalar total(0);
		for (int a = 0; a < k + 1; ++a)
			for (int b = a + 1; b < k + 1; ++b) {
				auto terms = alg.bracket(idx[a], idx[b]);
				if (terms.empty())
					continue;
				// positions are 1-based in the formula: (-1)^{(a+1)+(b+1)}
				const int pos_sign = ((a + b) & 1) ? -1 : 1;
				WedgeMask rest = target & ~(WedgeMask(1) << idx[a]) & ~(WedgeMask(1) << idx[b]);
				for (const auto& t : terms) {
					WedgeMask bit = WedgeMask(1) << t.index;
					if (rest & bit)
						continue;
					auto it = f.terms().find(rest | bit);
					if (it == f.terms().end())
						continue;
					// moving e_m from the front into sorted position
					const int move_sign = (std::popcount(rest & (bit - 1)) & 1) ? -1 : 1;
					Scalar term = scalar_cast<Scalar>(t.coeff) * it->second;
					if (pos_sign * move_sign > 0)
						total += term;
					else
						total -= term;
				}
			}
		out.set(target, total);
	}
	return out;
}

/// Wedge product with the (m+n)!/(m!n!) Alt normalization, so that the
/// product of basis covectors has coefficient +-1.
template <class Scalar>
BasicForm<Scalar> wedge(const BasicForm<Scalar>& a, const BasicForm<Scalar>& b)
{
	if (a.dim() != b.dim())
		throw DimensionMismatch("wedge of forms on different algebras");
	BasicForm<Scalar> out(a.dim(), a.degree() + b.degree());
	if (a.degree() + b.degree() > a.dim())
		return out;
	for (const auto& [ma, ca] : a.terms())
		for (const auto& [mb, cb] : b.terms()) {
			if (ma & mb)
				continue;
			Scalar term = ca * cb;
			out.add(ma | mb, wedge_sign(ma, mb) > 0 ? term : Scalar(-term));
		}
	return out;
}

} // namespace nilcohom
