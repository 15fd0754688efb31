#include "nilcohom/linalg.hpp"

#include <cassert>
#include <utility>

namespace nilcohom {

RationalMatrix RationalMatrix::identity(std::size_t n)
{
	RationalMatrix m(n, n);
	for (std::size_t i = 0; i < n; ++i)
		m(i, i) = 1;
	return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector>& rows, std::size_t cols)
{
	RationalMatrix m(rows.size(), cols);
	for (std::size_t r = 0; r < rows.size(); ++r) {
		assert(rows[r].size() == cols);
		for (std::size_t c = 0; c < cols; ++c)
			m(r, c) = rows[r][c];
	}
	return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& columns, std::size_t rows)
{
	RationalMatrix m(rows, columns.size());
	for (std::size_t c = 0; c < columns.size(); ++c) {
		assert(columns[c].size() == rows);
		for (std::size_t r = 0; r < rows; ++r)
			m(r, c) = columns[c][r];
	}
	return m;
}

RationalVector RationalMatrix::row(std::size_t r) const
{
	return RationalVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
		data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RationalVector RationalMatrix::column(std::size_t c) const
{
	RationalVector v(rows_);
	for (std::size_t r = 0; r < rows_; ++r)
		v[r] = (*this)(r, c);
	return v;
}

RationalVector RationalMatrix::apply(std::span<const Rational> v) const
{
	assert(v.size() == cols_);
	RationalVector out(rows_);
	for (std::size_t r = 0; r < rows_; ++r) {
		Rational acc = 0;
		for (std::size_t c = 0; c < cols_; ++c)
			if (sgn((*this)(r, c)) != 0 && sgn(v[c]) != 0)
				acc += (*this)(r, c) * v[c];
		out[r] = acc;
	}
	return out;
}

RationalMatrix RationalMatrix::transpose() const
{
	RationalMatrix t(cols_, rows_);
	for (std::size_t r = 0; r < rows_; ++r)
		for (std::size_t c = 0; c < cols_; ++c)
			t(c, r) = (*this)(r, c);
	return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const
{
	assert(cols_ == rhs.rows_);
	RationalMatrix out(rows_, rhs.cols_);
	for (std::size_t r = 0; r < rows_; ++r)
		for (std::size_t k = 0; k < cols_; ++k) {
			const Rational& a = (*this)(r, k);
			if (sgn(a) == 0)
				continue;
			for (std::size_t c = 0; c < rhs.cols_; ++c)
				if (sgn(rhs(k, c)) != 0)
					out(r, c) += a * rhs(k, c);
		}
	return out;
}

Echelon row_echelon(RationalMatrix m)
{
	Echelon e;
	std::size_t lead_row = 0;
	for (std::size_t col = 0; col < m.cols() && lead_row < m.rows(); ++col) {
		std::size_t pivot = lead_row;
		while (pivot < m.rows() && sgn(m(pivot, col)) == 0)
			++pivot;
		if (pivot == m.rows())
			continue;
		if (pivot != lead_row)
			for (std::size_t c = 0; c < m.cols(); ++c)
				std::swap(m(pivot, c), m(lead_row, c));

		Rational inv = 1 / m(lead_row, col);
		for (std::size_t c = col; c < m.cols(); ++c)
			m(lead_row, c) *= inv;

		for (std::size_t r = 0; r < m.rows(); ++r) {
			if (r == lead_row || sgn(m(r, col)) == 0)
				continue;
			Rational factor = m(r, col);
			for (std::size_t c = col; c < m.cols(); ++c)
				if (sgn(m(lead_row, c)) != 0)
					m(r, c) -= factor * m(lead_row, c);
		}
		e.pivots.push_back(col);
		++lead_row;
	}
	e.reduced = std::move(m);
	return e;
}

std::size_t rank(const RationalMatrix& m) { return row_echelon(m).rank(); }

std::vector<RationalVector> nullspace(const RationalMatrix& m)
{
	Echelon e = row_echelon(m);
	std::vector<bool> is_pivot(m.cols(), false);
	for (std::size_t p : e.pivots)
		is_pivot[p] = true;

	std::vector<RationalVector> basis;
	for (std::size_t free = 0; free < m.cols(); ++free) {
		if (is_pivot[free])
			continue;
		RationalVector v(m.cols());
		v[free] = 1;
		for (std::size_t r = 0; r < e.pivots.size(); ++r)
			v[e.pivots[r]] = -e.reduced(r, free);
		basis.push_back(std::move(v));
	}
	return basis;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m)
{
	if (m.rows() != m.cols())
		return std::nullopt;
	const std::size_t n = m.rows();
	RationalMatrix aug(n, 2 * n);
	for (std::size_t r = 0; r < n; ++r) {
		for (std::size_t c = 0; c < n; ++c)
			aug(r, c) = m(r, c);
		aug(r, n + r) = 1;
	}
	Echelon e = row_echelon(std::move(aug));
	if (e.rank() < n || e.pivots[n - 1] != n - 1)
		return std::nullopt;
	RationalMatrix inv(n, n);
	for (std::size_t r = 0; r < n; ++r)
		for (std::size_t c = 0; c < n; ++c)
			inv(r, c) = e.reduced(r, n + c);
	return inv;
}

RationalVector EchelonBasis::reduce(RationalVector v) const
{
	assert(v.size() == dim_);
	for (std::size_t i = 0; i < rows_.size(); ++i) {
		const Rational& coeff = v[pivots_[i]];
		if (sgn(coeff) == 0)
			continue;
		Rational factor = coeff;
		for (std::size_t c = 0; c < dim_; ++c)
			if (sgn(rows_[i][c]) != 0)
				v[c] -= factor * rows_[i][c];
	}
	return v;
}

bool EchelonBasis::contains(const RationalVector& v) const { return is_zero(reduce(v)); }

bool EchelonBasis::insert(const RationalVector& v)
{
	RationalVector r = reduce(v);
	std::size_t pivot = 0;
	while (pivot < dim_ && sgn(r[pivot]) == 0)
		++pivot;
	if (pivot == dim_)
		return false;
	Rational inv = 1 / r[pivot];
	for (auto& x : r)
		x *= inv;
	// Keep existing rows fully reduced against the new pivot.
	for (auto& row : rows_) {
		if (sgn(row[pivot]) == 0)
			continue;
		Rational factor = row[pivot];
		for (std::size_t c = 0; c < dim_; ++c)
			if (sgn(r[c]) != 0)
				row[c] -= factor * r[c];
	}
	rows_.push_back(std::move(r));
	pivots_.push_back(pivot);
	return true;
}

bool is_zero(std::span<const Rational> v)
{
	for (const auto& x : v)
		if (sgn(x) != 0)
			return false;
	return true;
}

} // namespace nilcohom
