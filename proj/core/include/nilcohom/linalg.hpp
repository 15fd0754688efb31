#pragma once

#include "nilcohom/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nilcohom {

using RationalVector = std::vector<Rational>;

/// Dense row-major matrix over the rationals. Sizes in this library stay
/// small (wedge-basis dimensions of desk-scale algebras), so no sparsity.
class RationalMatrix {
public:
	RationalMatrix() = default;
	RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

	static RationalMatrix identity(std::size_t n);
	static RationalMatrix from_rows(const std::vector<RationalVector>& rows, std::size_t cols);
	static RationalMatrix from_columns(const std::vector<RationalVector>& columns, std::size_t rows);

	std::size_t rows() const noexcept { return rows_; }
	std::size_t cols() const noexcept { return cols_; }

	Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
	const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

	RationalVector row(std::size_t r) const;
	RationalVector column(std::size_t c) const;
	RationalVector apply(std::span<const Rational> v) const;
	RationalMatrix transpose() const;
	RationalMatrix operator*(const RationalMatrix& rhs) const;

	bool operator==(const RationalMatrix&) const = default;

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<Rational> data_;
};

struct Echelon {
	RationalMatrix reduced;   // reduced row-echelon form
	std::vector<std::size_t> pivots; // pivot column of each nonzero row
	std::size_t rank() const noexcept { return pivots.size(); }
};

/// Gauss-Jordan elimination. Pivots are chosen as the first nonzero entry
/// scanning columns left to right, so the result is canonical.
Echelon row_echelon(RationalMatrix m);

std::size_t rank(const RationalMatrix& m);

/// Basis of {v : m v = 0}, one vector per free column (in column order),
/// with a 1 in that free column.
std::vector<RationalVector> nullspace(const RationalMatrix& m);

std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// Growing set of linearly independent vectors kept in reduced echelon
/// form. Used to pick deterministic complements.
class EchelonBasis {
public:
	explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

	std::size_t dim() const noexcept { return dim_; }
	std::size_t rank() const noexcept { return rows_.size(); }

	/// v minus its component along the current span (w.r.t. the pivots).
	RationalVector reduce(RationalVector v) const;
	bool contains(const RationalVector& v) const;
	/// Inserts v if it is independent; returns whether it was.
	bool insert(const RationalVector& v);

private:
	std::size_t dim_;
	std::vector<RationalVector> rows_;
	std::vector<std::size_t> pivots_;
};

bool is_zero(std::span<const Rational> v);

} // namespace nilcohom
