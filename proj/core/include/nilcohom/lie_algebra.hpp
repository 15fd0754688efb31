#pragma once

#include "nilcohom/linalg.hpp"
#include "nilcohom/rational.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nilcohom {

/// Wedge index sets are bitmasks, which bounds the dimension.
inline constexpr int kMaxAlgebraDim = 24;

struct StructureTerm {
	int index;      // k in [e_i, e_j] = sum_k c_ij^k e_k (0-based)
	Rational coeff; // c_ij^k, nonzero
};

/// One nonzero bracket [e_i, e_j] with i < j (0-based).
struct BracketEntry {
	int i = 0;
	int j = 0;
	std::vector<std::pair<int, Rational>> terms;
};

/// A finite-dimensional nilpotent Lie algebra over Q with a fixed basis.
/// Only constructed through validate_algebra, so every instance has passed
/// the exact Jacobi and nilpotency checks.
class LieAlgebra {
public:
	int dim() const noexcept { return dim_; }
	const std::vector<std::string>& basis_names() const noexcept { return names_; }

	/// Nonzero terms of [e_i, e_j] for i < j.
	std::span<const StructureTerm> bracket(int i, int j) const;

	/// c_ij^k for any i, j (antisymmetry applied).
	const Rational& structure_constant(int i, int j, int k) const
	{
		return dense_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
	}

	/// Bracket of two vectors given in basis coordinates.
	RationalVector bracket(std::span<const Rational> u, std::span<const Rational> v) const;

	/// Dimensions of g = g^1 > g^2 = [g,g] > ... ending with 0.
	const std::vector<int>& lower_central_series() const noexcept { return lcs_; }
	int nilpotency_class() const noexcept { return static_cast<int>(lcs_.size()) - 1; }

	/// w_i = largest k with e_i in g^k.
	const std::vector<int>& weights() const noexcept { return weights_; }

	/// Growth exponent Q = sum_k k * dim(g^k / g^{k+1}).
	int homogeneous_dimension() const noexcept { return homogeneous_dim_; }

	/// True when the basis is adapted to the filtration (sum of weights = Q),
	/// so that coordinate boxes with these weights are Folner-comparable to
	/// metric balls.
	bool adapted_basis() const noexcept;

	const std::vector<BracketEntry>& brackets() const noexcept { return entries_; }

	bool operator==(const LieAlgebra& other) const;

private:
	friend LieAlgebra validate_algebra(int, std::vector<BracketEntry>, std::vector<std::string>);

	int dim_ = 0;
	std::vector<std::string> names_;
	std::vector<BracketEntry> entries_;
	std::vector<std::vector<StructureTerm>> sparse_; // indexed by i * dim + j, i < j
	std::vector<Rational> dense_;
	std::vector<int> lcs_;
	std::vector<int> weights_;
	int homogeneous_dim_ = 0;
};

/// Builds a LieAlgebra from raw structure constants. Missing basis names
/// default to e1..en.
///
/// Throws InvalidAlgebra for malformed input, JacobiViolation with the first
/// offending triple, and NotNilpotent when the lower central series
/// stabilizes above {0}.
LieAlgebra validate_algebra(int dim, std::vector<BracketEntry> brackets, std::vector<std::string> basis_names = {});

namespace algebras {

LieAlgebra abelian(int n);
/// Heisenberg algebra of dimension 2m+1: [x_i, y_i] = z.
LieAlgebra heisenberg(int m);
/// Standard filiform algebra: [e1, e_i] = e_{i+1}, 2 <= i < n.
LieAlgebra filiform(int n);
/// Free 2-step nilpotent algebra on r generators, basis e1..er then
/// [e_i, e_j] for i < j in lexicographic order.
LieAlgebra free_nilpotent_class2(int r);

} // namespace algebras

} // namespace nilcohom
