#pragma once

#include "nilcohom/exterior.hpp"
#include "nilcohom/lie_algebra.hpp"
#include "nilcohom/linalg.hpp"

#include <string>
#include <vector>

namespace nilcohom {

/// H^k of the Chevalley-Eilenberg complex with trivial coefficients.
///
/// The wedge basis of C^k is split as [representatives | coboundaries |
/// complement], all chosen by reduced-echelon pivoting in lexicographic
/// wedge order. Inverting that change of basis gives the projector onto
/// class coordinates (kills coboundaries, left inverse of the
/// representatives) and the complement coordinates, which measure how far a
/// cochain is from being closed.
struct CohomologySpace {
	int degree = 0;
	int betti = 0;
	std::vector<WedgeMask> basis;        // lex wedge basis of C^k
	std::vector<KForm> representatives;  // closed, independent mod im d
	RationalMatrix projector;            // betti x |basis|
	RationalMatrix complement;           // (|basis| - dim ker d) x |basis|
	std::vector<double> projector_real;  // row-major copy of projector
	std::vector<double> complement_real;

	/// Class coordinates of a closed cochain in the representative basis.
	RationalVector project(const KForm& f) const;
	std::vector<double> project(const RealForm& f) const;
	/// Coordinates of f along the chosen complement of the closed cochains;
	/// all zero iff f is closed.
	std::vector<double> non_closed_component(const RealForm& f) const;
};

class CohomologyRing {
public:
	int dim() const noexcept { return dim_; }
	const CohomologySpace& space(int k) const { return spaces_.at(static_cast<std::size_t>(k)); }
	const std::vector<CohomologySpace>& spaces() const noexcept { return spaces_; }
	std::vector<int> betti() const;

	/// Coordinates of [rep^k_i] u [rep^l_j] in H^{k+l}. Requires k + l <= dim.
	const RationalVector& cup(int k, int i, int l, int j) const;

	/// Cup product of two classes given by (real) coordinates.
	std::vector<double> cup(int k, std::span<const double> u, int l, std::span<const double> v) const;

private:
	friend CohomologyRing cohomology(const LieAlgebra&);

	int dim_ = 0;
	std::vector<CohomologySpace> spaces_;
	// cup_[k][l][i * b_l + j]
	std::vector<std::vector<std::vector<RationalVector>>> cup_;
};

CohomologyRing cohomology(const LieAlgebra& alg);

/// Matrix of d: C^k -> C^{k+1} in lexicographic wedge bases.
RationalMatrix differential_matrix(const LieAlgebra& alg, int k);

/// project(wedge(rep^k_i, rep^l_j)); throws DegreeOverflow when k + l > n
/// and std::out_of_range for indices outside the Betti ranges.
RationalVector cup_class(const CohomologyRing& ring, int k, int i, int l, int j);

struct CupRank {
	int k = 0;
	int l = 0;
	int rank = 0; // rank of H^k (x) H^l -> H^{k+l}
	bool operator==(const CupRank&) const = default;
};

/// Isomorphism-invariant summary of a cohomology ring: Betti numbers and
/// the rank of every cup pairing H^k x H^l -> H^{k+l} with 1 <= k <= l.
struct RingSignature {
	std::vector<int> betti;
	std::vector<CupRank> cup_ranks;
	bool operator==(const RingSignature&) const = default;
};

RingSignature ring_invariants(const CohomologyRing& ring);

struct RingComparison {
	bool distinguished = false;
	std::vector<std::string> differences;
	std::string verdict() const
	{
		return distinguished ? "distinguished" : "indistinguishable-by-these-invariants";
	}
};

RingComparison compare(const RingSignature& a, const RingSignature& b);

} // namespace nilcohom
