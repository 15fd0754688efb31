#include "nilcohom/cohomology.hpp"

#include "nilcohom/error.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nilcohom {

namespace {

std::vector<double> to_real(const RationalMatrix& m)
{
	std::vector<double> out;
	out.reserve(m.rows() * m.cols());
	for (std::size_t r = 0; r < m.rows(); ++r)
		for (std::size_t c = 0; c < m.cols(); ++c)
			out.push_back(m(r, c).get_d());
	return out;
}

std::vector<double> apply_real(const std::vector<double>& m, std::size_t rows, std::size_t cols,
	const std::vector<WedgeMask>& basis, const RealForm& f)
{
	std::vector<double> x(cols);
	for (std::size_t c = 0; c < cols; ++c)
		x[c] = f.coeff(basis[c]);
	std::vector<double> out(rows);
	for (std::size_t r = 0; r < rows; ++r) {
		double acc = 0;
		for (std::size_t c = 0; c < cols; ++c)
			acc += m[r * cols + c] * x[c];
		out[r] = acc;
	}
	return out;
}

std::string join(const std::vector<int>& v)
{
	std::ostringstream os;
	os << '(';
	for (std::size_t i = 0; i < v.size(); ++i)
		os << (i ? "," : "") << v[i];
	os << ')';
	return os.str();
}

} // namespace

RationalVector CohomologySpace::project(const KForm& f) const
{
	if (f.degree() != degree)
		throw DimensionMismatch("projecting a form of the wrong degree");
	RationalVector x(basis.size());
	for (std::size_t c = 0; c < basis.size(); ++c)
		x[c] = f.coeff(basis[c]);
	return projector.apply(x);
}

std::vector<double> CohomologySpace::project(const RealForm& f) const
{
	if (f.degree() != degree)
		throw DimensionMismatch("projecting a form of the wrong degree");
	return apply_real(projector_real, projector.rows(), projector.cols(), basis, f);
}

std::vector<double> CohomologySpace::non_closed_component(const RealForm& f) const
{
	if (f.degree() != degree)
		throw DimensionMismatch("projecting a form of the wrong degree");
	return apply_real(complement_real, complement.rows(), complement.cols(), basis, f);
}

RationalMatrix differential_matrix(const LieAlgebra& alg, int k)
{
	const int n = alg.dim();
	auto source = wedge_basis(n, k);
	auto target = wedge_basis(n, k + 1);
	RationalMatrix d(target.size(), source.size());
	for (std::size_t c = 0; c < source.size(); ++c) {
		KForm e(n, k);
		e.set(source[c], 1);
		KForm de = ce_differential(alg, e);
		for (std::size_t r = 0; r < target.size(); ++r)
			d(r, c) = de.coeff(target[r]);
	}
	return d;
}

std::vector<int> CohomologyRing::betti() const
{
	std::vector<int> b;
	for (const auto& s : spaces_)
		b.push_back(s.betti);
	return b;
}

const RationalVector& CohomologyRing::cup(int k, int i, int l, int j) const
{
	if (k + l > dim_)
		throw DegreeOverflow("cup product degree " + std::to_string(k + l) + " exceeds dimension " +
			std::to_string(dim_));
	if (k < 0 || l < 0)
		throw std::out_of_range("negative cohomological degree");
	const int bk = spaces_[k].betti;
	const int bl = spaces_[l].betti;
	if (i < 0 || i >= bk || j < 0 || j >= bl)
		throw std::out_of_range("class index outside the Betti range");
	return cup_[k][l][static_cast<std::size_t>(i) * bl + j];
}

std::vector<double> CohomologyRing::cup(int k, std::span<const double> u, int l, std::span<const double> v) const
{
	if (k + l > dim_)
		throw DegreeOverflow("cup product degree exceeds the algebra dimension");
	const int bk = spaces_[k].betti;
	const int bl = spaces_[l].betti;
	if (static_cast<int>(u.size()) != bk || static_cast<int>(v.size()) != bl)
		throw DimensionMismatch("class coordinate vector has the wrong length");
	std::vector<double> out(static_cast<std::size_t>(spaces_[k + l].betti), 0.0);
	for (int i = 0; i < bk; ++i)
		for (int j = 0; j < bl; ++j) {
			const auto& c = cup_[k][l][static_cast<std::size_t>(i) * bl + j];
			for (std::size_t t = 0; t < c.size(); ++t)
				if (sgn(c[t]) != 0)
					out[t] += u[i] * v[j] * c[t].get_d();
		}
	return out;
}

CohomologyRing cohomology(const LieAlgebra& alg)
{
	const int n = alg.dim();
	std::vector<RationalMatrix> d;
	for (int k = 0; k <= n; ++k)
		d.push_back(differential_matrix(alg, k));

	CohomologyRing ring;
	ring.dim_ = n;
	for (int k = 0; k <= n; ++k) {
		CohomologySpace space;
		space.degree = k;
		space.basis = wedge_basis(n, k);
		const std::size_t size = space.basis.size();

		auto cycles = nullspace(d[k]);

		// Coboundaries: pivot columns of d_{k-1} span its image.
		std::vector<RationalVector> boundaries;
		if (k > 0) {
			Echelon e = row_echelon(d[k - 1]);
			for (std::size_t p : e.pivots)
				boundaries.push_back(d[k - 1].column(p));
		}

		EchelonBasis span(size);
		for (const auto& b : boundaries)
			span.insert(b);

		std::vector<RationalVector> reps;
		for (const auto& z : cycles) {
			RationalVector r = span.reduce(z);
			if (is_zero(r))
				continue;
			auto lead = std::find_if(r.begin(), r.end(), [](const Rational& x) { return sgn(x) != 0; });
			Rational scale = 1 / *lead;
			for (auto& x : r)
				x *= scale;
			span.insert(r);
			reps.push_back(std::move(r));
		}

		std::vector<RationalVector> complement;
		for (std::size_t c = 0; c < size; ++c) {
			RationalVector e(size);
			e[c] = 1;
			if (span.insert(e))
				complement.push_back(std::move(e));
		}

		std::vector<RationalVector> columns = reps;
		columns.insert(columns.end(), boundaries.begin(), boundaries.end());
		columns.insert(columns.end(), complement.begin(), complement.end());
		auto change = inverse(RationalMatrix::from_columns(columns, size));
		if (!change)
			throw Error("internal error: cochain basis split is singular in degree " + std::to_string(k));

		space.betti = static_cast<int>(reps.size());
		space.projector = RationalMatrix(reps.size(), size);
		space.complement = RationalMatrix(complement.size(), size);
		const std::size_t offset = reps.size() + boundaries.size();
		for (std::size_t c = 0; c < size; ++c) {
			for (std::size_t r = 0; r < reps.size(); ++r)
				space.projector(r, c) = (*change)(r, c);
			for (std::size_t r = 0; r < complement.size(); ++r)
				space.complement(r, c) = (*change)(offset + r, c);
		}
		space.projector_real = to_real(space.projector);
		space.complement_real = to_real(space.complement);
		for (const auto& r : reps)
			space.representatives.push_back(KForm::from_dense(n, k, r));
		ring.spaces_.push_back(std::move(space));
	}

	ring.cup_.resize(n + 1);
	for (int k = 0; k <= n; ++k) {
		ring.cup_[k].resize(n + 1);
		for (int l = 0; k + l <= n; ++l) {
			const auto& sk = ring.spaces_[k];
			const auto& sl = ring.spaces_[l];
			auto& table = ring.cup_[k][l];
			for (const auto& a : sk.representatives)
				for (const auto& b : sl.representatives)
					table.push_back(ring.spaces_[k + l].project(wedge(a, b)));
		}
	}
	return ring;
}

RationalVector cup_class(const CohomologyRing& ring, int k, int i, int l, int j) { return ring.cup(k, i, l, j); }

RingSignature ring_invariants(const CohomologyRing& ring)
{
	RingSignature sig;
	sig.betti = ring.betti();
	const int n = ring.dim();
	for (int k = 1; k <= n; ++k)
		for (int l = k; k + l <= n; ++l) {
			const int bk = ring.space(k).betti;
			const int bl = ring.space(l).betti;
			const int bkl = ring.space(k + l).betti;
			int r = 0;
			if (bk > 0 && bl > 0 && bkl > 0) {
				std::vector<RationalVector> rows;
				for (int i = 0; i < bk; ++i)
					for (int j = 0; j < bl; ++j)
						rows.push_back(ring.cup(k, i, l, j));
				r = static_cast<int>(rank(RationalMatrix::from_rows(rows, static_cast<std::size_t>(bkl))));
			}
			sig.cup_ranks.push_back({k, l, r});
		}
	return sig;
}

RingComparison compare(const RingSignature& a, const RingSignature& b)
{
	RingComparison out;
	if (a.betti != b.betti) {
		out.differences.push_back("betti numbers differ: " + join(a.betti) + " vs " + join(b.betti));
	} else {
		for (std::size_t t = 0; t < a.cup_ranks.size() && t < b.cup_ranks.size(); ++t) {
			const auto& x = a.cup_ranks[t];
			const auto& y = b.cup_ranks[t];
			if (x.rank != y.rank)
				out.differences.push_back("cup rank (" + std::to_string(x.k) + "," + std::to_string(x.l) +
					") differs: " + std::to_string(x.rank) + " vs " + std::to_string(y.rank));
		}
	}
	out.distinguished = !out.differences.empty();
	return out;
}

} // namespace nilcohom
