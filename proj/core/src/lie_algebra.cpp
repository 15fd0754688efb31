#include "nilcohom/lie_algebra.hpp"

#include "nilcohom/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace nilcohom {

std::span<const StructureTerm> LieAlgebra::bracket(int i, int j) const
{
	return sparse_[static_cast<std::size_t>(i) * dim_ + j];
}

RationalVector LieAlgebra::bracket(std::span<const Rational> u, std::span<const Rational> v) const
{
	RationalVector out(dim_);
	for (int i = 0; i < dim_; ++i) {
		if (sgn(u[i]) == 0)
			continue;
		for (int j = 0; j < dim_; ++j) {
			if (i == j || sgn(v[j]) == 0)
				continue;
			Rational uv = u[i] * v[j];
			if (i < j) {
				for (const auto& t : bracket(i, j))
					out[t.index] += uv * t.coeff;
			} else {
				for (const auto& t : bracket(j, i))
					out[t.index] -= uv * t.coeff;
			}
		}
	}
	return out;
}

bool LieAlgebra::adapted_basis() const noexcept
{
	return std::accumulate(weights_.begin(), weights_.end(), 0) == homogeneous_dim_;
}

bool LieAlgebra::operator==(const LieAlgebra& other) const
{
	return dim_ == other.dim_ && dense_ == other.dense_;
}

namespace {

RationalVector unit(int n, int i)
{
	RationalVector v(n);
	v[i] = 1;
	return v;
}

std::string format_vector(const RationalVector& v)
{
	std::ostringstream os;
	os << '(';
	for (std::size_t i = 0; i < v.size(); ++i)
		os << (i ? ", " : "") << v[i].get_str();
	os << ')';
	return os.str();
}

} // namespace

LieAlgebra validate_algebra(int dim, std::vector<BracketEntry> brackets, std::vector<std::string> basis_names)
{
	if (dim <= 0)
		throw InvalidAlgebra("algebra dimension must be positive, got " + std::to_string(dim));
	if (dim > kMaxAlgebraDim)
		throw InvalidAlgebra("algebra dimension " + std::to_string(dim) + " exceeds the supported maximum " +
			std::to_string(kMaxAlgebraDim));

	if (basis_names.empty())
		for (int i = 0; i < dim; ++i)
			basis_names.push_back("e" + std::to_string(i + 1));
	if (static_cast<int>(basis_names.size()) != dim)
		throw InvalidAlgebra("expected " + std::to_string(dim) + " basis names, got " +
			std::to_string(basis_names.size()));
	{
		std::set<std::string> seen;
		for (const auto& name : basis_names)
			if (!seen.insert(name).second)
				throw InvalidAlgebra("duplicate basis name '" + name + "'");
	}

	LieAlgebra alg;
	alg.dim_ = dim;
	alg.names_ = std::move(basis_names);
	alg.sparse_.resize(static_cast<std::size_t>(dim) * dim);
	alg.dense_.resize(static_cast<std::size_t>(dim) * dim * dim);

	std::set<std::pair<int, int>> seen_pairs;
	for (std::size_t e = 0; e < brackets.size(); ++e) {
		auto& entry = brackets[e];
		const std::string where = "bracket entry " + std::to_string(e) + " [" + std::to_string(entry.i + 1) + ", " +
			std::to_string(entry.j + 1) + "]";
		if (entry.i < 0 || entry.i >= dim || entry.j < 0 || entry.j >= dim)
			throw InvalidAlgebra(where + ": index out of range 1.." + std::to_string(dim));
		if (entry.i >= entry.j)
			throw InvalidAlgebra(where + ": requires i < j");
		if (!seen_pairs.insert({entry.i, entry.j}).second)
			throw InvalidAlgebra(where + ": duplicate pair");

		std::vector<Rational> coeffs(dim);
		for (const auto& [k, c] : entry.terms) {
			if (k < 0 || k >= dim)
				throw InvalidAlgebra(where + ": target index " + std::to_string(k + 1) + " out of range 1.." +
					std::to_string(dim));
			coeffs[k] += c;
		}
		entry.terms.clear();
		auto& sparse = alg.sparse_[static_cast<std::size_t>(entry.i) * dim + entry.j];
		for (int k = 0; k < dim; ++k) {
			if (sgn(coeffs[k]) == 0)
				continue;
			entry.terms.emplace_back(k, coeffs[k]);
			sparse.push_back({k, coeffs[k]});
			alg.dense_[(static_cast<std::size_t>(entry.i) * dim + entry.j) * dim + k] = coeffs[k];
			alg.dense_[(static_cast<std::size_t>(entry.j) * dim + entry.i) * dim + k] = -coeffs[k];
		}
	}
	std::erase_if(brackets, [](const BracketEntry& b) { return b.terms.empty(); });
	std::sort(brackets.begin(), brackets.end(),
		[](const BracketEntry& a, const BracketEntry& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
	alg.entries_ = std::move(brackets);

	// Jacobi: [[a,b],c] + [[b,c],a] + [[c,a],b] = 0 on all basis triples.
	for (int i = 0; i < dim; ++i)
		for (int j = i + 1; j < dim; ++j)
			for (int k = j + 1; k < dim; ++k) {
				RationalVector ei = unit(dim, i), ej = unit(dim, j), ek = unit(dim, k);
				RationalVector r = alg.bracket(alg.bracket(ei, ej), ek);
				RationalVector r2 = alg.bracket(alg.bracket(ej, ek), ei);
				RationalVector r3 = alg.bracket(alg.bracket(ek, ei), ej);
				for (int m = 0; m < dim; ++m)
					r[m] += r2[m] + r3[m];
				if (!is_zero(r)) {
					std::vector<std::string> residual;
					for (const auto& x : r)
						residual.push_back(x.get_str());
					throw JacobiViolation(i, j, k, residual,
						"Jacobi identity fails on (" + alg.names_[i] + ", " + alg.names_[j] + ", " + alg.names_[k] +
							"): residual " + format_vector(r));
				}
			}

	// Lower central series g^{k+1} = [g, g^k].
	std::vector<RationalVector> current;
	for (int i = 0; i < dim; ++i)
		current.push_back(unit(dim, i));
	std::vector<std::vector<RationalVector>> layers{current};
	alg.lcs_ = {dim};
	while (!current.empty()) {
		std::vector<RationalVector> basis;
		std::vector<RationalVector> spanning;
		for (int i = 0; i < dim; ++i)
			for (const auto& v : current) {
				RationalVector b = alg.bracket(unit(dim, i), v);
				if (!is_zero(b))
					spanning.push_back(std::move(b));
			}
		if (!spanning.empty()) {
			Echelon e = row_echelon(RationalMatrix::from_rows(spanning, dim));
			for (std::size_t r = 0; r < e.rank(); ++r)
				basis.push_back(e.reduced.row(r));
		}
		const int next_dim = static_cast<int>(basis.size());
		if (next_dim == alg.lcs_.back()) {
			std::vector<int> series = alg.lcs_;
			series.push_back(next_dim);
			std::ostringstream os;
			os << "algebra is not nilpotent: lower central series stabilizes at dimension " << next_dim
			   << " (series";
			for (int d : series)
				os << ' ' << d;
			os << ')';
			throw NotNilpotent(series, os.str());
		}
		alg.lcs_.push_back(next_dim);
		current = std::move(basis);
		if (!current.empty())
			layers.push_back(current);
	}

	alg.weights_.assign(dim, 1);
	for (std::size_t k = 1; k < layers.size(); ++k) {
		EchelonBasis layer(dim);
		for (const auto& v : layers[k])
			layer.insert(v);
		for (int i = 0; i < dim; ++i)
			if (layer.contains(unit(dim, i)))
				alg.weights_[i] = static_cast<int>(k) + 1;
	}
	alg.homogeneous_dim_ = 0;
	for (std::size_t k = 0; k + 1 < alg.lcs_.size(); ++k)
		alg.homogeneous_dim_ += static_cast<int>(k + 1) * (alg.lcs_[k] - alg.lcs_[k + 1]);

	return alg;
}

namespace algebras {

LieAlgebra abelian(int n) { return validate_algebra(n, {}); }

LieAlgebra heisenberg(int m)
{
	std::vector<std::string> names;
	for (int i = 1; i <= m; ++i)
		names.push_back("x" + std::to_string(i));
	for (int i = 1; i <= m; ++i)
		names.push_back("y" + std::to_string(i));
	names.push_back("z");
	std::vector<BracketEntry> brackets;
	for (int i = 0; i < m; ++i)
		brackets.push_back({i, m + i, {{2 * m, Rational(1)}}});
	if (m == 1)
		names = {"e1", "e2", "e3"};
	return validate_algebra(2 * m + 1, std::move(brackets), std::move(names));
}

LieAlgebra filiform(int n)
{
	std::vector<BracketEntry> brackets;
	for (int i = 1; i + 1 < n; ++i)
		brackets.push_back({0, i, {{i + 1, Rational(1)}}});
	return validate_algebra(n, std::move(brackets));
}

LieAlgebra free_nilpotent_class2(int r)
{
	std::vector<BracketEntry> brackets;
	int next = r;
	for (int i = 0; i < r; ++i)
		for (int j = i + 1; j < r; ++j)
			brackets.push_back({i, j, {{next++, Rational(1)}}});
	return validate_algebra(next, std::move(brackets));
}

} // namespace algebras

} // namespace nilcohom
