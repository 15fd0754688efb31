#include "nilcohom/cohomology.hpp"
#include "nilcohom/error.hpp"
#include "nilcohom/exterior.hpp"
#include "nilcohom/lie_algebra.hpp"
#include "nilcohom/linalg.hpp"

#include "corpus.hpp"
#include "naive_cohomology.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace nilcohom;
using testing_support::algebra_corpus;
using testing_support::random_form;

namespace {

KForm e(int dim, std::vector<int> idx, Rational c = 1)
{
	return KForm::basis(dim, idx, c);
}

LieAlgebra h3() { return algebras::heisenberg(1); }

BracketEntry br(int i, int j, std::vector<std::pair<int, Rational>> terms)
{
	return BracketEntry{i, j, std::move(terms)};
}

} // namespace

TEST(Validate, AbelianSeries)
{
	auto a = validate_algebra(3, {});
	EXPECT_EQ(a.lower_central_series(), (std::vector<int>{3, 0}));
	EXPECT_EQ(a.weights(), (std::vector<int>{1, 1, 1}));
	EXPECT_EQ(a.homogeneous_dimension(), 3);
}

TEST(Validate, HeisenbergSeries)
{
	auto a = validate_algebra(3, {br(0, 1, {{2, 1}})});
	EXPECT_EQ(a.lower_central_series(), (std::vector<int>{3, 1, 0}));
	EXPECT_EQ(a.weights(), (std::vector<int>{1, 1, 2}));
	EXPECT_EQ(a.homogeneous_dimension(), 4);
	EXPECT_EQ(a, h3());
}

TEST(Validate, NotNilpotentReportsSeries)
{
	try {
		validate_algebra(3, {br(0, 1, {{2, 1}}), br(0, 2, {{1, 1}})});
		FAIL() << "expected NotNilpotent";
	} catch (const NotNilpotent& err) {
		EXPECT_EQ(err.series, (std::vector<int>{3, 2, 2}));
	}
}

TEST(Validate, JacobiViolationNamesTriple)
{
	std::vector<BracketEntry> ok{br(0, 1, {{2, 1}}), br(0, 2, {{3, 1}}), br(1, 2, {{3, 1}})};
	EXPECT_NO_THROW(validate_algebra(4, ok));
	auto bad = ok;
	bad.push_back(br(0, 3, {{3, 1}}));
	try {
		validate_algebra(4, bad);
		FAIL() << "expected JacobiViolation";
	} catch (const JacobiViolation& err) {
		EXPECT_EQ(err.i, 0);
		EXPECT_EQ(err.j, 1);
		EXPECT_EQ(err.k, 2);
		EXPECT_EQ(err.residual, (std::vector<std::string>{"0", "0", "0", "-1"}));
	}
}

TEST(Validate, MalformedInput)
{
	EXPECT_THROW(validate_algebra(0, {}), InvalidAlgebra);
	EXPECT_THROW(validate_algebra(3, {br(1, 0, {{2, 1}})}), InvalidAlgebra);
	EXPECT_THROW(validate_algebra(3, {br(0, 3, {{2, 1}})}), InvalidAlgebra);
	EXPECT_THROW(validate_algebra(3, {br(0, 1, {{5, 1}})}), InvalidAlgebra);
	EXPECT_THROW(validate_algebra(3, {br(0, 1, {{2, 1}}), br(0, 1, {{2, 2}})}), InvalidAlgebra);
}

TEST(Differential, AbelianOneFormsAreClosed)
{
	auto a = algebras::abelian(3);
	for (int i = 0; i < 3; ++i)
		EXPECT_TRUE(ce_differential(a, e(3, {i})).is_zero());
}

TEST(Differential, HeisenbergExamples)
{
	auto a = h3();
	EXPECT_EQ(ce_differential(a, e(3, {2})), e(3, {0, 1}, -1));
	EXPECT_TRUE(ce_differential(a, e(3, {0})).is_zero());
	EXPECT_TRUE(ce_differential(a, e(3, {1})).is_zero());
}

TEST(Differential, TopDegreeGivesEmptyForm)
{
	auto a = h3();
	auto top = ce_differential(a, e(3, {0, 1, 2}));
	EXPECT_EQ(top.degree(), 4);
	EXPECT_TRUE(top.is_zero());
}

TEST(Wedge, Examples)
{
	EXPECT_TRUE(wedge(e(3, {0}), e(3, {0})).is_zero());
	EXPECT_EQ(wedge(e(3, {0}), e(3, {1})), e(3, {0, 1}));
	EXPECT_EQ(wedge(e(3, {0}) + e(3, {1}), e(3, {1})), e(3, {0, 1}));
	EXPECT_EQ(wedge(e(3, {1}), e(3, {0})), e(3, {0, 1}, -1));
	EXPECT_TRUE(wedge(e(3, {0, 1}), e(3, {1, 2})).is_zero());
}

TEST(Wedge, MatchesAlternationFormula)
{
	std::mt19937_64 rng(11);
	for (int n = 2; n <= 5; ++n)
		for (int p = 0; p <= n; ++p)
			for (int q = 0; p + q <= n; ++q) {
				auto a = random_form(rng, n, p);
				auto b = random_form(rng, n, q);
				auto expected = oracle::wedge(n, testing_support::to_cochain(a), p, testing_support::to_cochain(b), q);
				EXPECT_TRUE(testing_support::same(wedge(a, b), expected)) << "n=" << n << " p=" << p << " q=" << q;
			}
}

TEST(Differential, MatchesNaiveEvaluation)
{
	oracle::Constants c;
	std::mt19937_64 rng(5);
	for (const auto& [name, alg] : algebra_corpus()) {
		c = oracle::constants_of(alg);
		for (int k = 0; k <= alg.dim(); ++k) {
			auto f = random_form(rng, alg.dim(), k);
			auto expected = oracle::differential(c, testing_support::to_cochain(f), k);
			EXPECT_TRUE(testing_support::same(ce_differential(alg, f), expected)) << name << " k=" << k;
		}
	}
}

// d as the unique antiderivation with d(e_k^*) = -sum_{i<j} c_ij^k e_i^* ^ e_j^*
TEST(Differential, MatchesDerivationRule)
{
	for (const auto& [name, alg] : algebra_corpus()) {
		const int n = alg.dim();
		std::vector<KForm> d1;
		for (int k = 0; k < n; ++k) {
			KForm f(n, 2);
			for (int i = 0; i < n; ++i)
				for (int j = i + 1; j < n; ++j)
					f += e(n, {i, j}, -alg.structure_constant(i, j, k));
			d1.push_back(f);
		}
		for (int deg = 1; deg <= n; ++deg)
			for (WedgeMask m : wedge_basis(n, deg)) {
				auto idx = mask_indices(m);
				KForm total(n, deg + 1);
				for (std::size_t pos = 0; pos < idx.size(); ++pos) {
					KForm term = KForm::unit(n);
					for (std::size_t q = 0; q < idx.size(); ++q)
						term = wedge(term, q == pos ? d1[idx[q]] : e(n, {idx[q]}));
					if (pos % 2 == 0)
						total += term;
					else
						total -= term;
				}
				EXPECT_EQ(ce_differential(alg, e(n, idx)), total) << name;
			}
	}
}

TEST(Properties, DifferentialSquaresToZero)
{
	std::mt19937_64 rng(1);
	for (const auto& [name, alg] : algebra_corpus())
		for (int trial = 0; trial < 100; ++trial) {
			int k = static_cast<int>(rng() % (alg.dim() + 1));
			auto f = random_form(rng, alg.dim(), k);
			EXPECT_TRUE(ce_differential(alg, ce_differential(alg, f)).is_zero()) << name;
		}
}

TEST(Properties, DifferentialMatricesCompose)
{
	for (const auto& [name, alg] : algebra_corpus())
		for (int k = 0; k + 1 < alg.dim(); ++k) {
			auto prod = differential_matrix(alg, k + 1) * differential_matrix(alg, k);
			for (std::size_t r = 0; r < prod.rows(); ++r)
				EXPECT_TRUE(is_zero(prod.row(r))) << name;
		}
}

TEST(Properties, LeibnizAndGradedCommutativity)
{
	std::mt19937_64 rng(2);
	for (const auto& [name, alg] : algebra_corpus()) {
		const int n = alg.dim();
		for (int trial = 0; trial < 20; ++trial) {
			int p = static_cast<int>(rng() % (n + 1));
			int q = static_cast<int>(rng() % (n + 1 - p));
			auto a = random_form(rng, n, p);
			auto b = random_form(rng, n, q);
			auto lhs = ce_differential(alg, wedge(a, b));
			auto rhs = wedge(ce_differential(alg, a), b);
			auto second = wedge(a, ce_differential(alg, b));
			if (p % 2 == 0)
				rhs += second;
			else
				rhs -= second;
			EXPECT_EQ(lhs, rhs) << name;

			auto ba = wedge(b, a);
			if ((p * q) % 2 == 1)
				ba = -ba;
			EXPECT_EQ(wedge(a, b), ba) << name;
		}
	}
}

TEST(Properties, WedgeAssociative)
{
	std::mt19937_64 rng(3);
	for (int trial = 0; trial < 50; ++trial) {
		auto a = random_form(rng, 5, 1);
		auto b = random_form(rng, 5, 2);
		auto c = random_form(rng, 5, 1);
		EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
	}
}

TEST(Cohomology, BettiExamples)
{
	EXPECT_EQ(cohomology(algebras::abelian(3)).betti(), (std::vector<int>{1, 3, 3, 1}));
	EXPECT_EQ(cohomology(h3()).betti(), (std::vector<int>{1, 2, 2, 1}));
	EXPECT_EQ(cohomology(algebras::filiform(4)).betti(), (std::vector<int>{1, 2, 2, 2, 1}));
}

TEST(Cohomology, BettiMatchesBruteForceOracle)
{
	for (const auto& [name, alg] : algebra_corpus()) {
		auto b = cohomology(alg).betti();
		EXPECT_EQ(b, oracle::betti(alg)) << name;
		const int n = alg.dim();
		int euler = 0;
		for (int k = 0; k <= n; ++k) {
			EXPECT_EQ(b[k], b[n - k]) << name << " k=" << k;
			euler += (k % 2 ? -1 : 1) * b[k];
		}
		EXPECT_EQ(euler, 0) << name;
		const int derived = alg.lower_central_series().size() > 1 ? alg.lower_central_series()[1] : 0;
		EXPECT_EQ(b[1], n - derived) << name;
	}
}

TEST(Cohomology, ProjectorIsLeftInverseAndKillsCoboundaries)
{
	std::mt19937_64 rng(4);
	for (const auto& [name, alg] : algebra_corpus()) {
		auto ring = cohomology(alg);
		for (int k = 0; k <= alg.dim(); ++k) {
			const auto& sp = ring.space(k);
			for (int i = 0; i < sp.betti; ++i) {
				EXPECT_TRUE(ce_differential(alg, sp.representatives[i]).is_zero());
				auto coords = sp.project(sp.representatives[i]);
				for (int j = 0; j < sp.betti; ++j)
					EXPECT_EQ(coords[j], Rational(i == j ? 1 : 0)) << name;
			}
			if (k > 0) {
				auto exact = ce_differential(alg, random_form(rng, alg.dim(), k - 1));
				EXPECT_TRUE(is_zero(sp.project(exact))) << name;
				for (double v : sp.non_closed_component(exact.cast<double>()))
					EXPECT_EQ(v, 0.0);
			}
			if (k < alg.dim()) {
				auto f = random_form(rng, alg.dim(), k);
				bool closed = ce_differential(alg, f).is_zero();
				bool zero_component = true;
				for (double v : sp.non_closed_component(f.cast<double>()))
					zero_component = zero_component && v == 0.0;
				EXPECT_EQ(closed, zero_component) << name;
			}
		}
	}
}

TEST(Cup, Examples)
{
	auto heis = cohomology(h3());
	EXPECT_TRUE(is_zero(cup_class(heis, 1, 0, 1, 1)));
	auto ab = cohomology(algebras::abelian(3));
	EXPECT_FALSE(is_zero(cup_class(ab, 1, 0, 1, 1)));
	EXPECT_THROW(cup_class(heis, 2, 0, 2, 0), DegreeOverflow);
}

TEST(Cup, UnitActsAsIdentity)
{
	for (const auto& [name, alg] : algebra_corpus()) {
		auto ring = cohomology(alg);
		ASSERT_EQ(ring.space(0).betti, 1);
		for (int k = 0; k <= alg.dim(); ++k)
			for (int i = 0; i < ring.space(k).betti; ++i) {
				auto v = cup_class(ring, 0, 0, k, i);
				for (int j = 0; j < ring.space(k).betti; ++j)
					EXPECT_EQ(v[j], Rational(i == j ? 1 : 0)) << name;
			}
	}
}

TEST(Cup, RealCoordinatesAgreeWithExact)
{
	auto ring = cohomology(algebras::free_nilpotent_class2(3));
	const auto& h1 = ring.space(1);
	const auto& h2 = ring.space(2);
	std::vector<double> u(h1.betti, 0.0), v(h2.betti, 0.0);
	u[0] = 1.5;
	v[1] = -2.0;
	auto real = ring.cup(1, u, 2, v);
	auto exact = cup_class(ring, 1, 0, 2, 1);
	for (std::size_t j = 0; j < real.size(); ++j)
		EXPECT_NEAR(real[j], -3.0 * to_double(exact[j]), 1e-12);
}

TEST(Ring, InvariantsAndComparison)
{
	auto ab3 = ring_invariants(cohomology(algebras::abelian(3)));
	auto heis = ring_invariants(cohomology(h3()));
	auto rank11 = [](const RingSignature& s) {
		for (const auto& c : s.cup_ranks)
			if (c.k == 1 && c.l == 1)
				return c.rank;
		return -1;
	};
	EXPECT_EQ(rank11(ab3), 3);
	EXPECT_EQ(rank11(heis), 0);
	EXPECT_EQ(compare(ab3, heis).verdict(), "distinguished");
	EXPECT_EQ(compare(heis, heis).verdict(), "indistinguishable-by-these-invariants");
	auto ab4 = ring_invariants(cohomology(algebras::abelian(4)));
	auto fil = ring_invariants(cohomology(algebras::filiform(4)));
	EXPECT_EQ(ab4.betti, (std::vector<int>{1, 4, 6, 4, 1}));
	EXPECT_TRUE(compare(ab4, fil).distinguished);
	EXPECT_FALSE(compare(ab4, fil).differences.empty());
}

TEST(Linalg, NullspaceAndInverse)
{
	auto m = RationalMatrix::from_rows({{1, 2, 3}, {2, 4, 6}}, 3);
	EXPECT_EQ(rank(m), 1u);
	auto ns = nullspace(m);
	ASSERT_EQ(ns.size(), 2u);
	for (const auto& v : ns)
		EXPECT_TRUE(is_zero(m.apply(v)));
	EXPECT_FALSE(inverse(m).has_value());
	auto a = RationalMatrix::from_rows({{2, 1}, {1, 1}}, 2);
	auto inv = inverse(a);
	ASSERT_TRUE(inv.has_value());
	EXPECT_EQ(a * *inv, RationalMatrix::identity(2));
}

TEST(Rational, Parsing)
{
	EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
	EXPECT_EQ(parse_rational("-1.25"), Rational(-5, 4));
	EXPECT_EQ(parse_rational("7"), Rational(7));
	EXPECT_THROW(parse_rational("1/0"), ParseError);
	EXPECT_THROW(parse_rational("abc"), ParseError);
	EXPECT_EQ(nilcohom::to_string(Rational(-3, 4)), "-3/4");
}
