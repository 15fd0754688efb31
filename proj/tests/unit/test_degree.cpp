#include "nilcohom/degree.hpp"
#include "nilcohom/error.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/pullback.hpp"
#include "nilcohom/smooth_map.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

using namespace nilcohom;

namespace {

GroupPtr group(LieAlgebra alg) { return std::make_shared<const Group>(std::move(alg)); }

SmoothMap line_map(const std::string& expr)
{
	auto line = group(algebras::abelian(1));
	return SmoothMap(line, line, {expr});
}

BallSpec window(const SmoothMap& phi, double r) { return make_ball(phi.domain(), r); }

int degree_of(const SmoothMap& phi, double r, GroupPoint target, DegreeOptions o = {})
{
	return local_degree(phi, window(phi, r), target, o).value;
}

SamplingOptions opts(std::size_t samples, std::uint64_t seed = 0, int threads = 1)
{
	SamplingOptions o;
	o.samples = samples;
	o.seed = seed;
	o.threads = threads;
	return o;
}

double bisect(double (*f)(double), double lo, double hi)
{
	for (int i = 0; i < 200; ++i) {
		double mid = 0.5 * (lo + hi);
		if ((f(lo) < 0) == (f(mid) < 0))
			lo = mid;
		else
			hi = mid;
	}
	return 0.5 * (lo + hi);
}

} // namespace

TEST(LocalDegree, Examples)
{
	auto plane = group(algebras::abelian(2));
	SmoothMap id(plane, plane, {"x1", "x2"});
	auto r = local_degree(id, window(id, 2.0), GroupPoint{0.3, -0.1});
	EXPECT_EQ(r.value, 1);
	EXPECT_EQ(r.preimage_count, 1);
	EXPECT_TRUE(r.stable);

	EXPECT_EQ(degree_of(line_map("-x1"), 2.0, {0.5}), -1);

	auto res = local_degree(line_map("x1 + sin(x1)"), window(line_map("x1"), 10.0), GroupPoint{0.5});
	EXPECT_EQ(res.value, 1);
	ASSERT_EQ(res.preimages.size(), 1u);
	const double root = bisect([](double x) { return x + std::sin(x) - 0.5; }, -10.0, 10.0);
	EXPECT_NEAR(res.preimages[0][0], root, 1e-9);
}

TEST(LocalDegree, MultiplePreimagesCancel)
{
	auto r = local_degree(line_map("x1^2"), window(line_map("x1"), 2.0), GroupPoint{1.0});
	EXPECT_EQ(r.value, 0);
	EXPECT_EQ(r.preimage_count, 2);
	auto cubic = local_degree(line_map("x1^3 - 3*x1"), window(line_map("x1"), 3.0), GroupPoint{0.5});
	EXPECT_EQ(cubic.value, 1);
	EXPECT_EQ(cubic.preimage_count, 3);
}

TEST(LocalDegree, PlanarRotationAndReflection)
{
	auto plane = group(algebras::abelian(2));
	SmoothMap swap(plane, plane, {"x2", "x1"});
	EXPECT_EQ(degree_of(swap, 1.0, {0.1, 0.2}), -1);
	// z -> z^2 on the plane has degree 2 around the origin
	SmoothMap square(plane, plane, {"x1^2 - x2^2", "2*x1*x2"});
	EXPECT_EQ(degree_of(square, 1.0, {0.1, 0.05}), 2);
}

TEST(LocalDegree, Errors)
{
	EXPECT_THROW(degree_of(line_map("x1"), 2.0, {2.0}), BoundaryTooClose);
	auto plane = group(algebras::abelian(2));
	SmoothMap f1(group(algebras::abelian(1)), plane, {"x1", "sin(x1)"});
	EXPECT_THROW(local_degree(f1, window(f1, 1.0), GroupPoint{0.1, 0.1}), DimensionMismatch);
	EXPECT_THROW(degree_of(line_map("x1"), 2.0, {0.1, 0.2}), DimensionMismatch);
}

TEST(LocalDegree, CriticalTargetIsPerturbed)
{
	auto r = local_degree(line_map("x1^2"), window(line_map("x1"), 1.0), GroupPoint{0.0});
	EXPECT_GE(r.retries, 1);
	EXPECT_EQ(r.value, 0);
	EXPECT_NE(r.target[0], 0.0);
	EXPECT_LE(std::abs(r.target[0]), 0.01 * 3 + 1e-15);
}

TEST(LocalDegree, HomotopyInvariance)
{
	auto plane = group(algebras::abelian(2));
	for (int step = 0; step <= 10; ++step) {
		const double t = 0.1 * step;
		const std::string s = std::to_string(0.1 * t);
		SmoothMap ft(plane, plane, {"x1 + " + s + "*sin(3*x2)", "x2 + " + s + "*cos(2*x1)"});
		EXPECT_EQ(degree_of(ft, 2.0, {0.2, -0.3}), 1) << "t=" << t;
	}
}

TEST(LocalDegree, BasepointInvariance)
{
	auto cubic = line_map("x1^3");
	EXPECT_EQ(degree_of(cubic, 1.0, {0.3}), degree_of(cubic, 1.0, {-0.5}));
	auto sq = line_map("x1^2");
	EXPECT_EQ(degree_of(sq, 2.0, {1.0}), degree_of(sq, 2.0, {-1.0}));
	auto plane = group(algebras::abelian(2));
	SmoothMap square(plane, plane, {"x1^2 - x2^2", "2*x1*x2"});
	EXPECT_EQ(degree_of(square, 1.0, {0.1, 0.05}), degree_of(square, 1.0, {-0.3, 0.2}));
}

TEST(LocalDegree, Excision)
{
	auto cubic = line_map("x1^3 - 3*x1");
	auto wide = local_degree(cubic, window(cubic, 3.0), GroupPoint{0.5});
	double reach = 0;
	for (const auto& p : wide.preimages)
		reach = std::max(reach, std::abs(p[0]));
	auto narrow = local_degree(cubic, window(cubic, 0.5 * (reach + 3.0)), GroupPoint{0.5});
	EXPECT_EQ(narrow.preimage_count, wide.preimage_count);
	EXPECT_EQ(narrow.value, wide.value);
}

TEST(AreaFormula, Examples)
{
	auto cube = line_map("x1^3");
	auto rep = area_formula_check(cube, window(cube, 1.0), opts(100000, 3));
	EXPECT_NEAR(rep.signed_lhs, 2.0, 3 * rep.signed_lhs_stderr);
	EXPECT_LE(std::abs(rep.residual), 3 * rep.combined_stderr);
	EXPECT_GE(rep.unsigned_lhs, std::abs(rep.signed_lhs) - 3 * rep.unsigned_lhs_stderr);

	auto plane = group(algebras::abelian(2));
	SmoothMap id(plane, plane, {"x1", "x2"});
	auto idrep = area_formula_check(id, make_ball(*plane, 1.5), opts(20000, 4));
	EXPECT_NEAR(idrep.signed_lhs, 9.0, 1e-12);
	EXPECT_NEAR(idrep.window_volume, 9.0, 1e-12);
	EXPECT_NEAR(idrep.rhs, 9.0, 3 * idrep.rhs_stderr + 1e-9);

	auto neg = line_map("-x1");
	auto negrep = area_formula_check(neg, window(neg, 1.0), opts(20000, 3));
	EXPECT_NEAR(negrep.signed_lhs, -2.0, 1e-12);
	EXPECT_LE(std::abs(negrep.residual), 3 * negrep.combined_stderr + 1e-9);
}

TEST(AreaFormula, UnsignedBound)
{
	auto wave = line_map("sin(3*x1)");
	auto rep = area_formula_check(wave, window(wave, 2.0), opts(50000, 6));
	EXPECT_GE(rep.unsigned_lhs, std::abs(rep.signed_lhs) - 3 * rep.unsigned_lhs_stderr);
	EXPECT_LE(std::abs(rep.residual), 3 * rep.combined_stderr + 1e-9);
}

TEST(AsymptoticDegree, Examples)
{
	auto h = group(algebras::heisenberg(1));
	SmoothMap id(h, h, {"x1", "x2", "x3"});
	auto tr = asymptotic_degree(id, geometric_schedule(1, 2, 4), opts(5000));
	for (double r : tr.ratio)
		EXPECT_NEAR(r, 1.0, 1e-12);
	EXPECT_EQ(tr.verdict, "positive-asymptotic-degree");

	SmoothMap aut(h, h, {"2*x1", "x2", "2*x3"});
	auto ta = asymptotic_degree(aut, geometric_schedule(1, 2, 5), opts(5000));
	ASSERT_EQ(ta.ratio.size(), 5u);
	for (std::size_t i = 0; i < ta.ratio.size(); ++i)
		EXPECT_LE(std::abs(ta.ratio[i] - 4.0), 3 * ta.ratio_stderr[i] + 1e-9);
	EXPECT_GT(ta.distortion_min, 0.0);

	auto sine = line_map("sin(x1)");
	auto ts = asymptotic_degree(sine, geometric_schedule(4, 2, 5), opts(100000, 2));
	EXPECT_LE(std::abs(ts.ratio.back()), 0.05);
	EXPECT_EQ(ts.verdict, "not-established");

	auto neg = line_map("-x1");
	EXPECT_EQ(asymptotic_degree(neg, geometric_schedule(1, 2, 3), opts(1000)).verdict, "negative-asymptotic-degree");
}

TEST(AsymptoticDegree, ConstantJacobianGivesDeterminant)
{
	auto plane = group(algebras::abelian(2));
	SmoothMap lin(plane, plane, {"2*x1 + x2", "3*x2 - x1/2"});
	auto tr = asymptotic_degree(lin, geometric_schedule(1, 3, 4), opts(3000));
	for (std::size_t i = 0; i < tr.ratio.size(); ++i)
		EXPECT_LE(std::abs(tr.ratio[i] - 6.5), 3 * tr.ratio_stderr[i] + 1e-9);
}

TEST(AsymptoticDegree, BitIdenticalAcrossThreads)
{
	auto sine = line_map("x1 + sin(x1)");
	auto a = asymptotic_degree(sine, geometric_schedule(4, 2, 3), opts(30000, 1, 1));
	auto b = asymptotic_degree(sine, geometric_schedule(4, 2, 3), opts(30000, 1, 8));
	EXPECT_EQ(a.tau, b.tau);
	EXPECT_EQ(a.ratio_stderr, b.ratio_stderr);
	EXPECT_EQ(a.distortion_min, b.distortion_min);
}
