#include "nilcohom/error.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/lie_algebra.hpp"
#include "nilcohom/smooth_map.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace nilcohom;

namespace {

GroupPtr group(LieAlgebra alg) { return std::make_shared<const Group>(std::move(alg)); }

GroupPtr line() { return group(algebras::abelian(1)); }
GroupPtr plane() { return group(algebras::abelian(2)); }
GroupPtr heis() { return group(algebras::heisenberg(1)); }

SmoothMap f1() { return SmoothMap(line(), plane(), {"x1", "sin(x1)"}); }
SmoothMap f2() { return SmoothMap(line(), plane(), {"x1", "abs(x1)"}); }

void expect_point_near(const GroupPoint& a, const GroupPoint& b, double tol)
{
	ASSERT_EQ(a.size(), b.size());
	for (std::size_t i = 0; i < a.size(); ++i)
		EXPECT_NEAR(a[i], b[i], tol) << "coordinate " << i;
}

} // namespace

TEST(SmoothMap, Construction)
{
	EXPECT_THROW(SmoothMap(line(), plane(), {"x1"}), DimensionMismatch);
	EXPECT_THROW(SmoothMap(line(), plane(), {"x1", "x2"}), UnknownSymbol);
	auto m = f1();
	EXPECT_EQ(m.component_text(), (std::vector<std::string>{"x1", "sin(x1)"}));
}

TEST(SmoothMap, EvaluateExamples)
{
	auto h = heis();
	SmoothMap id(h, h, {"x1", "x2", "x3"});
	EXPECT_EQ(id.evaluate(GroupPoint{1, 2, 3}), (GroupPoint{1, 2, 3}));
	expect_point_near(f1().evaluate(GroupPoint{std::numbers::pi / 2}), {std::numbers::pi / 2, 1.0}, 1e-15);
	SmoothMap bad(line(), line(), {"log(x1)"});
	EXPECT_THROW(bad.evaluate(GroupPoint{-1.0}), DomainError);
}

TEST(SmoothMap, DifferentialExamples)
{
	std::mt19937_64 rng(1);
	std::uniform_real_distribution<double> u(-3, 3);
	for (const auto& alg : {algebras::heisenberg(1), algebras::filiform(5), algebras::heisenberg(2)}) {
		auto g = group(alg);
		std::vector<std::string> comps;
		for (int i = 1; i <= alg.dim(); ++i)
			comps.push_back("x" + std::to_string(i));
		SmoothMap id(g, g, comps);
		GroupPoint p(alg.dim());
		for (auto& v : p)
			v = u(rng);
		EXPECT_TRUE(id.differential(p).isIdentity(1e-12));
	}

	auto d = f1().differential(GroupPoint{0.0});
	ASSERT_EQ(d.rows(), 2);
	ASSERT_EQ(d.cols(), 1);
	EXPECT_DOUBLE_EQ(d(0, 0), 1.0);
	EXPECT_DOUBLE_EQ(d(1, 0), 1.0);

	SmoothMap lin(plane(), group(algebras::abelian(3)), {"2*x1 - x2", "x2/4", "3*x1 + x2"});
	auto m = lin.differential(GroupPoint{u(rng), u(rng)});
	Eigen::MatrixXd a(3, 2);
	a << 2, -1, 0, 0.25, 3, 1;
	EXPECT_TRUE(m.isApprox(a, 1e-14));
}

// For a Lie group homomorphism the frame differential is the constant
// matrix of its derivative at the identity.
TEST(SmoothMap, AutomorphismHasConstantDifferential)
{
	auto h = heis();
	SmoothMap aut(h, h, {"2*x1", "x2", "2*x3"});
	std::mt19937_64 rng(2);
	std::uniform_real_distribution<double> u(-5, 5);
	for (int t = 0; t < 10; ++t) {
		GroupPoint p{u(rng), u(rng), u(rng)};
		auto m = aut.differential(p);
		Eigen::Matrix3d expected = Eigen::Vector3d(2, 1, 2).asDiagonal();
		EXPECT_TRUE(m.isApprox(expected, 1e-12)) << m;
	}
}

TEST(SmoothMap, JetMatchesFiniteDifferences)
{
	auto h = heis();
	SmoothMap phi(h, h, {"x1 + sin(x2)/3", "x2 - x1^2/5", "x3 + tanh(x1*x2)"});
	std::mt19937_64 rng(3);
	std::uniform_real_distribution<double> u(-1.5, 1.5);
	for (int t = 0; t < 10; ++t) {
		GroupPoint p{u(rng), u(rng), u(rng)};
		auto jet = phi.evaluate_jet(p);
		for (int i = 0; i < 3; ++i) {
			const double step = 1e-5;
			auto pp = p, pm = p;
			pp[i] += step;
			pm[i] -= step;
			auto fp = phi.evaluate(pp), fm = phi.evaluate(pm);
			for (int k = 0; k < 3; ++k) {
				double fd = (fp[k] - fm[k]) / (2 * step);
				EXPECT_NEAR(jet.jacobian(k, i), fd, 1e-6 * std::max(1.0, std::abs(fd)));
			}
		}
	}
}

TEST(SmoothMap, NormalizeExamples)
{
	SmoothMap shifted(line(), plane(), {"x1", "sin(x1) + 5"});
	auto n = shifted.normalize_to_y0();
	expect_point_near(n.evaluate(GroupPoint{0.0}), {0.0, 0.0}, 1e-15);
	expect_point_near(n.evaluate(GroupPoint{1.0}), {1.0, std::sin(1.0)}, 1e-15);

	auto nn = n.normalize_to_y0();
	for (double x : {-2.0, 0.5, 3.0})
		EXPECT_EQ(nn.evaluate(GroupPoint{x}), n.evaluate(GroupPoint{x}));

	// g -> (1,0,0) g written out in coordinates through the group law
	auto h = heis();
	SmoothMap left(h, h, {"1 + x1", "x2", "x3 + x2/2"});
	auto norm = left.normalize_to_y0();
	std::mt19937_64 rng(4);
	std::uniform_real_distribution<double> u(-3, 3);
	for (int t = 0; t < 10; ++t) {
		GroupPoint p{u(rng), u(rng), u(rng)};
		expect_point_near(norm.evaluate(p), p, 1e-12);
	}
}

TEST(SmoothMap, ActExamples)
{
	auto h = heis();
	SmoothMap id(h, h, {"x1", "x2", "x3"});
	auto moved = id.act(GroupPoint{0.7, -1.3, 2.0});
	std::mt19937_64 rng(5);
	std::uniform_real_distribution<double> u(-3, 3);
	for (int t = 0; t < 10; ++t) {
		GroupPoint p{u(rng), u(rng), u(rng)};
		expect_point_near(moved.evaluate(p), p, 1e-12);
	}

	for (double shift : {0.4, -2.0}) {
		auto a = f1().act(GroupPoint{shift});
		for (double x : {-1.0, 0.0, 2.5})
			expect_point_near(a.evaluate(GroupPoint{x}), {x, std::sin(x + shift) - std::sin(shift)}, 1e-14);
	}
	auto b = f2().act(GroupPoint{1.0});
	for (double x : {-3.0, -0.5, 0.0, 2.0})
		expect_point_near(b.evaluate(GroupPoint{x}), {x, std::abs(1 + x) - 1}, 1e-15);
}

TEST(SmoothMap, ActionComposes)
{
	auto h = heis();
	SmoothMap phi(h, h, {"x1 + sin(x2)", "x2 + x1^2/4", "x3 - x1*x2 + cos(x1)"});
	std::mt19937_64 rng(6);
	std::uniform_real_distribution<double> u(-2, 2);
	for (int t = 0; t < 20; ++t) {
		GroupPoint g1{u(rng), u(rng), u(rng)}, g2{u(rng), u(rng), u(rng)}, p{u(rng), u(rng), u(rng)};
		auto lhs = phi.act(g1).act(g2).evaluate(p);
		auto rhs = phi.act(h->multiply(g1, g2)).evaluate(p);
		expect_point_near(lhs, rhs, 1e-10);
	}
}

TEST(SmoothMap, TranslatesLieInY0)
{
	auto h = heis();
	SmoothMap phi(h, h, {"x1 + sin(x2)", "x2", "x3 + x1^3"});
	auto a = phi.act(GroupPoint{1.0, -0.5, 0.25});
	expect_point_near(a.evaluate(GroupPoint{0, 0, 0}), {0, 0, 0}, 1e-14);
	// the differential of phi . g at the identity is that of phi at g
	auto d_moved = a.differential(GroupPoint{0, 0, 0});
	auto d_here = phi.differential(GroupPoint{1.0, -0.5, 0.25});
	EXPECT_TRUE(d_moved.isApprox(d_here, 1e-12));
}

TEST(SmoothMap, DomainTooLarge)
{
	auto big = group(algebras::abelian(13));
	std::vector<std::string> comps(13, "0");
	EXPECT_THROW(SmoothMap(big, big, comps), Error);
}
