#include "nilcohom/error.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/lie_algebra.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace nilcohom;

namespace {

using RV = std::vector<Rational>;

RV random_point(std::mt19937_64& rng, int n)
{
	std::uniform_int_distribution<int> num(-12, 12);
	std::uniform_int_distribution<int> den(1, 5);
	RV out;
	for (int i = 0; i < n; ++i) {
		Rational q(num(rng), den(rng));
		q.canonicalize();
		out.push_back(q);
	}
	return out;
}

RV axpy(const RV& a, const RV& b, const Rational& s)
{
	RV out = a;
	for (std::size_t i = 0; i < out.size(); ++i)
		out[i] += s * b[i];
	return out;
}

// BCH through degree four:
//   Z = X + Y + [X,Y]/2 + ([X,[X,Y]] - [Y,[X,Y]])/12 - [Y,[X,[X,Y]]]/24,
// exact for nilpotency class at most four.
RV bch_degree4(const LieAlgebra& alg, const RV& x, const RV& y)
{
	RV xy = alg.bracket(x, y);
	RV xxy = alg.bracket(x, xy);
	RV yxy = alg.bracket(y, xy);
	RV yxxy = alg.bracket(y, xxy);
	RV z = axpy(x, y, 1);
	z = axpy(z, xy, Rational(1, 2));
	z = axpy(z, xxy, Rational(1, 12));
	z = axpy(z, yxy, Rational(-1, 12));
	z = axpy(z, yxxy, Rational(-1, 24));
	return z;
}

RV mul(const Group& g, const RV& x, const RV& y)
{
	return g.multiply<Rational>(std::span<const Rational>(x), std::span<const Rational>(y));
}

std::vector<LieAlgebra> low_class_algebras()
{
	return {algebras::abelian(3), algebras::heisenberg(1), algebras::heisenberg(2), algebras::filiform(4),
		algebras::filiform(5), algebras::free_nilpotent_class2(3)};
}

} // namespace

TEST(Multiply, Examples)
{
	Group ab(algebras::abelian(3));
	EXPECT_EQ(ab.multiply({1, 2, 3}, {4, 5, 6}), (GroupPoint{5, 7, 9}));
	Group h(algebras::heisenberg(1));
	EXPECT_EQ(mul(h, {1, 0, 0}, {0, 1, 0}), (RV{1, 1, Rational(1, 2)}));
	EXPECT_EQ(Group::inverse(GroupPoint{1, 1, 0.5}), (GroupPoint{-1, -1, -0.5}));
	EXPECT_TRUE(ab.is_abelian());
	EXPECT_FALSE(h.is_abelian());
}

TEST(Multiply, HeisenbergClosedForm)
{
	Group h(algebras::heisenberg(1));
	std::mt19937_64 rng(1);
	for (int t = 0; t < 50; ++t) {
		RV x = random_point(rng, 3), y = random_point(rng, 3);
		RV expected{x[0] + y[0], x[1] + y[1], x[2] + y[2] + (x[0] * y[1] - x[1] * y[0]) / 2};
		EXPECT_EQ(mul(h, x, y), expected);
	}
}

TEST(Multiply, MatchesLowOrderSeries)
{
	std::mt19937_64 rng(2);
	for (const auto& alg : low_class_algebras()) {
		ASSERT_LE(alg.nilpotency_class(), 4);
		Group g(alg);
		for (int t = 0; t < 30; ++t) {
			RV x = random_point(rng, alg.dim()), y = random_point(rng, alg.dim());
			EXPECT_EQ(mul(g, x, y), bch_degree4(alg, x, y));
		}
	}
}

TEST(Multiply, AssociativeAndInverse)
{
	std::mt19937_64 rng(3);
	auto list = low_class_algebras();
	list.push_back(algebras::filiform(6));
	for (const auto& alg : list) {
		Group g(alg);
		RV zero(alg.dim(), Rational(0));
		for (int t = 0; t < 20; ++t) {
			RV x = random_point(rng, alg.dim()), y = random_point(rng, alg.dim()), z = random_point(rng, alg.dim());
			EXPECT_EQ(mul(g, mul(g, x, y), z), mul(g, x, mul(g, y, z)));
			RV xi = Group::inverse<Rational>(std::span<const Rational>(x));
			EXPECT_EQ(mul(g, x, xi), zero);
			EXPECT_EQ(mul(g, xi, x), zero);
			EXPECT_EQ(mul(g, x, zero), x);
		}
	}
}

TEST(Frame, Examples)
{
	Group ab(algebras::abelian(3));
	GroupPoint p{0.3, -2.0, 5.0};
	EXPECT_TRUE(ab.left_frame(p).isIdentity());

	Group h(algebras::heisenberg(1));
	RV g{Rational(3), Rational(-5), Rational(7)};
	auto f = h.left_frame(std::span<const Rational>(g));
	RationalMatrix expected = RationalMatrix::from_columns(
		{{1, 0, Rational(5, 2)}, {0, 1, Rational(3, 2)}, {0, 0, 1}}, 3);
	EXPECT_EQ(f, expected);

	GroupPoint origin(3, 0.0);
	EXPECT_TRUE(h.left_frame(origin).isIdentity());
	EXPECT_TRUE(h.lower_triangular_frames());
}

TEST(Frame, RealAndExactAgree)
{
	Group g(algebras::filiform(5));
	std::mt19937_64 rng(4);
	RV x = random_point(rng, 5);
	GroupPoint xd;
	for (const auto& q : x)
		xd.push_back(q.get_d());
	auto exact = g.left_frame(std::span<const Rational>(x));
	auto real = g.left_frame(xd);
	for (int r = 0; r < 5; ++r)
		for (int c = 0; c < 5; ++c)
			EXPECT_NEAR(real(r, c), exact(r, c).get_d(), 1e-12);
}

TEST(Frame, LeftInvariance)
{
	std::mt19937_64 rng(5);
	auto list = low_class_algebras();
	list.push_back(algebras::filiform(6));
	for (const auto& alg : list) {
		Group grp(alg);
		for (int t = 0; t < 10; ++t) {
			RV g = random_point(rng, alg.dim()), h = random_point(rng, alg.dim());
			auto pushed = grp.translation_jacobian(g, h) * grp.left_frame(std::span<const Rational>(h));
			EXPECT_EQ(pushed, grp.left_frame(std::span<const Rational>(mul(grp, g, h))));
		}
	}
}

TEST(Norm, Examples)
{
	Group h(algebras::heisenberg(1));
	EXPECT_DOUBLE_EQ(h.quasi_norm(GroupPoint{0, 0, 4}), 2.0);
	EXPECT_DOUBLE_EQ(h.quasi_norm(GroupPoint{0, 0, 0}), 0.0);
	EXPECT_DOUBLE_EQ(h.quasi_norm(h.dilate(GroupPoint{1, 0, 0}, 3.0)), 3.0);
	EXPECT_EQ(h.dilate(GroupPoint{1, 1, 1}, 2.0), (GroupPoint{2, 2, 4}));
}

TEST(Norm, HomogeneousUnderDilation)
{
	Group g(algebras::filiform(5));
	std::mt19937_64 rng(6);
	std::uniform_real_distribution<double> u(-2, 2);
	for (int t = 0; t < 20; ++t) {
		GroupPoint p(5);
		for (auto& v : p)
			v = u(rng);
		for (double r : {0.5, 3.0}) {
			EXPECT_NEAR(g.homogeneous_norm(g.dilate(p, r)), r * g.homogeneous_norm(p), 1e-10 * r);
			EXPECT_NEAR(g.quasi_norm(g.dilate(p, r)), r * g.quasi_norm(p), 1e-10 * r);
		}
		EXPECT_LE(g.quasi_norm(p), g.homogeneous_norm(p) * (1 + 1e-12));
	}
}

TEST(Ball, ShapeNames)
{
	EXPECT_EQ(parse_ball_shape("box"), BallShape::Box);
	EXPECT_EQ(parse_ball_shape("quasi-ball"), BallShape::QuasiBall);
	EXPECT_EQ(to_string(BallShape::QuasiBall), "quasi-ball");
	EXPECT_THROW(parse_ball_shape("sphere"), Error);
}

TEST(Ball, EuclideanMeanNearZero)
{
	Group line(algebras::abelian(1));
	const std::size_t count = 100000;
	auto pts = sample_ball(line, make_ball(line, 1.0), count, 9);
	double sum = 0;
	for (const auto& p : pts) {
		ASSERT_LE(std::abs(p[0]), 1.0);
		sum += p[0];
	}
	EXPECT_LT(std::abs(sum / count), 3.0 / std::sqrt(static_cast<double>(count)));
}

TEST(Ball, SamplesStayInside)
{
	Group h(algebras::heisenberg(1));
	for (auto shape : {BallShape::Box, BallShape::QuasiBall}) {
		auto spec = make_ball(h, 2.5, shape);
		for (const auto& p : sample_ball(h, spec, 5000, 1)) {
			EXPECT_LE(h.quasi_norm(p), 2.5 * (1 + 1e-12));
			if (shape == BallShape::QuasiBall) {
				EXPECT_LE(h.homogeneous_norm(p), 2.5 * (1 + 1e-12));
			}
		}
	}
}

TEST(Ball, SamplerIsAPureFunctionOfIndex)
{
	Group h(algebras::heisenberg(1));
	BallSampler s(h, make_ball(h, 3.0, BallShape::QuasiBall), 42, 3);
	auto a = s.sample(1234);
	(void)s.sample(7);
	EXPECT_EQ(s.sample(1234), a);
	BallSampler other(h, make_ball(h, 3.0, BallShape::QuasiBall), 42, 4);
	EXPECT_NE(other.sample(1234), a);
	EXPECT_EQ(sample_ball(h, make_ball(h, 2.0), 100, 5), sample_ball(h, make_ball(h, 2.0), 100, 5));
}

TEST(Ball, BoxVolume)
{
	Group h(algebras::heisenberg(1));
	EXPECT_DOUBLE_EQ(ball_volume(make_ball(h, 2.0)), 4.0 * 4.0 * 8.0);
}

// Monte Carlo volume of the quasi-ball (hit fraction inside the enclosing
// box) against the closed form, and the growth exponent from a log-log fit.
TEST(Ball, VolumeGrowthExponent)
{
	Group h(algebras::heisenberg(1));
	const std::size_t count = 200000;
	std::vector<double> xs, ys;
	for (double r : {1.0, 2.0, 4.0, 8.0}) {
		auto box = make_ball(h, r);
		std::size_t hits = 0;
		for (const auto& p : sample_ball(h, box, count, 17))
			hits += h.homogeneous_norm(p) <= r;
		double vol = ball_volume(box) * static_cast<double>(hits) / count;
		EXPECT_NEAR(vol / ball_volume(make_ball(h, r, BallShape::QuasiBall)), 1.0, 0.02);
		xs.push_back(std::log(r));
		ys.push_back(std::log(vol));
	}
	double mx = 0, my = 0;
	for (std::size_t i = 0; i < xs.size(); ++i) {
		mx += xs[i] / xs.size();
		my += ys[i] / ys.size();
	}
	double sxy = 0, sxx = 0;
	for (std::size_t i = 0; i < xs.size(); ++i) {
		sxy += (xs[i] - mx) * (ys[i] - my);
		sxx += (xs[i] - mx) * (xs[i] - mx);
	}
	const double slope = sxy / sxx;
	EXPECT_NEAR(slope, h.algebra().homogeneous_dimension(), 0.02 * 4);
}

TEST(Ball, HaarLeftInvariance)
{
	Group h(algebras::heisenberg(1));
	auto bump = [](const GroupPoint& p) { return std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])); };
	const std::size_t count = 200000;
	auto spec = make_ball(h, 3.0);
	auto pts = sample_ball(h, spec, count, 23);
	std::mt19937_64 rng(8);
	std::uniform_real_distribution<double> u(-0.5, 0.5);
	for (int t = 0; t < 3; ++t) {
		GroupPoint g{u(rng), u(rng), u(rng)};
		double plain = 0, shifted = 0;
		for (const auto& p : pts) {
			plain += bump(p);
			shifted += bump(h.multiply(g, p));
		}
		EXPECT_NEAR(plain / count, shifted / count, 4.0 / std::sqrt(static_cast<double>(count)));
	}
}
