#pragma once

#include "nilcohom/lie_algebra.hpp"
#include "nilcohom/linalg.hpp"
#include "nilcohom/polynomial.hpp"
#include "nilcohom/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nilcohom {

/// A point of the simply connected group, given by the coordinates of its
/// logarithm in the algebra basis.
using GroupPoint = std::vector<double>;

/// Simply connected nilpotent Lie group in exponential coordinates of the
/// first kind. The product is the Baker-Campbell-Hausdorff series, which
/// for a nilpotent algebra is a finite polynomial; it is expanded exactly
/// once at construction from the Dynkin form of the series.
class Group {
public:
	explicit Group(LieAlgebra algebra);

	const LieAlgebra& algebra() const noexcept { return alg_; }
	int dim() const noexcept { return alg_.dim(); }
	const std::vector<int>& weights() const noexcept { return alg_.weights(); }

	/// Components of x*y as polynomials in (x_1..x_n, y_1..y_n).
	const std::vector<Polynomial>& product_polynomials() const noexcept { return product_; }

	template <class T>
	std::vector<T> multiply(std::span<const T> x, std::span<const T> y) const
	{
		const int n = dim();
		std::vector<T> xy;
		xy.reserve(2 * static_cast<std::size_t>(n));
		xy.insert(xy.end(), x.begin(), x.end());
		xy.insert(xy.end(), y.begin(), y.end());
		std::vector<T> out;
		out.reserve(static_cast<std::size_t>(n));
		for (int k = 0; k < n; ++k)
			out.push_back(compiled_product_[k].evaluate<T>(xy));
		return out;
	}

	GroupPoint multiply(const GroupPoint& x, const GroupPoint& y) const
	{
		return multiply<double>(std::span<const double>(x), std::span<const double>(y));
	}

	/// log(g^-1) = -log(g).
	template <class T>
	static std::vector<T> inverse(std::span<const T> x)
	{
		std::vector<T> out(x.begin(), x.end());
		for (auto& v : out)
			v = -v;
		return out;
	}
	static GroupPoint inverse(const GroupPoint& x) { return inverse<double>(std::span<const double>(x)); }

	/// Columns are the left-invariant fields V_i at g in coordinate partials,
	/// i.e. the derivative of y -> g*y at y = 0.
	Eigen::MatrixXd left_frame(std::span<const double> g) const;
	RationalMatrix left_frame(std::span<const Rational> g) const;

	/// Derivative of y -> g*y at y = h.
	RationalMatrix translation_jacobian(std::span<const Rational> g, std::span<const Rational> h) const;

	/// True when the frame at every point is unit lower triangular, which
	/// holds whenever the basis is ordered along the lower central series.
	bool lower_triangular_frames() const noexcept { return lower_triangular_; }

	bool is_abelian() const noexcept { return abelian_; }

	/// max_i |g_i|^(1/w_i).
	double quasi_norm(std::span<const double> g) const;
	/// (sum_i |g_i|^(2L/w_i))^(1/(2L)) with L the least common multiple of
	/// the weights; smooth away from the origin and homogeneous of degree 1.
	double homogeneous_norm(std::span<const double> g) const;
	/// Dilation delta_r: g_i -> r^{w_i} g_i.
	GroupPoint dilate(std::span<const double> g, double r) const;

	int norm_exponent() const noexcept { return norm_exponent_; }

private:
	LieAlgebra alg_;
	std::vector<Polynomial> product_;
	std::vector<CompiledPolynomial> compiled_product_;
	std::vector<Polynomial> dmul_dy_;          // [k * n + i] = d(xy)_k / dy_i
	std::vector<CompiledPolynomial> frame_;    // dmul_dy_ at y = 0, row-major
	bool lower_triangular_ = true;
	bool abelian_ = true;
	int norm_exponent_ = 2; // 2L
};

enum class BallShape { Box, QuasiBall };

std::string to_string(BallShape shape);
BallShape parse_ball_shape(const std::string& text);

/// Folner set of radius R. Box: |g_i| <= R^{w_i}. QuasiBall: the sublevel
/// set homogeneous_norm <= R, sampled by rejection from the enclosing box.
struct BallSpec {
	double radius = 1.0;
	BallShape shape = BallShape::Box;
	std::vector<int> layer_weights;
};

BallSpec make_ball(const Group& group, double radius, BallShape shape = BallShape::Box);

/// Haar (Lebesgue in exponential coordinates) volume of the ball.
double ball_volume(const BallSpec& spec);

/// Uniform Haar sampler. Sample i is a pure function of (seed, stream, i).
class BallSampler {
public:
	BallSampler(const Group& group, BallSpec spec, std::uint64_t seed, std::uint64_t stream = 0);

	const BallSpec& spec() const noexcept { return spec_; }
	void sample(std::uint64_t index, std::span<double> out) const;
	GroupPoint sample(std::uint64_t index) const;

private:
	const Group* group_;
	BallSpec spec_;
	CounterRng rng_;
	std::vector<double> half_widths_;
};

std::vector<GroupPoint> sample_ball(const Group& group, const BallSpec& spec, std::size_t count, std::uint64_t seed);

using GroupPtr = std::shared_ptr<const Group>;

} // namespace nilcohom
