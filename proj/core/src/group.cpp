#include "nilcohom/group.hpp"

#include "nilcohom/error.hpp"

#include <cmath>
#include <numeric>

namespace nilcohom {

namespace {

using PolyVec = std::vector<Polynomial>;

PolyVec lie_bracket(const LieAlgebra& alg, const PolyVec& u, const PolyVec& v)
{
	const int n = alg.dim();
	const int vars = u.front().variables();
	PolyVec out(static_cast<std::size_t>(n), Polynomial(vars));
	for (const auto& entry : alg.brackets()) {
		Polynomial coeff = u[entry.i] * v[entry.j] - u[entry.j] * v[entry.i];
		if (coeff.is_zero())
			continue;
		for (const auto& [k, c] : entry.terms)
			out[k] += c * coeff;
	}
	return out;
}

bool all_zero(const PolyVec& v)
{
	for (const auto& p : v)
		if (!p.is_zero())
			return false;
	return true;
}

Rational factorial(int k)
{
	Rational f = 1;
	for (int i = 2; i <= k; ++i)
		f *= i;
	return f;
}

/// Coefficient of the right-nested bracket of the word in the Dynkin
/// expansion of log(e^X e^Y): the sum over splittings of the word into
/// blocks X^r Y^s of (-1)^(p-1)/p * 1/(m * prod r! s!). Bit t of the mask
/// set means letter t is Y.
Rational dynkin_coefficient(unsigned mask, int m)
{
	auto is_y = [&](int t) { return ((mask >> t) & 1u) != 0; };
	// g[pos][p]: weighted count of splittings of the suffix from pos into p blocks.
	std::vector<std::vector<Rational>> g(static_cast<std::size_t>(m) + 1, std::vector<Rational>(m + 1));
	g[m][0] = 1;
	for (int pos = m - 1; pos >= 0; --pos) {
		int r = 0;
		while (pos + r < m && !is_y(pos + r))
			++r;
		// Blocks starting at pos: X^a for 1 <= a <= r, or X^r Y^s for s >= 1.
		for (int a = 1; a <= r; ++a) {
			Rational w = 1 / factorial(a);
			for (int p = 0; p < m; ++p)
				if (sgn(g[pos + a][p]) != 0)
					g[pos][p + 1] += w * g[pos + a][p];
		}
		for (int s = 1; pos + r + s <= m && is_y(pos + r + s - 1); ++s) {
			Rational w = 1 / (factorial(r) * factorial(s));
			for (int p = 0; p < m; ++p)
				if (sgn(g[pos + r + s][p]) != 0)
					g[pos][p + 1] += w * g[pos + r + s][p];
		}
	}
	Rational total = 0;
	for (int p = 1; p <= m; ++p) {
		Rational term = g[0][p] / p;
		total += (p % 2 == 1) ? term : Rational(-term);
	}
	return total / m;
}

double pow_weight(double r, int w)
{
	double out = 1.0;
	for (int i = 0; i < w; ++i)
		out *= r;
	return out;
}

} // namespace

Group::Group(LieAlgebra algebra) : alg_(std::move(algebra))
{
	const int n = alg_.dim();
	const int vars = 2 * n;
	const int depth = std::max(alg_.nilpotency_class(), 1);
	abelian_ = alg_.brackets().empty();

	PolyVec letter_x, letter_y;
	for (int k = 0; k < n; ++k) {
		letter_x.push_back(Polynomial::variable(vars, k));
		letter_y.push_back(Polynomial::variable(vars, n + k));
	}

	product_.assign(static_cast<std::size_t>(n), Polynomial(vars));
	// level[mask] = right-nested bracket of the current word length.
	std::vector<PolyVec> level = {letter_x, letter_y};
	for (int m = 1; m <= depth; ++m) {
		if (m > 1) {
			std::vector<PolyVec> next(std::size_t{1} << m);
			for (unsigned tail = 0; tail < (1u << (m - 1)); ++tail) {
				if (level[tail].empty())
					continue;
				for (unsigned head = 0; head < 2; ++head)
					next[head | (tail << 1)] = lie_bracket(alg_, head ? letter_y : letter_x, level[tail]);
			}
			for (auto& v : next)
				if (!v.empty() && all_zero(v))
					v.clear();
			level = std::move(next);
		}
		for (unsigned mask = 0; mask < (1u << m); ++mask) {
			if (level[mask].empty())
				continue;
			Rational c = dynkin_coefficient(mask, m);
			if (sgn(c) == 0)
				continue;
			for (int k = 0; k < n; ++k)
				product_[k] += c * level[mask][k];
		}
	}

	for (const auto& p : product_)
		compiled_product_.emplace_back(p);

	for (int k = 0; k < n; ++k)
		for (int i = 0; i < n; ++i) {
			Polynomial d = product_[k].derivative(n + i);
			Polynomial at_zero = d.drop(n, n);
			if (i > k && !at_zero.is_zero())
				lower_triangular_ = false;
			if (i == k && !(at_zero == Polynomial::constant(vars, 1)))
				lower_triangular_ = false;
			dmul_dy_.push_back(std::move(d));
			frame_.emplace_back(at_zero);
		}

	int l = 1;
	for (int w : alg_.weights())
		l = std::lcm(l, w);
	norm_exponent_ = 2 * l;
}

Eigen::MatrixXd Group::left_frame(std::span<const double> g) const
{
	const int n = dim();
	if (static_cast<int>(g.size()) != n)
		throw DimensionMismatch("group point has the wrong dimension");
	std::vector<double> padded(g.begin(), g.end());
	padded.resize(2 * static_cast<std::size_t>(n), 0.0);
	Eigen::MatrixXd f(n, n);
	for (int k = 0; k < n; ++k)
		for (int i = 0; i < n; ++i)
			f(k, i) = frame_[k * n + i].evaluate<double>(padded);
	return f;
}

RationalMatrix Group::left_frame(std::span<const Rational> g) const
{
	std::vector<Rational> zero(g.size());
	return translation_jacobian(g, zero);
}

RationalMatrix Group::translation_jacobian(std::span<const Rational> g, std::span<const Rational> h) const
{
	const int n = dim();
	if (static_cast<int>(g.size()) != n || static_cast<int>(h.size()) != n)
		throw DimensionMismatch("group point has the wrong dimension");
	std::vector<Rational> point(g.begin(), g.end());
	point.insert(point.end(), h.begin(), h.end());
	RationalMatrix j(n, n);
	for (int k = 0; k < n; ++k)
		for (int i = 0; i < n; ++i)
			j(k, i) = dmul_dy_[k * n + i].evaluate(point);
	return j;
}

double Group::quasi_norm(std::span<const double> g) const
{
	const auto& w = weights();
	double best = 0.0;
	for (std::size_t i = 0; i < g.size(); ++i)
		best = std::max(best, std::pow(std::abs(g[i]), 1.0 / w[i]));
	return best;
}

double Group::homogeneous_norm(std::span<const double> g) const
{
	const auto& w = weights();
	double total = 0.0;
	for (std::size_t i = 0; i < g.size(); ++i)
		total += std::pow(std::abs(g[i]), static_cast<double>(norm_exponent_) / w[i]);
	return std::pow(total, 1.0 / norm_exponent_);
}

GroupPoint Group::dilate(std::span<const double> g, double r) const
{
	const auto& w = weights();
	GroupPoint out(g.begin(), g.end());
	for (std::size_t i = 0; i < out.size(); ++i)
		out[i] *= pow_weight(r, w[i]);
	return out;
}

std::string to_string(BallShape shape) { return shape == BallShape::Box ? "box" : "quasi-ball"; }

BallShape parse_ball_shape(const std::string& text)
{
	if (text == "box")
		return BallShape::Box;
	if (text == "quasi-ball" || text == "quasiball" || text == "ball")
		return BallShape::QuasiBall;
	throw ParseError("unknown ball shape '" + text + "' (expected box or quasi-ball)");
}

BallSpec make_ball(const Group& group, double radius, BallShape shape)
{
	if (!(radius > 0.0) || !std::isfinite(radius))
		throw Error("ball radius must be positive and finite");
	return BallSpec{radius, shape, group.weights()};
}

double ball_volume(const BallSpec& spec)
{
	double volume = 1.0;
	int q = 0;
	for (int w : spec.layer_weights) {
		volume *= 2.0 * pow_weight(spec.radius, w);
		q += w;
	}
	if (spec.shape == BallShape::Box)
		return volume;

	int l = 1;
	for (int w : spec.layer_weights)
		l = std::lcm(l, w);
	double unit = 1.0;
	double inv_sum = 0.0;
	for (int w : spec.layer_weights) {
		const double p = 2.0 * l / w;
		unit *= 2.0 * std::tgamma(1.0 + 1.0 / p);
		inv_sum += 1.0 / p;
	}
	unit /= std::tgamma(1.0 + inv_sum);
	return unit * pow_weight(spec.radius, q);
}

BallSampler::BallSampler(const Group& group, BallSpec spec, std::uint64_t seed, std::uint64_t stream)
	: group_(&group), spec_(std::move(spec)), rng_(seed, stream)
{
	if (static_cast<int>(spec_.layer_weights.size()) != group.dim())
		throw DimensionMismatch("ball weights do not match the group dimension");
	for (int w : spec_.layer_weights)
		half_widths_.push_back(pow_weight(spec_.radius, w));
}

void BallSampler::sample(std::uint64_t index, std::span<double> out) const
{
	const std::size_t n = half_widths_.size();
	constexpr std::uint64_t kMaxAttempts = 1u << 20;
	for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
		for (std::size_t i = 0; i < n; ++i)
			out[i] = rng_.uniform(index, attempt * n + i, -half_widths_[i], half_widths_[i]);
		if (spec_.shape == BallShape::Box || group_->homogeneous_norm(out) <= spec_.radius)
			return;
	}
	throw Error("quasi-ball rejection sampling did not accept a point");
}

GroupPoint BallSampler::sample(std::uint64_t index) const
{
	GroupPoint p(half_widths_.size());
	sample(index, p);
	return p;
}

std::vector<GroupPoint> sample_ball(const Group& group, const BallSpec& spec, std::size_t count, std::uint64_t seed)
{
	BallSampler sampler(group, spec, seed);
	std::vector<GroupPoint> out;
	out.reserve(count);
	for (std::size_t i = 0; i < count; ++i)
		out.push_back(sampler.sample(i));
	return out;
}

} // namespace nilcohom
