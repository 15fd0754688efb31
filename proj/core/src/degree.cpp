#include "nilcohom/degree.hpp"

#include "nilcohom/error.hpp"
#include "nilcohom/parallel.hpp"
#include "nilcohom/pullback.hpp"
#include "nilcohom/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nilcohom {

namespace {

constexpr double kBoundaryTolerance = 1e-6;
constexpr double kDedupTolerance = 1e-6;
// A converged root counts as critical when the Jacobian's smallest singular
// value is this small relative to its largest; Newton stops about sqrt(tol)
// away from a double root, where sigma_min is still ~1e-6.
constexpr double kSingularRatio = 1e-4;
constexpr int kNewtonIterations = 80;

double norm2(std::span<const double> v)
{
	double s = 0.0;
	for (double x : v)
		s += x * x;
	return std::sqrt(s);
}

double residual(const GroupPoint& value, std::span<const double> target)
{
	double s = 0.0;
	for (std::size_t i = 0; i < value.size(); ++i)
		s += (value[i] - target[i]) * (value[i] - target[i]);
	return std::sqrt(s);
}

/// Cartesian product of per-axis coordinate lists.
std::vector<GroupPoint> cartesian(const std::vector<std::vector<double>>& axes)
{
	std::vector<GroupPoint> out = {GroupPoint{}};
	for (const auto& axis : axes) {
		std::vector<GroupPoint> next;
		next.reserve(out.size() * axis.size());
		for (const auto& p : out)
			for (double v : axis) {
				GroupPoint q = p;
				q.push_back(v);
				next.push_back(std::move(q));
			}
		out = std::move(next);
	}
	return out;
}

} // namespace

DegreeSolver::DegreeSolver(const SmoothMap& phi, BallSpec window, DegreeOptions options)
	: phi_(&phi), window_(std::move(window)), options_(options)
{
	const int n = phi.domain().dim();
	if (n != phi.codomain().dim())
		throw DimensionMismatch("degree needs equal domain and codomain dimensions, got " + std::to_string(n) +
			" and " + std::to_string(phi.codomain().dim()));
	if (options_.grid_density < 1)
		throw Error("grid density must be positive");
	for (int w : window_.layer_weights)
		half_widths_.push_back(std::pow(window_.radius, w));

	starts_ = grid(options_.grid_density);
	if (options_.check_stability)
		dense_starts_ = grid(2 * options_.grid_density);

	int k = options_.boundary_density;
	if (k <= 0)
		k = n <= 2 ? 512 : (n == 3 ? 64 : 16);
	for (int axis = 0; axis < n; ++axis)
		for (double side : {-1.0, 1.0}) {
			std::vector<std::vector<double>> axes;
			for (int i = 0; i < n; ++i) {
				if (i == axis) {
					axes.push_back({side * half_widths_[i]});
					continue;
				}
				std::vector<double> values;
				for (int t = 0; t < k; ++t)
					values.push_back(-half_widths_[i] + 2.0 * half_widths_[i] * t / (k - 1));
				axes.push_back(std::move(values));
			}
			for (const auto& p : cartesian(axes))
				boundary_image_.push_back(phi.evaluate(p));
		}
}

std::vector<GroupPoint> DegreeSolver::grid(int density) const
{
	std::vector<std::vector<double>> axes;
	for (double hw : half_widths_) {
		std::vector<double> values;
		for (int a = 0; a < density; ++a)
			values.push_back(-hw + (a + 0.5) * 2.0 * hw / density);
		axes.push_back(std::move(values));
	}
	return cartesian(axes);
}

double DegreeSolver::boundary_margin(std::span<const double> y) const
{
	double best = std::numeric_limits<double>::infinity();
	for (const auto& b : boundary_image_)
		best = std::min(best, residual(b, y));
	return best;
}

std::pair<GroupPoint, GroupPoint> DegreeSolver::image_bounds() const
{
	const std::size_t n = half_widths_.size();
	GroupPoint lo(n, std::numeric_limits<double>::infinity());
	GroupPoint hi(n, -std::numeric_limits<double>::infinity());
	auto include = [&](const GroupPoint& v) {
		for (std::size_t i = 0; i < n; ++i) {
			lo[i] = std::min(lo[i], v[i]);
			hi[i] = std::max(hi[i], v[i]);
		}
	};
	for (const auto& b : boundary_image_)
		include(b);
	for (const auto& s : grid(std::max(4 * options_.grid_density, 32)))
		include(phi_->evaluate(s));
	for (std::size_t i = 0; i < n; ++i) {
		const double pad = 0.01 * (hi[i] - lo[i]) + 1e-9;
		lo[i] -= pad;
		hi[i] += pad;
	}
	return {lo, hi};
}

DegreeSolver::Located DegreeSolver::locate(std::span<const double> target, const std::vector<GroupPoint>& starts) const
{
	const std::size_t n = half_widths_.size();
	const double tol = 1e-11 * (1.0 + norm2(target));
	Located out;
	for (const auto& start : starts) {
		GroupPoint x = start;
		try {
			MapJet jet = phi_->evaluate_jet(x);
			double res = residual(jet.value, target);
			for (int it = 0; it < kNewtonIterations && res > tol; ++it) {
				Eigen::VectorXd f(static_cast<Eigen::Index>(n));
				for (std::size_t i = 0; i < n; ++i)
					f[i] = jet.value[i] - target[i];
				Eigen::PartialPivLU<Eigen::MatrixXd> lu(jet.jacobian);
				if (!(std::abs(lu.determinant()) > 1e-300))
					break;
				const Eigen::VectorXd dx = lu.solve(f);
				if (!dx.allFinite())
					break;
				bool accepted = false;
				for (double alpha = 1.0; alpha > 1e-8; alpha *= 0.5) {
					GroupPoint xn = x;
					for (std::size_t i = 0; i < n; ++i)
						xn[i] -= alpha * dx[i];
					MapJet jn = phi_->evaluate_jet(xn);
					const double rn = residual(jn.value, target);
					if (rn < res) {
						x = std::move(xn);
						jet = std::move(jn);
						res = rn;
						accepted = true;
						break;
					}
				}
				if (!accepted)
					break;
				bool escaped = false;
				for (std::size_t i = 0; i < n; ++i)
					escaped = escaped || std::abs(x[i]) > 4.0 * half_widths_[i];
				if (escaped)
					break;
			}
			if (res > tol)
				continue;
			bool inside = true;
			for (std::size_t i = 0; i < n; ++i)
				inside = inside && std::abs(x[i]) <= half_widths_[i];
			if (!inside)
				continue;
			bool duplicate = false;
			for (const auto& r : out.roots) {
				double d = 0.0;
				for (std::size_t i = 0; i < n; ++i)
					d = std::max(d, std::abs(r[i] - x[i]));
				duplicate = duplicate || d < kDedupTolerance;
			}
			if (duplicate)
				continue;
			const Eigen::VectorXd sv = jet.jacobian.jacobiSvd().singularValues();
			out.dets.push_back(jet.jacobian.determinant());
			out.critical.push_back(sv[sv.size() - 1] < kSingularRatio * std::max(1.0, sv[0]));
			out.roots.push_back(std::move(x));
		} catch (const DomainError&) {
			continue;
		}
	}
	return out;
}

DegreeResult DegreeSolver::solve(std::span<const double> target, std::uint64_t target_index) const
{
	const std::size_t n = half_widths_.size();
	if (target.size() != n)
		throw DimensionMismatch("target has the wrong dimension");
	const double margin = boundary_margin(target);
	if (margin < kBoundaryTolerance)
		throw BoundaryTooClose(margin, "target lies within 1e-6 of the image of the window boundary (margin " +
			std::to_string(margin) + ")");

	CounterRng rng(options_.seed, target_index);
	const double scale = 0.01 * window_.radius / std::sqrt(static_cast<double>(n));
	for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
		GroupPoint y(target.begin(), target.end());
		if (attempt > 0) {
			for (std::size_t i = 0; i < n; ++i)
				y[i] += rng.uniform(static_cast<std::uint64_t>(attempt), i, -scale, scale);
			if (boundary_margin(y) < kBoundaryTolerance)
				continue;
		}
		Located found = locate(y, starts_);
		bool singular = false;
		for (bool c : found.critical)
			singular = singular || c;
		if (singular)
			continue;

		DegreeResult result;
		result.target = y;
		result.window = window_;
		result.retries = attempt;
		result.grid_density = options_.grid_density;
		result.boundary_margin = attempt == 0 ? margin : boundary_margin(y);
		result.preimage_count = static_cast<int>(found.roots.size());
		result.min_jacobian_margin = std::numeric_limits<double>::infinity();
		for (double d : found.dets) {
			result.value += d > 0 ? 1 : -1;
			result.min_jacobian_margin = std::min(result.min_jacobian_margin, std::abs(d));
		}
		if (found.dets.empty())
			result.min_jacobian_margin = 0.0;
		result.preimages = std::move(found.roots);
		if (options_.check_stability) {
			Located dense = locate(y, dense_starts_);
			int value = 0;
			for (double d : dense.dets)
				value += d > 0 ? 1 : (d < 0 ? -1 : 0);
			result.stable = value == result.value;
		}
		return result;
	}
	throw SingularTarget("target is not a regular value after " + std::to_string(options_.max_retries) +
		" perturbations");
}

DegreeResult local_degree(const SmoothMap& phi, const BallSpec& window, std::span<const double> target,
	const DegreeOptions& options)
{
	return DegreeSolver(phi, window, options).solve(target);
}

AreaFormulaReport area_formula_check(const SmoothMap& phi, const BallSpec& window, const SamplingOptions& sampling,
	const DegreeOptions& options)
{
	if (sampling.samples < 2)
		throw Error("at least two samples are required");
	DegreeOptions fast = options;
	fast.check_stability = false;
	const DegreeSolver solver(phi, window, fast);
	const int n = phi.domain().dim();

	AreaFormulaReport report;
	report.samples = sampling.samples;
	report.window_volume = ball_volume(window);
	std::tie(report.image_low, report.image_high) = solver.image_bounds();
	double image_volume = 1.0;
	for (int i = 0; i < n; ++i)
		image_volume *= report.image_high[i] - report.image_low[i];

	struct Chunk {
		CompensatedSum det, det_sq, abs_det, deg, deg_sq;
		std::size_t used = 0, skipped = 0;
	};
	const BallSampler sampler(phi.domain(), window, sampling.seed, 0);
	const CounterRng target_rng(sampling.seed, 1);
	auto chunks = map_chunks<Chunk>(sampling.samples, sampling.chunk, sampling.threads,
		[&](std::size_t begin, std::size_t end) {
			Chunk c;
			GroupPoint g(static_cast<std::size_t>(n)), h(static_cast<std::size_t>(n));
			for (std::size_t s = begin; s < end; ++s) {
				sampler.sample(s, g);
				const double d = phi.coordinate_jacobian(g).determinant();
				c.det.add(d);
				c.det_sq.add(d * d);
				c.abs_det.add(std::abs(d));
				for (int i = 0; i < n; ++i)
					h[i] = target_rng.uniform(s, static_cast<std::uint64_t>(i), report.image_low[i], report.image_high[i]);
				try {
					const double deg = solver.solve(h, s).value;
					c.deg.add(deg);
					c.deg_sq.add(deg * deg);
					++c.used;
				} catch (const BoundaryTooClose&) {
					++c.skipped;
				} catch (const SingularTarget&) {
					++c.skipped;
				}
			}
			return c;
		});

	CompensatedSum det, det_sq, abs_det, deg, deg_sq;
	std::size_t used = 0;
	for (const auto& c : chunks) {
		det.add(c.det.value());
		det_sq.add(c.det_sq.value());
		abs_det.add(c.abs_det.value());
		deg.add(c.deg.value());
		deg_sq.add(c.deg_sq.value());
		used += c.used;
		report.skipped_targets += c.skipped;
	}
	auto moments = [](double sum, double sum_sq, double count, double& mean, double& se) {
		mean = count > 0 ? sum / count : 0.0;
		const double var = count > 1 ? std::max(0.0, (sum_sq / count - mean * mean) * count / (count - 1)) : 0.0;
		se = count > 0 ? std::sqrt(var / count) : 0.0;
	};
	const double count = static_cast<double>(sampling.samples);
	double mean = 0, se = 0;
	moments(det.value(), det_sq.value(), count, mean, se);
	report.signed_lhs = mean * report.window_volume;
	report.signed_lhs_stderr = se * report.window_volume;
	double abs_mean = abs_det.value() / count;
	double abs_var = std::max(0.0, (det_sq.value() / count - abs_mean * abs_mean) * count / (count - 1));
	report.unsigned_lhs = abs_mean * report.window_volume;
	report.unsigned_lhs_stderr = std::sqrt(abs_var / count) * report.window_volume;
	moments(deg.value(), deg_sq.value(), static_cast<double>(used), mean, se);
	report.rhs = mean * image_volume;
	report.rhs_stderr = se * image_volume;
	report.residual = report.signed_lhs - report.rhs;
	report.combined_stderr = std::hypot(report.signed_lhs_stderr, report.rhs_stderr);
	return report;
}

AsymptoticDegreeTrace asymptotic_degree(const SmoothMap& phi, std::span<const double> radii,
	const SamplingOptions& options, std::optional<KForm> omega)
{
	const int n = phi.domain().dim();
	const int m = phi.codomain().dim();
	if (n != m)
		throw DimensionMismatch("asymptotic degree needs equal dimensions");
	if (radii.empty())
		throw Error("radius schedule is empty");
	if (!omega) {
		std::vector<int> all(static_cast<std::size_t>(m));
		for (int i = 0; i < m; ++i)
			all[i] = i;
		omega = KForm::basis(m, all);
	}
	if (omega->degree() != m)
		throw DimensionMismatch("asymptotic degree needs a top-degree form");

	const WedgeMask top = m >= 32 ? ~WedgeMask(0) : (WedgeMask(1) << m) - 1;
	AsymptoticDegreeTrace trace;
	for (std::size_t r = 0; r < radii.size(); ++r) {
		const BallSpec ball = make_ball(phi.domain(), radii[r], options.shape);
		const FormAverages avg = average_forms(phi, std::span<const KForm>(&*omega, 1), ball, options, r);
		const double volume = ball_volume(ball);
		const double ratio = avg.mean[0].coeff(top);
		const double se = avg.standard_error[0].coeff(top);
		trace.radii.push_back(radii[r]);
		trace.ball_volumes.push_back(volume);
		trace.ratio.push_back(ratio);
		trace.ratio_stderr.push_back(se);
		trace.tau.push_back(ratio * volume);
		trace.tau_stderr.push_back(se * volume);
		trace.kink_hits += avg.kink_hits;
	}

	constexpr double kRatioFloor = 0.05;
	const std::size_t count = trace.ratio.size();
	const std::size_t first = count >= 2 ? count - 2 : 0;
	bool positive = true, negative = true;
	for (std::size_t k = first; k < count; ++k) {
		const double bar = std::max(3.0 * trace.ratio_stderr[k], kRatioFloor);
		positive = positive && trace.ratio[k] > bar;
		negative = negative && trace.ratio[k] < -bar;
	}
	trace.verdict = positive ? "positive-asymptotic-degree" : (negative ? "negative-asymptotic-degree" : "not-established");

	// Two-sided distance distortion over random pairs in the last ball.
	const BallSpec last = make_ball(phi.domain(), radii.back(), options.shape);
	const BallSampler sampler(phi.domain(), last, options.seed, 0x5157ULL);
	trace.distortion_min = std::numeric_limits<double>::infinity();
	trace.distortion_max = 0.0;
	for (std::uint64_t p = 0; p < 512; ++p) {
		const GroupPoint g = sampler.sample(2 * p);
		const GroupPoint h = sampler.sample(2 * p + 1);
		const double dg = phi.domain().quasi_norm(phi.domain().multiply(Group::inverse(g), h));
		if (dg < 1e-9)
			continue;
		const double dh =
			phi.codomain().quasi_norm(phi.codomain().multiply(Group::inverse(phi.evaluate(g)), phi.evaluate(h)));
		trace.distortion_min = std::min(trace.distortion_min, dh / dg);
		trace.distortion_max = std::max(trace.distortion_max, dh / dg);
	}
	return trace;
}

} // namespace nilcohom
