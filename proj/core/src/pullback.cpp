#include "nilcohom/pullback.hpp"

#include "nilcohom/error.hpp"
#include "nilcohom/parallel.hpp"
#include "nilcohom/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace nilcohom {

namespace {

double minor_det(const Eigen::MatrixXd& m, WedgeMask rows, WedgeMask cols)
{
	int r[kMaxAlgebraDim];
	int c[kMaxAlgebraDim];
	int k = 0;
	for (WedgeMask b = rows; b; b &= b - 1)
		r[k++] = std::countr_zero(b);
	int kc = 0;
	for (WedgeMask b = cols; b; b &= b - 1)
		c[kc++] = std::countr_zero(b);
	switch (k) {
	case 0:
		return 1.0;
	case 1:
		return m(r[0], c[0]);
	case 2:
		return m(r[0], c[0]) * m(r[1], c[1]) - m(r[0], c[1]) * m(r[1], c[0]);
	case 3:
		return m(r[0], c[0]) * (m(r[1], c[1]) * m(r[2], c[2]) - m(r[1], c[2]) * m(r[2], c[1])) -
			m(r[0], c[1]) * (m(r[1], c[0]) * m(r[2], c[2]) - m(r[1], c[2]) * m(r[2], c[0])) +
			m(r[0], c[2]) * (m(r[1], c[0]) * m(r[2], c[1]) - m(r[1], c[1]) * m(r[2], c[0]));
	default: {
		Eigen::MatrixXd sub(k, k);
		for (int a = 0; a < k; ++a)
			for (int b = 0; b < k; ++b)
				sub(a, b) = m(r[a], c[b]);
		return sub.partialPivLu().determinant();
	}
	}
}

double max_abs(const RealForm& f)
{
	double best = 0.0;
	for (const auto& [mask, c] : f.terms())
		best = std::max(best, std::abs(c));
	return best;
}

/// Per-output standard errors of a linear map applied to independent-ish
/// coefficient estimates: sqrt(sum_c A_rc^2 se_c^2).
std::vector<double> propagate(const RationalMatrix& a, const std::vector<WedgeMask>& basis, const RealForm& se)
{
	std::vector<double> out(a.rows(), 0.0);
	for (std::size_t r = 0; r < a.rows(); ++r) {
		double acc = 0.0;
		for (std::size_t c = 0; c < a.cols(); ++c) {
			const double w = a(r, c).get_d() * se.coeff(basis[c]);
			acc += w * w;
		}
		out[r] = std::sqrt(acc);
	}
	return out;
}

struct FormAccumulator {
	std::vector<CompensatedSum> sum;
	std::vector<CompensatedSum> sum_sq;
	std::size_t kinks = 0;
};

} // namespace

std::vector<double> geometric_schedule(double first, double ratio, int steps)
{
	if (!(first > 0.0) || !(ratio > 1.0) || steps < 1)
		throw Error("radius schedule needs first > 0, ratio > 1 and at least one step");
	std::vector<double> out;
	double r = first;
	for (int i = 0; i < steps; ++i, r *= ratio)
		out.push_back(r);
	return out;
}

std::vector<double> parse_schedule(const std::string& text)
{
	double parts[3] = {0, 0, 0};
	std::size_t start = 0;
	for (int p = 0; p < 3; ++p) {
		const auto colon = text.find(':', start);
		if ((p < 2) == (colon == std::string::npos))
			throw ParseError("radius schedule must look like first:ratio:steps, got '" + text + "'");
		const std::string piece = text.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
		auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), parts[p]);
		if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size())
			throw ParseError("malformed number '" + piece + "' in radius schedule '" + text + "'");
		start = colon + 1;
	}
	if (parts[2] != std::floor(parts[2]) || parts[2] < 1 || parts[2] > 64)
		throw ParseError("radius schedule step count must be an integer in 1..64");
	try {
		return geometric_schedule(parts[0], parts[1], static_cast<int>(parts[2]));
	} catch (const ParseError&) {
		throw;
	} catch (const Error& e) {
		throw ParseError(e.what());
	}
}

double pullback_coefficient(const Eigen::MatrixXd& m, const KForm& omega, WedgeMask lambda)
{
	double total = 0.0;
	for (const auto& [rows, c] : omega.terms())
		total += c.get_d() * minor_det(m, rows, lambda);
	return total;
}

RealForm pullback_form(const Eigen::MatrixXd& m, const KForm& omega)
{
	const int n = static_cast<int>(m.cols());
	RealForm out(n, omega.degree());
	if (omega.degree() > n)
		return out;
	for (WedgeMask lambda : wedge_basis(n, omega.degree()))
		out.set(lambda, pullback_coefficient(m, omega, lambda));
	return out;
}

double pullback_eval(const SmoothMap& phi, const KForm& omega, WedgeMask lambda, std::span<const double> g)
{
	if (omega.dim() != phi.codomain().dim())
		throw DimensionMismatch("form does not live on the codomain algebra");
	if (wedge_degree(lambda) != omega.degree())
		throw DimensionMismatch("form degree differs from the number of frame vectors");
	return pullback_coefficient(phi.differential(g), omega, lambda);
}

FormAverages average_forms(const SmoothMap& phi, std::span<const KForm> forms, const BallSpec& ball,
	const SamplingOptions& options, std::uint64_t stream)
{
	if (options.samples < 2)
		throw Error("at least two samples are required");
	const int n = phi.domain().dim();
	const int m = phi.codomain().dim();
	std::vector<std::vector<WedgeMask>> lambdas;
	std::size_t slots = 0;
	for (const auto& f : forms) {
		if (f.dim() != m)
			throw DimensionMismatch("form does not live on the codomain algebra");
		lambdas.push_back(f.degree() <= n ? wedge_basis(n, f.degree()) : std::vector<WedgeMask>{});
		slots += lambdas.back().size();
	}

	BallSampler sampler(phi.domain(), ball, options.seed, stream);
	auto chunks = map_chunks<FormAccumulator>(options.samples, options.chunk, options.threads,
		[&](std::size_t begin, std::size_t end) {
			FormAccumulator acc{std::vector<CompensatedSum>(slots), std::vector<CompensatedSum>(slots), 0};
			EvalDiagnostics diag;
			GroupPoint g(static_cast<std::size_t>(n));
			for (std::size_t s = begin; s < end; ++s) {
				sampler.sample(s, g);
				const Eigen::MatrixXd d = phi.differential(g, &diag);
				std::size_t slot = 0;
				for (std::size_t f = 0; f < forms.size(); ++f)
					for (WedgeMask lambda : lambdas[f]) {
						const double v = pullback_coefficient(d, forms[f], lambda);
						acc.sum[slot].add(v);
						acc.sum_sq[slot].add(v * v);
						++slot;
					}
			}
			acc.kinks = diag.kink_hits;
			return acc;
		});

	std::vector<CompensatedSum> sum(slots), sum_sq(slots);
	FormAverages out;
	for (const auto& c : chunks) {
		for (std::size_t s = 0; s < slots; ++s) {
			sum[s].add(c.sum[s].value());
			sum_sq[s].add(c.sum_sq[s].value());
		}
		out.kink_hits += c.kinks;
	}
	const double count = static_cast<double>(options.samples);
	std::size_t slot = 0;
	for (std::size_t f = 0; f < forms.size(); ++f) {
		RealForm mean(n, forms[f].degree());
		RealForm se(n, forms[f].degree());
		for (WedgeMask lambda : lambdas[f]) {
			const double mu = sum[slot].value() / count;
			const double var = std::max(0.0, (sum_sq[slot].value() / count - mu * mu) * count / (count - 1));
			mean.set(lambda, mu);
			se.set(lambda, std::sqrt(var / count));
			++slot;
		}
		out.mean.push_back(std::move(mean));
		out.standard_error.push_back(std::move(se));
	}
	return out;
}

void finish_estimate(AverageEstimate& e)
{
	e.increments.clear();
	e.mc_stderr.clear();
	for (const auto& se : e.stderrs)
		e.mc_stderr.push_back(max_abs(se));
	for (std::size_t k = 1; k < e.values.size(); ++k)
		e.increments.push_back(max_abs(e.values[k] - e.values[k - 1]));
	e.non_convergent = false;
	for (std::size_t t = 1; t < e.increments.size(); ++t) {
		const double combined = std::hypot(e.mc_stderr[t], e.mc_stderr[t + 1]);
		if (e.increments[t] > e.increments[t - 1] + 3.0 * combined)
			e.non_convergent = true;
	}
	if (!e.values.empty())
		e.extrapolated = e.values.back();
}

std::vector<AverageEstimate> amenable_averages(const SmoothMap& phi, std::span<const KForm> forms,
	std::span<const double> radii, const SamplingOptions& options)
{
	for (std::size_t k = 1; k < radii.size(); ++k)
		if (!(radii[k] > radii[k - 1]))
			throw Error("radius schedule must be strictly increasing");
	std::vector<AverageEstimate> out(forms.size());
	for (std::size_t r = 0; r < radii.size(); ++r) {
		const BallSpec ball = make_ball(phi.domain(), radii[r], options.shape);
		FormAverages avg = average_forms(phi, forms, ball, options, r);
		for (std::size_t f = 0; f < forms.size(); ++f) {
			out[f].radii.push_back(radii[r]);
			out[f].values.push_back(std::move(avg.mean[f]));
			out[f].stderrs.push_back(std::move(avg.standard_error[f]));
			out[f].kink_hits += avg.kink_hits;
		}
	}
	for (auto& e : out)
		finish_estimate(e);
	return out;
}

AverageEstimate amenable_average(const SmoothMap& phi, const KForm& omega, std::span<const double> radii,
	const SamplingOptions& options)
{
	return amenable_averages(phi, std::span<const KForm>(&omega, 1), radii, options).front();
}

bool is_homomorphism(const SmoothMap& phi, std::size_t pairs, std::uint64_t seed, double tol)
{
	const int n = phi.domain().dim();
	CounterRng rng(seed, 0x686f6dULL);
	GroupPoint g(static_cast<std::size_t>(n)), h(static_cast<std::size_t>(n));
	for (std::size_t p = 0; p < pairs; ++p) {
		for (int i = 0; i < n; ++i) {
			g[i] = rng.uniform(p, 2 * i, -1.0, 1.0);
			h[i] = rng.uniform(p, 2 * i + 1, -1.0, 1.0);
		}
		const GroupPoint lhs = phi.evaluate(phi.domain().multiply(g, h));
		const GroupPoint rhs = phi.codomain().multiply(phi.evaluate(g), phi.evaluate(h));
		for (std::size_t k = 0; k < lhs.size(); ++k)
			if (std::abs(lhs[k] - rhs[k]) > tol * (1.0 + std::max(std::abs(lhs[k]), std::abs(rhs[k]))))
				return false;
	}
	return true;
}

RealForm exact_pullback(const SmoothMap& phi, const KForm& omega)
{
	const GroupPoint origin(static_cast<std::size_t>(phi.domain().dim()), 0.0);
	return pullback_form(phi.differential(origin), omega);
}

HomomorphismReport induced_cohomology_map(const SmoothMap& phi, std::span<const double> radii,
	const SamplingOptions& options)
{
	if (radii.empty())
		throw Error("radius schedule is empty");
	const CohomologyRing ring_g = cohomology(phi.domain().algebra());
	const CohomologyRing ring_h = cohomology(phi.codomain().algebra());
	const int n = phi.domain().dim();
	const int kmax = std::min(n, phi.codomain().dim());

	// Representatives of H^k(codomain), then products of pairs of them.
	std::vector<KForm> forms;
	std::vector<std::vector<std::size_t>> rep_index(static_cast<std::size_t>(kmax) + 1);
	for (int k = 0; k <= kmax; ++k)
		for (const auto& rep : ring_h.space(k).representatives) {
			rep_index[k].push_back(forms.size());
			forms.push_back(rep);
		}
	struct Pair {
		int k, i, l, j;
		std::size_t product;
	};
	std::vector<Pair> pairs;
	for (int k = 1; k <= kmax; ++k)
		for (int l = k; k + l <= kmax; ++l)
			for (std::size_t i = 0; i < rep_index[k].size(); ++i)
				for (std::size_t j = (k == l ? i : 0); j < rep_index[l].size(); ++j) {
					pairs.push_back({k, static_cast<int>(i), l, static_cast<int>(j), forms.size()});
					forms.push_back(wedge(forms[rep_index[k][i]], forms[rep_index[l][j]]));
				}

	const auto estimates = amenable_averages(phi, forms, radii, options);
	const std::size_t last = radii.size() - 1;

	HomomorphismReport report;
	report.radii.assign(radii.begin(), radii.end());
	for (const auto& e : estimates)
		report.kink_hits = std::max(report.kink_hits, e.kink_hits);

	for (int k = 0; k <= kmax; ++k) {
		const CohomologySpace& target = ring_g.space(k);
		DegreeBlock block;
		block.degree = k;
		block.matrix.assign(static_cast<std::size_t>(target.betti),
			std::vector<double>(rep_index[k].size(), 0.0));
		block.stderrs = block.matrix;
		double block_se = 0.0;
		for (std::size_t r = 0; r < radii.size(); ++r) {
			double residual = 0.0;
			for (std::size_t c = 0; c < rep_index[k].size(); ++c)
				residual = std::max(residual,
					max_abs(ce_differential(phi.domain().algebra(), estimates[rep_index[k][c]].values[r])));
			block.chain_residuals.push_back(residual);
		}
		for (std::size_t c = 0; c < rep_index[k].size(); ++c) {
			const AverageEstimate& est = estimates[rep_index[k][c]];
			const RealForm& a = est.values[last];
			const RealForm& se = est.stderrs[last];
			block_se = std::max(block_se, est.mc_stderr[last]);
			const auto coords = target.project(a);
			const auto coord_se = propagate(target.projector, target.basis, se);
			for (std::size_t r = 0; r < coords.size(); ++r) {
				block.matrix[r][c] = coords[r];
				block.stderrs[r][c] = coord_se[r];
			}
			const auto off = target.non_closed_component(a);
			const auto off_se = propagate(target.complement, target.basis, se);
			double worst = 0.0;
			for (std::size_t r = 0; r < off.size(); ++r) {
				worst = std::max(worst, std::abs(off[r]));
				if (std::abs(off[r]) > 10.0 * off_se[r] + 1e-9)
					report.warnings.push_back("ProjectionWarning: degree " + std::to_string(k) + " class " +
						std::to_string(c + 1) + " average has a non-closed component " + std::to_string(off[r]) +
						" exceeding 10x its Monte Carlo standard error " + std::to_string(off_se[r]));
			}
			block.non_closed.push_back(worst);
		}
		block.chain_threshold = std::max(3.0 * block_se, 1e-3);
		if (block.chain_residuals.back() > block.chain_threshold)
			report.chain_ok = false;
		report.blocks.push_back(std::move(block));
	}

	for (const auto& p : pairs) {
		MultResidual mr{p.k, p.i, p.l, p.j, {}, 0.0};
		const std::size_t a = rep_index[p.k][p.i];
		const std::size_t b = rep_index[p.l][p.j];
		const CohomologySpace& sk = ring_g.space(p.k);
		const CohomologySpace& sl = ring_g.space(p.l);
		const CohomologySpace& skl = ring_g.space(p.k + p.l);
		for (std::size_t r = 0; r < radii.size(); ++r) {
			const auto lhs = skl.project(estimates[p.product].values[r]);
			const auto u = sk.project(estimates[a].values[r]);
			const auto v = sl.project(estimates[b].values[r]);
			const auto rhs = ring_g.cup(p.k, u, p.l, v);
			double residual = 0.0;
			for (std::size_t t = 0; t < lhs.size(); ++t)
				residual = std::max(residual, std::abs(lhs[t] - rhs[t]));
			mr.residuals.push_back(residual);
			if (r == last) {
				double norm_u = 0.0, norm_v = 0.0;
				for (double x : u)
					norm_u = std::max(norm_u, std::abs(x));
				for (double x : v)
					norm_v = std::max(norm_v, std::abs(x));
				const double se = estimates[p.product].mc_stderr[r] + norm_u * estimates[b].mc_stderr[r] +
					norm_v * estimates[a].mc_stderr[r];
				mr.threshold = std::max(3.0 * se, 1e-3);
			}
		}
		if (mr.residuals.back() > mr.threshold)
			report.mult_ok = false;
		report.mult.push_back(std::move(mr));
	}

	report.homomorphism_detected = is_homomorphism(phi, 64, options.seed);
	if (report.homomorphism_detected)
		for (int k = 0; k <= kmax; ++k)
			for (std::size_t idx : rep_index[k])
				report.exact_deviation = std::max(report.exact_deviation,
					max_abs(estimates[idx].values[last] - exact_pullback(phi, forms[idx])));
	return report;
}

HomomorphismReport homomorphism_check(const SmoothMap& phi, std::span<const double> radii,
	const SamplingOptions& options)
{
	return induced_cohomology_map(phi, radii, options);
}

NormEstimate amenable_norm(const SmoothMap& phi, const Observable& gamma, std::span<const double> radii,
	const SamplingOptions& options)
{
	NormEstimate out;
	for (std::size_t r = 0; r < radii.size(); ++r) {
		const BallSpec ball = make_ball(phi.domain(), radii[r], options.shape);
		const auto avg = average_observables(phi, std::span<const Observable>(&gamma, 1), ball, options, r);
		const double ms = avg.mean_of_squares[0];
		const double se_ms = avg.square_standard_error[0];
		const double value = std::sqrt(ms);
		out.radii.push_back(radii[r]);
		out.values.push_back(value);
		out.stderrs.push_back(value > 0.0 ? se_ms / (2.0 * value) : std::sqrt(se_ms));
		out.kink_hits += avg.kink_hits;
	}
	return out;
}

} // namespace nilcohom
