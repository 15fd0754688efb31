#include "nilcohom/ergodic.hpp"

#include "nilcohom/error.hpp"

#include <algorithm>
#include <cmath>

namespace nilcohom {

ObservableAverages empirical_measure(const SmoothMap& phi, std::span<const Observable> observables, double radius,
	const SamplingOptions& options)
{
	return average_observables(phi, observables, make_ball(phi.domain(), radius, options.shape), options, 0);
}

ConvergenceReport convergence_report(const SmoothMap& phi, std::span<const Observable> observables,
	std::span<const double> radii, const SamplingOptions& options, double tol)
{
	if (radii.empty())
		throw Error("radius schedule is empty");
	for (std::size_t k = 1; k < radii.size(); ++k)
		if (!(radii[k] > radii[k - 1]))
			throw Error("radius schedule must be strictly increasing");

	ConvergenceReport report;
	report.tolerance = tol;
	report.traces.resize(observables.size());
	for (std::size_t o = 0; o < observables.size(); ++o)
		report.traces[o].observable = observables[o].name();

	for (std::size_t r = 0; r < radii.size(); ++r) {
		const BallSpec ball = make_ball(phi.domain(), radii[r], options.shape);
		const auto avg = average_observables(phi, observables, ball, options, r);
		report.kink_hits += avg.kink_hits;
		for (std::size_t o = 0; o < observables.size(); ++o) {
			auto& t = report.traces[o];
			t.radii.push_back(radii[r]);
			t.values.push_back(avg.mean[o]);
			t.stderrs.push_back(avg.standard_error[o]);
		}
	}

	report.stable = true;
	for (auto& t : report.traces) {
		for (std::size_t k = 1; k < t.values.size(); ++k)
			t.increments.push_back(std::abs(t.values[k] - t.values[k - 1]));
		t.limit = t.values.back();
		t.limit_stderr = t.stderrs.back();
		const std::size_t count = t.increments.size();
		t.stable = count > 0;
		for (std::size_t k = count >= 2 ? count - 2 : 0; k < count; ++k) {
			const double combined = std::hypot(t.stderrs[k], t.stderrs[k + 1]);
			if (t.increments[k] > std::max(3.0 * combined, tol))
				t.stable = false;
		}
		report.stable = report.stable && t.stable;
	}
	return report;
}

ProbeReport ergodicity_probe(const SmoothMap& phi, std::span<const Observable> observables,
	std::span<const GroupPoint> basepoints, std::span<const double> radii, const SamplingOptions& options,
	double tol)
{
	if (basepoints.empty())
		throw Error("at least one basepoint is required");
	ProbeReport report;
	report.basepoints.assign(basepoints.begin(), basepoints.end());
	for (const auto& p : basepoints)
		report.orbits.push_back(convergence_report(phi.act(p), observables, radii, options, tol));

	for (std::size_t o = 0; o < observables.size(); ++o) {
		ProbeSpread s;
		s.observable = observables[o].name();
		std::size_t lo = 0, hi = 0;
		for (std::size_t b = 0; b < report.orbits.size(); ++b) {
			const double v = report.orbits[b].traces[o].limit;
			s.limits.push_back(v);
			if (v < s.limits[lo])
				lo = b;
			if (v > s.limits[hi])
				hi = b;
		}
		s.spread = s.limits[hi] - s.limits[lo];
		const double combined =
			std::hypot(report.orbits[lo].traces[o].limit_stderr, report.orbits[hi].traces[o].limit_stderr);
		s.threshold = std::max(3.0 * combined, tol);
		report.max_spread = std::max(report.max_spread, s.spread);
		if (s.spread > s.threshold)
			report.non_ergodic_evidence = true;
		report.spreads.push_back(std::move(s));
	}
	return report;
}

} // namespace nilcohom
