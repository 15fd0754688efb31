#pragma once

#include "nilcohom/group.hpp"
#include "nilcohom/observable.hpp"
#include "nilcohom/smooth_map.hpp"

#include <span>
#include <string>
#include <vector>

namespace nilcohom {

inline constexpr double kDefaultTolerance = 1e-2;

/// Integrals of the observables against the empirical measure mu_R of the
/// orbit, i.e. Haar averages of A(phi . g) over the ball of radius R.
ObservableAverages empirical_measure(const SmoothMap& phi, std::span<const Observable> observables, double radius,
	const SamplingOptions& options);

struct OrbitTrace {
	std::string observable;
	std::vector<double> radii;
	std::vector<double> values;
	std::vector<double> stderrs;
	std::vector<double> increments;
	double limit = 0.0;        // last value
	double limit_stderr = 0.0;
	bool stable = false;
};

struct ConvergenceReport {
	std::vector<OrbitTrace> traces;
	double tolerance = kDefaultTolerance;
	bool stable = false; // every trace stable
	std::size_t kink_hits = 0;
	std::string verdict() const { return stable ? "stable" : "not-stable"; }
};

/// A trace is stable when its last two increments (or its only one) are
/// below max(3 * combined stderr, tol).
ConvergenceReport convergence_report(const SmoothMap& phi, std::span<const Observable> observables,
	std::span<const double> radii, const SamplingOptions& options, double tol = kDefaultTolerance);

struct ProbeSpread {
	std::string observable;
	std::vector<double> limits; // per basepoint
	double spread = 0.0;        // max - min
	double threshold = 0.0;     // max(3 * combined stderr, tol)
};

struct ProbeReport {
	std::vector<GroupPoint> basepoints;
	std::vector<ConvergenceReport> orbits; // per basepoint
	std::vector<ProbeSpread> spreads;      // per observable
	double max_spread = 0.0;
	bool non_ergodic_evidence = false;
	std::string verdict() const { return non_ergodic_evidence ? "non-ergodic-evidence" : "consistent-with-ergodic"; }
};

/// Runs convergence_report on phi . p for every basepoint p and compares
/// the limit estimates.
ProbeReport ergodicity_probe(const SmoothMap& phi, std::span<const Observable> observables,
	std::span<const GroupPoint> basepoints, std::span<const double> radii, const SamplingOptions& options,
	double tol = kDefaultTolerance);

} // namespace nilcohom
