#pragma once

#include "nilcohom/cohomology.hpp"
#include "nilcohom/exterior.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/observable.hpp"
#include "nilcohom/smooth_map.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nilcohom {

/// Radii r0, r0*ratio, ..., n terms.
std::vector<double> geometric_schedule(double first = 4.0, double ratio = 2.0, int steps = 6);
/// "first:ratio:steps", e.g. "4:2:6".
std::vector<double> parse_schedule(const std::string& text);

/// (phi^* omega)(V_lambda) at g from the frame differential M:
/// sum_I omega_I det M[I, lambda].
double pullback_coefficient(const Eigen::MatrixXd& m, const KForm& omega, WedgeMask lambda);
/// The whole pulled-back form at one point.
RealForm pullback_form(const Eigen::MatrixXd& m, const KForm& omega);

double pullback_eval(const SmoothMap& phi, const KForm& omega, WedgeMask lambda, std::span<const double> g);

/// Ball average of each form's pullback on one shared point cloud.
struct FormAverages {
	std::vector<RealForm> mean;
	std::vector<RealForm> standard_error;
	std::size_t kink_hits = 0;
};

FormAverages average_forms(const SmoothMap& phi, std::span<const KForm> forms, const BallSpec& ball,
	const SamplingOptions& options, std::uint64_t stream);

struct AverageEstimate {
	std::vector<double> radii;
	std::vector<RealForm> values;
	std::vector<RealForm> stderrs;
	std::vector<double> mc_stderr;  // per radius, largest coefficient stderr
	std::vector<double> increments; // |values[k] - values[k-1]|_max, k >= 1
	RealForm extrapolated;          // last value
	bool non_convergent = false;
	std::size_t kink_hits = 0;
};

/// Increments of a sequence of averages and whether they grew by more than
/// three combined standard errors somewhere.
void finish_estimate(AverageEstimate& e);

AverageEstimate amenable_average(const SmoothMap& phi, const KForm& omega, std::span<const double> radii,
	const SamplingOptions& options);

/// Several forms on shared point clouds (stream k for radius k).
std::vector<AverageEstimate> amenable_averages(const SmoothMap& phi, std::span<const KForm> forms,
	std::span<const double> radii, const SamplingOptions& options);

/// Checks phi(g h) = phi(g) phi(h) on random pairs within tol (relative to
/// the size of the values).
bool is_homomorphism(const SmoothMap& phi, std::size_t pairs = 64, std::uint64_t seed = 0, double tol = 1e-9);

/// Pullback by the Lie algebra map D_0 phi, exact for homomorphisms.
RealForm exact_pullback(const SmoothMap& phi, const KForm& omega);

struct DegreeBlock {
	int degree = 0;
	std::vector<std::vector<double>> matrix;  // rows: H^k(domain), cols: H^k(codomain)
	std::vector<std::vector<double>> stderrs;
	std::vector<double> chain_residuals;      // per radius
	double chain_threshold = 0.0;
	std::vector<double> non_closed;           // per codomain class, final radius
};

struct MultResidual {
	int k = 0, i = 0, l = 0, j = 0;
	std::vector<double> residuals; // per radius
	double threshold = 0.0;
};

struct HomomorphismReport {
	std::vector<double> radii;
	std::vector<DegreeBlock> blocks;
	std::vector<MultResidual> mult;
	std::vector<std::string> warnings;
	bool homomorphism_detected = false;
	double exact_deviation = 0.0; // max |average - exact pullback| when detected
	bool chain_ok = true;
	bool mult_ok = true;
	std::size_t kink_hits = 0;
};

HomomorphismReport induced_cohomology_map(const SmoothMap& phi, std::span<const double> radii,
	const SamplingOptions& options);

/// Same pipeline; kept as a separate entry point for the multiplicativity
/// section.
HomomorphismReport homomorphism_check(const SmoothMap& phi, std::span<const double> radii,
	const SamplingOptions& options);

struct NormEstimate {
	std::vector<double> radii;
	std::vector<double> values;
	std::vector<double> stderrs;
	std::size_t kink_hits = 0;
};

/// sqrt of the ball average of |gamma|^2 along the orbit.
NormEstimate amenable_norm(const SmoothMap& phi, const Observable& gamma, std::span<const double> radii,
	const SamplingOptions& options);

} // namespace nilcohom
