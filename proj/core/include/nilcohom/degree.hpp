#pragma once

#include "nilcohom/exterior.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/observable.hpp"
#include "nilcohom/smooth_map.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nilcohom {

struct DegreeOptions {
	int grid_density = 8;        // Newton starts per axis
	std::uint64_t seed = 0;      // drives target perturbations
	int max_retries = 3;
	bool check_stability = true; // repeat with a grid twice as dense
	int boundary_density = 0;    // boundary samples per axis; 0 picks 64 * grid_density^(1/(n-1))
};

struct DegreeResult {
	int value = 0;
	GroupPoint target;           // the target actually used (after perturbation)
	BallSpec window;
	int preimage_count = 0;
	double min_jacobian_margin = 0.0;
	double boundary_margin = 0.0;
	int retries = 0;
	int grid_density = 0;
	bool stable = true;          // denser grid gave the same degree
	std::vector<GroupPoint> preimages;
};

/// Degree by preimage counting inside a coordinate box window. Starting
/// points and the sampled boundary image are computed once and reused for
/// many targets.
class DegreeSolver {
public:
	DegreeSolver(const SmoothMap& phi, BallSpec window, DegreeOptions options = {});

	const BallSpec& window() const noexcept { return window_; }

	/// Smallest distance from y to the sampled boundary image.
	double boundary_margin(std::span<const double> y) const;

	/// Throws BoundaryTooClose and SingularTarget.
	DegreeResult solve(std::span<const double> target, std::uint64_t target_index = 0) const;

	/// Bounding box of the sampled image of the window, as (low, high).
	std::pair<GroupPoint, GroupPoint> image_bounds() const;

private:
	struct Located {
		std::vector<GroupPoint> roots;
		std::vector<double> dets;
		std::vector<bool> critical;
	};
	Located locate(std::span<const double> target, const std::vector<GroupPoint>& starts) const;
	std::vector<GroupPoint> grid(int density) const;

	const SmoothMap* phi_;
	BallSpec window_;
	DegreeOptions options_;
	std::vector<double> half_widths_;
	std::vector<GroupPoint> starts_;
	std::vector<GroupPoint> dense_starts_;
	std::vector<GroupPoint> boundary_image_;
};

DegreeResult local_degree(const SmoothMap& phi, const BallSpec& window, std::span<const double> target,
	const DegreeOptions& options = {});

struct AreaFormulaReport {
	double window_volume = 0.0;
	double signed_lhs = 0.0;   // integral of det Df over the window
	double signed_lhs_stderr = 0.0;
	double unsigned_lhs = 0.0; // integral of |det Df|
	double unsigned_lhs_stderr = 0.0;
	double rhs = 0.0;          // integral of deg(f, U, h) over the image box
	double rhs_stderr = 0.0;
	double residual = 0.0;     // signed_lhs - rhs
	double combined_stderr = 0.0;
	GroupPoint image_low, image_high;
	std::size_t samples = 0;
	std::size_t skipped_targets = 0;
};

AreaFormulaReport area_formula_check(const SmoothMap& phi, const BallSpec& window, const SamplingOptions& sampling,
	const DegreeOptions& options = {});

struct AsymptoticDegreeTrace {
	std::vector<double> radii;
	std::vector<double> tau;         // integral of phi^* omega over B_R
	std::vector<double> tau_stderr;
	std::vector<double> ball_volumes;
	std::vector<double> ratio;       // tau / |B_R|
	std::vector<double> ratio_stderr;
	double distortion_min = 0.0;     // sampled d_H / d_G over random pairs in the last ball
	double distortion_max = 0.0;
	std::size_t kink_hits = 0;
	std::string verdict;
};

/// Defaults to the codomain volume form e_1^* ^ ... ^ e_n^*.
AsymptoticDegreeTrace asymptotic_degree(const SmoothMap& phi, std::span<const double> radii,
	const SamplingOptions& options, std::optional<KForm> omega = std::nullopt);

} // namespace nilcohom
