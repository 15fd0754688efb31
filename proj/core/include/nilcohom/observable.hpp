#pragma once

#include "nilcohom/expr.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/smooth_map.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nilcohom {

/// A continuous function on maps, evaluated on translates phi . g of a map.
///
/// Spellings accepted by parse_observable (indices 1-based; i runs over the
/// domain, j over the codomain):
///   dIJ or dI_J     matrix coefficient m_ij at the identity
///   dIJsq, dI_Jsq   its square
///   xJ@p1:p2:...    coordinate j of the map at the probe point p
///   expr:<text>     expression over the dIJ symbols
class Observable {
public:
	enum class Kind { DerivativeEntry, SquaredDerivativeEntry, MapCoordinate, Expression };

	const std::string& name() const noexcept { return name_; }
	Kind kind() const noexcept { return kind_; }
	int domain_index() const noexcept { return i_; }
	int codomain_index() const noexcept { return j_; }
	const GroupPoint& probe() const noexcept { return probe_; }

	bool needs_differential() const noexcept { return kind_ != Kind::MapCoordinate; }

	/// Value on phi . g. `differential` must be phi's frame differential at g
	/// when needs_differential() holds.
	double evaluate(const SmoothMap& phi, std::span<const double> g, const Eigen::MatrixXd* differential,
		EvalDiagnostics* diag) const;

	static Observable derivative_entry(int i, int j, bool squared = false);
	static Observable map_coordinate(int j, GroupPoint probe);

private:
	friend Observable parse_observable(const std::string&, int, int);

	std::string name_;
	Kind kind_ = Kind::DerivativeEntry;
	int i_ = 0; // 0-based
	int j_ = 0;
	GroupPoint probe_;
	std::shared_ptr<const Program> program_;
	int program_cols_ = 0;
};

/// Symbols available to expression observables for an n -> m map.
SymbolTable derivative_symbols(int n, int m);

Observable parse_observable(const std::string& text, int domain_dim, int codomain_dim);
/// Comma-separated list.
std::vector<Observable> parse_observables(const std::string& text, int domain_dim, int codomain_dim);

struct ObservableAverages {
	std::vector<double> mean;
	std::vector<double> mean_of_squares;
	std::vector<double> standard_error;
	std::vector<double> square_standard_error; // of mean_of_squares
	std::size_t samples = 0;
	std::size_t kink_hits = 0;
};

struct SamplingOptions {
	std::size_t samples = 100000;
	std::uint64_t seed = 0;
	int threads = 1;
	BallShape shape = BallShape::Box;
	std::size_t chunk = 4096;
};

/// Haar averages of the observables over phi . g for g uniform in the ball.
ObservableAverages average_observables(const SmoothMap& phi, std::span<const Observable> observables,
	const BallSpec& ball, const SamplingOptions& options, std::uint64_t stream);

/// Largest |m_ij(g)| seen over sampled g in the ball. A sampled stand-in for
/// the sup-norm bound on the derivative, which is not checked symbolically.
double sampled_derivative_bound(const SmoothMap& phi, const BallSpec& ball, const SamplingOptions& options,
	std::uint64_t stream);

} // namespace nilcohom
