#pragma once

#include "nilcohom/expr.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/jet.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nilcohom {

/// Result of pushing a point through a map with first derivatives.
struct MapJet {
	GroupPoint value;
	Eigen::MatrixXd jacobian; // m x n coordinate Jacobian
};

/// A map between groups given in exponential coordinates by one expression
/// per codomain coordinate over x1..xn. Translations are kept as lazy
/// composition records: the map is
///     x -> left * raw(translate * x)
/// where raw is the expression map, so the right action and Y0
/// normalization cost one group product each per evaluation.
class SmoothMap {
public:
	SmoothMap(GroupPtr domain, GroupPtr codomain, const std::vector<std::string>& components);

	const Group& domain() const noexcept { return *domain_; }
	const Group& codomain() const noexcept { return *codomain_; }
	GroupPtr domain_ptr() const noexcept { return domain_; }
	GroupPtr codomain_ptr() const noexcept { return codomain_; }

	const std::vector<std::string>& component_sources() const noexcept { return raw_->sources; }
	/// Canonical printed form of each component.
	std::vector<std::string> component_text() const;

	const GroupPoint& translate() const noexcept { return translate_; }
	/// Left translation applied in the codomain (the basepoint shift).
	const GroupPoint& basepoint_shift() const noexcept { return left_; }

	GroupPoint evaluate(std::span<const double> g, EvalDiagnostics* diag = nullptr) const;
	MapJet evaluate_jet(std::span<const double> g, EvalDiagnostics* diag = nullptr) const;
	Eigen::MatrixXd coordinate_jacobian(std::span<const double> g, EvalDiagnostics* diag = nullptr) const;

	/// Matrix M with D_g phi(V_i) = sum_j M(j, i) U_j(phi(g)), where V and U
	/// are the left-invariant frames of domain and codomain; M(j, i) is the
	/// matrix coefficient m_ij(g).
	Eigen::MatrixXd differential(std::span<const double> g, EvalDiagnostics* diag = nullptr) const;
	/// Same, from an already evaluated jet at g.
	Eigen::MatrixXd differential(std::span<const double> g, const MapJet& jet) const;

	/// Left-translates by map(origin)^-1 so the origin is fixed.
	SmoothMap normalize_to_y0() const;

	/// Right action (phi . g)(x) = phi(g)^-1 phi(g x).
	SmoothMap act(std::span<const double> g) const;

private:
	struct Raw {
		std::vector<std::string> sources;
		std::vector<ExprPtr> exprs;
		std::vector<Program> programs;
	};

	template <class T>
	std::vector<T> raw_eval(std::span<const T> x, EvalDiagnostics* diag) const;

	GroupPtr domain_;
	GroupPtr codomain_;
	std::shared_ptr<const Raw> raw_;
	GroupPoint translate_;
	GroupPoint left_;
	bool has_translate_ = false;
	bool has_left_ = false;
};

} // namespace nilcohom
