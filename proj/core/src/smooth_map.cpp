#include "nilcohom/smooth_map.hpp"

#include "nilcohom/error.hpp"

#include <cmath>

namespace nilcohom {

namespace {

bool is_origin(std::span<const double> g)
{
	for (double v : g)
		if (v != 0.0)
			return false;
	return true;
}

/// Solves F x = b for every column of b, F being a codomain frame.
Eigen::MatrixXd frame_solve(const Group& group, const Eigen::MatrixXd& frame, const Eigen::MatrixXd& b)
{
	if (group.lower_triangular_frames())
		return frame.triangularView<Eigen::UnitLower>().solve(b);
	Eigen::PartialPivLU<Eigen::MatrixXd> lu(frame);
	if (std::abs(lu.determinant()) < 1e-12)
		throw IllConditionedFrame("left-invariant frame is ill conditioned (|det| < 1e-12)");
	return lu.solve(b);
}

} // namespace

SmoothMap::SmoothMap(GroupPtr domain, GroupPtr codomain, const std::vector<std::string>& components)
	: domain_(std::move(domain)), codomain_(std::move(codomain))
{
	const int n = domain_->dim();
	const int m = codomain_->dim();
	if (n > kMaxJetDim)
		throw DimensionMismatch("domain dimension " + std::to_string(n) + " exceeds the supported maximum " +
			std::to_string(kMaxJetDim));
	if (static_cast<int>(components.size()) != m)
		throw DimensionMismatch("map has " + std::to_string(components.size()) +
			" components but the codomain has dimension " + std::to_string(m));
	auto raw = std::make_shared<Raw>();
	raw->sources = components;
	const SymbolTable symbols = SymbolTable::coordinates(n);
	for (const auto& text : components) {
		raw->exprs.push_back(parse_expression(text, symbols));
		raw->programs.emplace_back(*raw->exprs.back());
	}
	raw_ = std::move(raw);
	translate_.assign(static_cast<std::size_t>(n), 0.0);
	left_.assign(static_cast<std::size_t>(m), 0.0);
}

std::vector<std::string> SmoothMap::component_text() const
{
	std::vector<std::string> out;
	for (const auto& e : raw_->exprs)
		out.push_back(to_string(*e));
	return out;
}

template <class T>
std::vector<T> SmoothMap::raw_eval(std::span<const T> x, EvalDiagnostics* diag) const
{
	std::vector<T> out;
	out.reserve(raw_->programs.size());
	for (const auto& p : raw_->programs)
		out.push_back(p.evaluate<T>(x, diag));
	return out;
}

GroupPoint SmoothMap::evaluate(std::span<const double> g, EvalDiagnostics* diag) const
{
	if (static_cast<int>(g.size()) != domain_->dim())
		throw DimensionMismatch("point has the wrong dimension for the map domain");
	GroupPoint x = has_translate_ ? domain_->multiply<double>(translate_, g) : GroupPoint(g.begin(), g.end());
	GroupPoint y = raw_eval<double>(x, diag);
	if (has_left_)
		y = codomain_->multiply<double>(left_, y);
	return y;
}

MapJet SmoothMap::evaluate_jet(std::span<const double> g, EvalDiagnostics* diag) const
{
	const int n = domain_->dim();
	const int m = codomain_->dim();
	if (static_cast<int>(g.size()) != n)
		throw DimensionMismatch("point has the wrong dimension for the map domain");
	std::vector<Jet> x;
	x.reserve(static_cast<std::size_t>(n));
	for (int i = 0; i < n; ++i)
		x.push_back(Jet::variable(g[i], i));
	if (has_translate_) {
		std::vector<Jet> t(translate_.begin(), translate_.end());
		x = domain_->multiply<Jet>(t, x);
	}
	std::vector<Jet> y = raw_eval<Jet>(x, diag);
	if (has_left_) {
		std::vector<Jet> l(left_.begin(), left_.end());
		y = codomain_->multiply<Jet>(l, y);
	}
	MapJet out{GroupPoint(static_cast<std::size_t>(m)), Eigen::MatrixXd(m, n)};
	for (int k = 0; k < m; ++k) {
		out.value[k] = y[k].value;
		for (int i = 0; i < n; ++i)
			out.jacobian(k, i) = y[k].d[i];
	}
	return out;
}

Eigen::MatrixXd SmoothMap::coordinate_jacobian(std::span<const double> g, EvalDiagnostics* diag) const
{
	return evaluate_jet(g, diag).jacobian;
}

Eigen::MatrixXd SmoothMap::differential(std::span<const double> g, EvalDiagnostics* diag) const
{
	return differential(g, evaluate_jet(g, diag));
}

Eigen::MatrixXd SmoothMap::differential(std::span<const double> g, const MapJet& jet) const
{
	Eigen::MatrixXd pushed = domain_->is_abelian() ? jet.jacobian : Eigen::MatrixXd(jet.jacobian * domain_->left_frame(g));
	if (codomain_->is_abelian())
		return pushed;
	return frame_solve(*codomain_, codomain_->left_frame(jet.value), pushed);
}

SmoothMap SmoothMap::normalize_to_y0() const
{
	const GroupPoint origin(static_cast<std::size_t>(domain_->dim()), 0.0);
	const GroupPoint base = evaluate(origin);
	SmoothMap out = *this;
	out.left_ = codomain_->multiply(Group::inverse(base), left_);
	out.has_left_ = !is_origin(out.left_);
	return out;
}

SmoothMap SmoothMap::act(std::span<const double> g) const
{
	if (static_cast<int>(g.size()) != domain_->dim())
		throw DimensionMismatch("acting element has the wrong dimension");
	const GroupPoint at_g = evaluate(g);
	SmoothMap out = *this;
	out.translate_ = domain_->multiply<double>(translate_, g);
	out.has_translate_ = !is_origin(out.translate_);
	out.left_ = codomain_->multiply(Group::inverse(at_g), left_);
	out.has_left_ = !is_origin(out.left_);
	return out;
}

} // namespace nilcohom
