#include "nilcohom/observable.hpp"

#include "nilcohom/error.hpp"
#include "nilcohom/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace nilcohom {

namespace {

std::string entry_name(int i, int j, int n, int m)
{
	if (n < 10 && m < 10)
		return "d" + std::to_string(i) + std::to_string(j);
	return "d" + std::to_string(i) + "_" + std::to_string(j);
}

int parse_index(std::string_view text, const std::string& whole)
{
	int value = 0;
	auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
		throw ParseError("malformed observable '" + whole + "'");
	return value;
}

double parse_double(std::string_view text, const std::string& whole)
{
	double value = 0;
	auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
		throw ParseError("malformed number '" + std::string(text) + "' in observable '" + whole + "'");
	return value;
}

void check_range(int i, int j, int n, int m, const std::string& whole)
{
	if (i < 1 || i > n || j < 1 || j > m)
		throw ParseError("observable '" + whole + "' index out of range for a " + std::to_string(n) + " -> " +
			std::to_string(m) + " map");
}

struct Accumulator {
	std::vector<CompensatedSum> sum;
	std::vector<CompensatedSum> sum_sq;
	std::vector<CompensatedSum> sum_quad;
	std::size_t kinks = 0;
};

} // namespace

Observable Observable::derivative_entry(int i, int j, bool squared)
{
	Observable o;
	o.kind_ = squared ? Kind::SquaredDerivativeEntry : Kind::DerivativeEntry;
	o.i_ = i;
	o.j_ = j;
	o.name_ = entry_name(i + 1, j + 1, 9, 9) + (squared ? "sq" : "");
	return o;
}

Observable Observable::map_coordinate(int j, GroupPoint probe)
{
	Observable o;
	o.kind_ = Kind::MapCoordinate;
	o.j_ = j;
	std::ostringstream os;
	os.precision(17);
	os << 'x' << j + 1 << '@';
	for (std::size_t k = 0; k < probe.size(); ++k)
		os << (k ? ":" : "") << probe[k];
	o.name_ = os.str();
	o.probe_ = std::move(probe);
	return o;
}

double Observable::evaluate(const SmoothMap& phi, std::span<const double> g, const Eigen::MatrixXd* differential,
	EvalDiagnostics* diag) const
{
	switch (kind_) {
	case Kind::DerivativeEntry:
		return (*differential)(j_, i_);
	case Kind::SquaredDerivativeEntry: {
		const double v = (*differential)(j_, i_);
		return v * v;
	}
	case Kind::MapCoordinate: {
		if (probe_.size() != g.size())
			throw DimensionMismatch("observable probe point has the wrong dimension");
		const Group& domain = phi.domain();
		const Group& codomain = phi.codomain();
		const GroupPoint at_g = phi.evaluate(g, diag);
		const GroupPoint at_gp = phi.evaluate(domain.multiply<double>(g, probe_), diag);
		return codomain.multiply(Group::inverse(at_g), at_gp)[j_];
	}
	case Kind::Expression: {
		const auto& d = *differential;
		std::vector<double> entries(static_cast<std::size_t>(d.cols() * d.rows()));
		for (Eigen::Index i = 0; i < d.cols(); ++i)
			for (Eigen::Index j = 0; j < d.rows(); ++j)
				entries[i * d.rows() + j] = d(j, i);
		return program_->evaluate<double>(entries, diag);
	}
	}
	return 0.0;
}

SymbolTable derivative_symbols(int n, int m)
{
	std::vector<std::string> names;
	for (int i = 1; i <= n; ++i)
		for (int j = 1; j <= m; ++j)
			names.push_back(entry_name(i, j, n, m));
	return SymbolTable(std::move(names));
}

Observable parse_observable(const std::string& text, int n, int m)
{
	Observable o;
	o.name_ = text;
	if (text.rfind("expr:", 0) == 0) {
		o.kind_ = Observable::Kind::Expression;
		auto e = parse_expression(std::string_view(text).substr(5), derivative_symbols(n, m));
		o.program_ = std::make_shared<const Program>(*e);
		return o;
	}
	if (text.size() >= 2 && text[0] == 'x') {
		const auto at = text.find('@');
		if (at == std::string::npos)
			throw ParseError("observable '" + text + "' needs a probe point, as in x1@0.5");
		o.kind_ = Observable::Kind::MapCoordinate;
		const int j = parse_index(std::string_view(text).substr(1, at - 1), text);
		check_range(1, j, n, m, text);
		o.j_ = j - 1;
		std::string_view rest = std::string_view(text).substr(at + 1);
		while (true) {
			const auto colon = rest.find(':');
			o.probe_.push_back(parse_double(rest.substr(0, colon), text));
			if (colon == std::string_view::npos)
				break;
			rest = rest.substr(colon + 1);
		}
		if (static_cast<int>(o.probe_.size()) != n)
			throw ParseError("observable '" + text + "' probe point needs " + std::to_string(n) + " coordinates");
		return o;
	}
	if (text.size() >= 3 && text[0] == 'd') {
		std::string_view body = std::string_view(text).substr(1);
		bool squared = false;
		if (body.size() > 2 && body.substr(body.size() - 2) == "sq") {
			squared = true;
			body.remove_suffix(2);
		}
		int i = 0, j = 0;
		if (const auto us = body.find('_'); us != std::string_view::npos) {
			i = parse_index(body.substr(0, us), text);
			j = parse_index(body.substr(us + 1), text);
		} else if (body.size() == 2) {
			i = parse_index(body.substr(0, 1), text);
			j = parse_index(body.substr(1, 1), text);
		} else {
			throw ParseError("ambiguous observable '" + text + "'; write dI_J");
		}
		check_range(i, j, n, m, text);
		o.kind_ = squared ? Observable::Kind::SquaredDerivativeEntry : Observable::Kind::DerivativeEntry;
		o.i_ = i - 1;
		o.j_ = j - 1;
		return o;
	}
	throw ParseError("unknown observable '" + text + "' (expected dIJ, dIJsq, xJ@point or expr:...)");
}

std::vector<Observable> parse_observables(const std::string& text, int n, int m)
{
	std::vector<Observable> out;
	std::size_t start = 0;
	while (start <= text.size()) {
		const auto comma = text.find(',', start);
		std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
		const auto first = item.find_first_not_of(" \t");
		item = first == std::string::npos ? std::string() : item.substr(first, item.find_last_not_of(" \t") - first + 1);
		if (!item.empty())
			out.push_back(parse_observable(item, n, m));
		if (comma == std::string::npos)
			break;
		start = comma + 1;
	}
	if (out.empty())
		throw ParseError("no observables given");
	return out;
}

ObservableAverages average_observables(const SmoothMap& phi, std::span<const Observable> observables,
	const BallSpec& ball, const SamplingOptions& options, std::uint64_t stream)
{
	if (options.samples < 2)
		throw Error("at least two samples are required");
	const std::size_t count = observables.size();
	bool need_d = false;
	for (const auto& o : observables)
		need_d = need_d || o.needs_differential();

	BallSampler sampler(phi.domain(), ball, options.seed, stream);
	auto chunks = map_chunks<Accumulator>(options.samples, options.chunk, options.threads,
		[&](std::size_t begin, std::size_t end) {
			Accumulator acc{std::vector<CompensatedSum>(count), std::vector<CompensatedSum>(count),
				std::vector<CompensatedSum>(count), 0};
			EvalDiagnostics diag;
			GroupPoint g(static_cast<std::size_t>(phi.domain().dim()));
			Eigen::MatrixXd d;
			for (std::size_t s = begin; s < end; ++s) {
				sampler.sample(s, g);
				if (need_d)
					d = phi.differential(g, &diag);
				for (std::size_t k = 0; k < count; ++k) {
					const double v = observables[k].evaluate(phi, g, need_d ? &d : nullptr, &diag);
					acc.sum[k].add(v);
					acc.sum_sq[k].add(v * v);
					acc.sum_quad[k].add(v * v * v * v);
				}
			}
			acc.kinks = diag.kink_hits;
			return acc;
		});

	ObservableAverages out;
	out.samples = options.samples;
	std::vector<CompensatedSum> sum(count), sum_sq(count), sum_quad(count);
	for (const auto& c : chunks) {
		for (std::size_t k = 0; k < count; ++k) {
			sum[k].add(c.sum[k].value());
			sum_sq[k].add(c.sum_sq[k].value());
			sum_quad[k].add(c.sum_quad[k].value());
		}
		out.kink_hits += c.kinks;
	}
	const double n = static_cast<double>(options.samples);
	for (std::size_t k = 0; k < count; ++k) {
		const double mean = sum[k].value() / n;
		const double mean_sq = sum_sq[k].value() / n;
		const double var = std::max(0.0, (mean_sq - mean * mean) * n / (n - 1));
		out.mean.push_back(mean);
		out.mean_of_squares.push_back(mean_sq);
		out.standard_error.push_back(std::sqrt(var / n));
		const double mean_quad = sum_quad[k].value() / n;
		const double var_sq = std::max(0.0, (mean_quad - mean_sq * mean_sq) * n / (n - 1));
		out.square_standard_error.push_back(std::sqrt(var_sq / n));
	}
	return out;
}

double sampled_derivative_bound(const SmoothMap& phi, const BallSpec& ball, const SamplingOptions& options,
	std::uint64_t stream)
{
	BallSampler sampler(phi.domain(), ball, options.seed, stream);
	auto chunks = map_chunks<double>(options.samples, options.chunk, options.threads,
		[&](std::size_t begin, std::size_t end) {
			double bound = 0.0;
			GroupPoint g(static_cast<std::size_t>(phi.domain().dim()));
			for (std::size_t s = begin; s < end; ++s) {
				sampler.sample(s, g);
				bound = std::max(bound, phi.differential(g).cwiseAbs().maxCoeff());
			}
			return bound;
		});
	double bound = 0.0;
	for (double b : chunks)
		bound = std::max(bound, b);
	return bound;
}

} // namespace nilcohom
