#include "app.hpp"

#include "nilcohom/cohomology.hpp"
#include "nilcohom/degree.hpp"
#include "nilcohom/ergodic.hpp"
#include "nilcohom/error.hpp"
#include "nilcohom/io.hpp"
#include "nilcohom/observable.hpp"
#include "nilcohom/pullback.hpp"
#include "nilcohom/rational.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

namespace nilcohom::app {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::uint64_t kBoundStream = 0xB0B0;
constexpr std::uint64_t kShapeGapStream = 0x5EA9;
constexpr std::size_t kBoundSamples = 20000;

std::string sha256_hex(const std::string& bytes)
{
	unsigned char md[EVP_MAX_MD_SIZE];
	unsigned int len = 0;
	if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
		throw Error("sha256 digest failed");
	std::ostringstream hex;
	for (unsigned int i = 0; i < len; ++i)
		hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
	return hex.str();
}

std::string read_file(const fs::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw ParseError("cannot open " + path.string());
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

/// Everything one subcommand contributes to the report.
struct Report {
	Json inputs = Json::array();
	Json parameters = Json::object();
	Json results = Json::object();
	std::vector<std::string> warnings;

	void add_file(const std::string& role, const fs::path& path)
	{
		const std::string ref = path.lexically_normal().string();
		for (const auto& in : inputs)
			if (in["ref"] == ref)
				return;
		inputs.push_back({{"role", role}, {"ref", ref}, {"sha256", sha256_hex(read_file(path))}});
	}
	void add_builtin(const std::string& role, const std::string& name)
	{
		inputs.push_back({{"role", role}, {"ref", name}, {"builtin", true}});
	}
	void note_kinks(std::size_t hits)
	{
		if (hits > 0)
			warnings.push_back(std::to_string(hits) + " evaluations fell within 1e-9 of an abs() kink");
	}
};

// ---------------------------------------------------------------------------
// options shared by the sampling subcommands

struct Sampling {
	std::uint64_t seed = 0;
	int threads = 1;
	std::size_t samples = 100000;
	std::string radii = "4:2:6";
	std::string ball;
};

struct CommonArgs {
	std::string out;
	std::string map;
};

void add_sampling(CLI::App* sub, Sampling& s)
{
	sub->add_option("--seed", s.seed, "Random seed (default 0)");
	sub->add_option("--threads", s.threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
	sub->add_option("--samples", s.samples, "Monte Carlo samples per radius")->check(CLI::Range(2, 1 << 30));
	sub->add_option("--radii", s.radii, "Radius schedule first:ratio:steps");
	sub->add_option("--ball", s.ball, "Folner set, e.g. shape=quasi-ball or shape=box,R=8");
}

struct Schedule {
	std::vector<double> radii;
	SamplingOptions options;
};

/// Resolves --radii and --ball. An R in --ball replaces the schedule by
/// that single radius.
Schedule resolve(const Sampling& s)
{
	Schedule out;
	out.radii = parse_schedule(s.radii);
	out.options.samples = s.samples;
	out.options.seed = s.seed;
	out.options.threads = s.threads;
	if (s.ball.empty())
		return out;
	std::stringstream items(s.ball);
	std::string item;
	while (std::getline(items, item, ',')) {
		const auto eq = item.find('=');
		if (eq == std::string::npos)
			throw ParseError("ball item '" + item + "' is not key=value");
		const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
		if (key == "shape") {
			out.options.shape = parse_ball_shape(value);
		} else if (key == "R") {
			std::size_t used = 0;
			double r = 0;
			try {
				r = std::stod(value, &used);
			} catch (const std::exception&) {
				used = 0;
			}
			if (used != value.size() || !(r > 0))
				throw ParseError("ball radius must be a positive number, got '" + value + "'");
			out.radii = {r};
		} else {
			throw ParseError("unknown ball key '" + key + "'");
		}
	}
	return out;
}

void echo_sampling(Report& rep, const Schedule& sch)
{
	rep.parameters["radii"] = sch.radii;
	rep.parameters["samples"] = sch.options.samples;
	rep.parameters["shape"] = to_string(sch.options.shape);
	rep.parameters["threads"] = sch.options.threads;
	if (sch.options.shape == BallShape::Box)
		rep.warnings.push_back("Folner sets are anisotropic coordinate boxes |g_i| <= R^w_i, not metric balls");
	else
		rep.warnings.push_back("Folner sets are homogeneous-norm balls sampled by rejection, not metric balls");
}

// ---------------------------------------------------------------------------
// input resolution

LieAlgebra algebra_input(Report& rep, const std::string& role, const std::string& ref)
{
	if (is_builtin_algebra(ref)) {
		rep.add_builtin(role, ref);
		return builtin_algebra(ref);
	}
	LieAlgebra alg = load_algebra(ref);
	rep.add_file(role, ref);
	return alg;
}

SmoothMap map_input(Report& rep, const std::string& path)
{
	if (path.empty())
		throw ParseError("--map is required");
	LoadedMap loaded = load_map(path);
	rep.add_file("map", path);
	for (const auto& f : loaded.referenced_files)
		rep.add_file("map-reference", f);
	rep.parameters["map_components"] = loaded.map.component_text();
	return std::move(loaded.map);
}

void add_derivative_bound(Report& rep, const SmoothMap& phi, const Schedule& sch)
{
	SamplingOptions o = sch.options;
	o.samples = std::min<std::size_t>(o.samples, kBoundSamples);
	const BallSpec ball = make_ball(phi.domain(), sch.radii.back(), o.shape);
	rep.results["derivative_bound"] = {{"radius", sch.radii.back()}, {"samples", o.samples},
		{"max_abs_matrix_coefficient", sampled_derivative_bound(phi, ball, o, kBoundStream)}};
}

// ---------------------------------------------------------------------------
// serialization helpers

std::string mask_name(WedgeMask m, const LieAlgebra& alg)
{
	if (m == 0)
		return "1";
	std::string out;
	for (int i : mask_indices(m)) {
		if (!out.empty())
			out += "^";
		out += alg.basis_names()[static_cast<std::size_t>(i)];
	}
	return out;
}

Json form_json(const RealForm& f, const LieAlgebra& alg)
{
	Json j = Json::object();
	for (WedgeMask m : wedge_basis(alg.dim(), f.degree()))
		j[mask_name(m, alg)] = f.coeff(m);
	return j;
}

Json rational_vector(const RationalVector& v)
{
	Json j = Json::array();
	for (const auto& q : v)
		j.push_back(to_string(q));
	return j;
}

Json signature_json(const RingSignature& sig)
{
	Json ranks = Json::array();
	for (const auto& c : sig.cup_ranks)
		ranks.push_back({{"k", c.k}, {"l", c.l}, {"rank", c.rank}});
	return {{"betti", sig.betti}, {"cup_ranks", ranks}};
}

Json trace_json(const OrbitTrace& t)
{
	return {{"observable", t.observable}, {"radii", t.radii}, {"values", t.values}, {"stderrs", t.stderrs},
		{"increments", t.increments}, {"limit", t.limit}, {"limit_stderr", t.limit_stderr}, {"stable", t.stable}};
}

Json convergence_json(const ConvergenceReport& r)
{
	Json traces = Json::array();
	for (const auto& t : r.traces)
		traces.push_back(trace_json(t));
	return {{"verdict", r.verdict()}, {"tolerance", r.tolerance}, {"traces", traces}};
}

Json degree_json(const DegreeResult& d)
{
	return {{"degree", d.value}, {"target", d.target}, {"preimage_count", d.preimage_count},
		{"preimages", d.preimages}, {"min_jacobian_margin", d.min_jacobian_margin},
		{"boundary_margin", d.boundary_margin}, {"retries", d.retries}, {"grid_density", d.grid_density},
		{"stable", d.stable}};
}

// ---------------------------------------------------------------------------
// subcommands

void cmd_cohomology(Report& rep, const std::string& ref)
{
	const LieAlgebra alg = algebra_input(rep, "algebra", ref);
	const CohomologyRing ring = cohomology(alg);
	const auto betti = ring.betti();
	int euler = 0;
	for (std::size_t k = 0; k < betti.size(); ++k)
		euler += (k % 2 == 0 ? 1 : -1) * betti[k];

	Json reps = Json::array();
	for (const auto& space : ring.spaces()) {
		Json classes = Json::array();
		for (const auto& r : space.representatives)
			classes.push_back(form_to_string(r, alg));
		reps.push_back({{"degree", space.degree}, {"classes", classes}});
	}

	Json cups = Json::array();
	for (int k = 1; k <= alg.dim(); ++k)
		for (int l = k; k + l <= alg.dim(); ++l)
			for (int i = 0; i < betti[static_cast<std::size_t>(k)]; ++i)
				for (int j = 0; j < betti[static_cast<std::size_t>(l)]; ++j)
					cups.push_back({{"k", k}, {"i", i}, {"l", l}, {"j", j},
						{"product", rational_vector(ring.cup(k, i, l, j))}});

	rep.results["dim"] = alg.dim();
	rep.results["basis"] = alg.basis_names();
	rep.results["lower_central_series"] = alg.lower_central_series();
	rep.results["weights"] = alg.weights();
	rep.results["homogeneous_dimension"] = alg.homogeneous_dimension();
	rep.results["betti"] = betti;
	rep.results["euler_characteristic"] = euler;
	rep.results["representatives"] = reps;
	rep.results["cup_table"] = cups;
	rep.results["ring_invariants"] = signature_json(ring_invariants(ring));
}

void cmd_compare(Report& rep, const std::string& a_ref, const std::string& b_ref)
{
	const auto a = ring_invariants(cohomology(algebra_input(rep, "algebra-a", a_ref)));
	const auto b = ring_invariants(cohomology(algebra_input(rep, "algebra-b", b_ref)));
	const auto cmp = compare(a, b);
	rep.results["a"] = signature_json(a);
	rep.results["b"] = signature_json(b);
	rep.results["verdict"] = cmp.verdict();
	rep.results["differences"] = cmp.differences;
}

void cmd_average(Report& rep, const CommonArgs& c, const Sampling& s, const std::vector<std::string>& form_texts)
{
	const SmoothMap phi = map_input(rep, c.map);
	const Schedule sch = resolve(s);
	echo_sampling(rep, sch);
	if (form_texts.empty())
		throw ParseError("at least one --form is required");
	std::vector<KForm> forms;
	for (const auto& t : form_texts)
		forms.push_back(parse_form(t, phi.codomain().algebra()));
	rep.parameters["forms"] = form_texts;

	const auto estimates = amenable_averages(phi, forms, sch.radii, sch.options);
	const LieAlgebra& dom = phi.domain().algebra();

	// The same forms once more at the last radius over the other Folner shape.
	SamplingOptions other = sch.options;
	other.shape = sch.options.shape == BallShape::Box ? BallShape::QuasiBall : BallShape::Box;
	const auto alt = average_forms(phi, forms, make_ball(phi.domain(), sch.radii.back(), other.shape), other,
		kShapeGapStream);

	Json out = Json::array();
	std::size_t kinks = alt.kink_hits;
	for (std::size_t f = 0; f < forms.size(); ++f) {
		const auto& e = estimates[f];
		Json values = Json::array(), errs = Json::array();
		for (std::size_t r = 0; r < e.radii.size(); ++r) {
			values.push_back(form_json(e.values[r], dom));
			errs.push_back(form_json(e.stderrs[r], dom));
		}
		double gap = 0.0;
		for (WedgeMask m : wedge_basis(dom.dim(), forms[f].degree()))
			gap = std::max(gap, std::abs(alt.mean[f].coeff(m) - e.extrapolated.coeff(m)));
		out.push_back({{"form", form_texts[f]}, {"radii", e.radii}, {"coefficients", values}, {"stderrs", errs},
			{"mc_stderr", e.mc_stderr}, {"increments", e.increments},
			{"extrapolated", form_json(e.extrapolated, dom)}, {"non_convergent", e.non_convergent},
			{"shape_gap",
				{{"shape", to_string(other.shape)}, {"radius", sch.radii.back()},
					{"coefficients", form_json(alt.mean[f], dom)}, {"stderrs", form_json(alt.standard_error[f], dom)},
					{"max_abs_difference", gap}}}});
		if (e.non_convergent)
			rep.warnings.push_back("form '" + form_texts[f] + "': increments grew beyond three standard errors");
		kinks += e.kink_hits;
	}
	rep.results["averages"] = out;
	add_derivative_bound(rep, phi, sch);
	rep.note_kinks(kinks);
}

void cmd_orbit(Report& rep, const CommonArgs& c, const Sampling& s, const std::string& obs_text,
	const std::string& basepoints, double tol)
{
	const SmoothMap phi = map_input(rep, c.map);
	const Schedule sch = resolve(s);
	echo_sampling(rep, sch);
	const auto obs = parse_observables(obs_text, phi.domain().dim(), phi.codomain().dim());
	rep.parameters["observables"] = obs_text;
	rep.parameters["tolerance"] = tol;

	if (basepoints.empty()) {
		const auto conv = convergence_report(phi, obs, sch.radii, sch.options, tol);
		rep.results["convergence"] = convergence_json(conv);
		rep.results["verdict"] = conv.verdict();
		rep.note_kinks(conv.kink_hits);
	} else {
		const auto points = parse_points(basepoints, phi.domain().dim());
		rep.parameters["basepoints"] = points;
		const auto probe = ergodicity_probe(phi, obs, points, sch.radii, sch.options, tol);
		Json spreads = Json::array(), orbits = Json::array();
		for (const auto& sp : probe.spreads)
			spreads.push_back({{"observable", sp.observable}, {"limits", sp.limits}, {"spread", sp.spread},
				{"threshold", sp.threshold}});
		std::size_t kinks = 0;
		for (std::size_t p = 0; p < probe.orbits.size(); ++p) {
			Json o = convergence_json(probe.orbits[p]);
			o["basepoint"] = probe.basepoints[p];
			orbits.push_back(o);
			kinks += probe.orbits[p].kink_hits;
			if (!probe.orbits[p].stable)
				rep.warnings.push_back("orbit " + std::to_string(p) + " did not stabilize over the schedule");
		}
		rep.results["verdict"] = probe.verdict();
		rep.results["max_spread"] = probe.max_spread;
		rep.results["spreads"] = spreads;
		rep.results["orbits"] = orbits;
		rep.note_kinks(kinks);
	}
	add_derivative_bound(rep, phi, sch);
}

DegreeOptions degree_options(std::uint64_t seed, int grid)
{
	DegreeOptions o;
	o.seed = seed;
	o.grid_density = grid;
	return o;
}

void cmd_degree(Report& rep, const CommonArgs& c, const std::string& window, const std::string& target,
	std::uint64_t seed, int grid)
{
	const SmoothMap phi = map_input(rep, c.map);
	const BallSpec ball = parse_ball(window, phi.domain());
	const GroupPoint y = parse_point(target, phi.codomain().dim());
	rep.parameters["window"] = {{"shape", to_string(ball.shape)}, {"R", ball.radius}};
	rep.parameters["target"] = y;
	rep.parameters["grid"] = grid;
	const auto d = local_degree(phi, ball, y, degree_options(seed, grid));
	rep.results = degree_json(d);
	if (!d.stable)
		rep.warnings.push_back("a denser starting grid changed the preimage count");
	if (d.retries > 0)
		rep.warnings.push_back("target was perturbed " + std::to_string(d.retries) + " time(s) to reach a regular value");
}

void cmd_area(Report& rep, const CommonArgs& c, const Sampling& s, const std::string& window, int grid)
{
	const SmoothMap phi = map_input(rep, c.map);
	Schedule sch = resolve(s);
	const BallSpec ball = parse_ball(window, phi.domain());
	rep.parameters["window"] = {{"shape", to_string(ball.shape)}, {"R", ball.radius}};
	rep.parameters["samples"] = sch.options.samples;
	rep.parameters["threads"] = sch.options.threads;
	rep.parameters["grid"] = grid;
	const auto a = area_formula_check(phi, ball, sch.options, degree_options(s.seed, grid));
	rep.results = {{"window_volume", a.window_volume}, {"signed_lhs", a.signed_lhs},
		{"signed_lhs_stderr", a.signed_lhs_stderr}, {"unsigned_lhs", a.unsigned_lhs},
		{"unsigned_lhs_stderr", a.unsigned_lhs_stderr}, {"rhs", a.rhs}, {"rhs_stderr", a.rhs_stderr},
		{"residual", a.residual}, {"combined_stderr", a.combined_stderr}, {"image_low", a.image_low},
		{"image_high", a.image_high}, {"samples", a.samples}, {"skipped_targets", a.skipped_targets}};
	if (a.skipped_targets > 0)
		rep.warnings.push_back(std::to_string(a.skipped_targets) + " sampled targets were skipped");
}

void cmd_asymdeg(Report& rep, const CommonArgs& c, const Sampling& s, const std::string& form_text)
{
	const SmoothMap phi = map_input(rep, c.map);
	const Schedule sch = resolve(s);
	echo_sampling(rep, sch);
	std::optional<KForm> omega;
	if (!form_text.empty()) {
		omega = parse_form(form_text, phi.codomain().algebra());
		rep.parameters["form"] = form_text;
	}
	const auto t = asymptotic_degree(phi, sch.radii, sch.options, omega);
	rep.results = {{"radii", t.radii}, {"tau", t.tau}, {"tau_stderr", t.tau_stderr},
		{"ball_volumes", t.ball_volumes}, {"ratio", t.ratio}, {"ratio_stderr", t.ratio_stderr},
		{"distortion_min", t.distortion_min}, {"distortion_max", t.distortion_max}, {"verdict", t.verdict}};
	rep.warnings.push_back("distance distortion is sampled over random pairs and proves nothing about quasi-isometry");
	rep.note_kinks(t.kink_hits);
}

void cmd_induced(Report& rep, const CommonArgs& c, const Sampling& s)
{
	const SmoothMap phi = map_input(rep, c.map);
	const Schedule sch = resolve(s);
	echo_sampling(rep, sch);
	const auto h = induced_cohomology_map(phi, sch.radii, sch.options);
	Json blocks = Json::array(), mult = Json::array();
	for (const auto& b : h.blocks)
		blocks.push_back({{"degree", b.degree}, {"matrix", b.matrix}, {"stderrs", b.stderrs},
			{"chain_residuals", b.chain_residuals}, {"chain_threshold", b.chain_threshold},
			{"non_closed", b.non_closed}});
	for (const auto& m : h.mult)
		mult.push_back({{"k", m.k}, {"i", m.i}, {"l", m.l}, {"j", m.j}, {"residuals", m.residuals},
			{"threshold", m.threshold}});
	rep.results = {{"radii", h.radii}, {"homomorphism_detected", h.homomorphism_detected},
		{"exact_deviation", h.exact_deviation}, {"blocks", blocks}, {"multiplicativity", mult},
		{"chain_ok", h.chain_ok}, {"mult_ok", h.mult_ok}};
	for (const auto& w : h.warnings)
		rep.warnings.push_back(w);
	add_derivative_bound(rep, phi, sch);
	rep.note_kinks(h.kink_hits);
}

void cmd_norm(Report& rep, const CommonArgs& c, const Sampling& s, const std::string& obs_text)
{
	const SmoothMap phi = map_input(rep, c.map);
	const Schedule sch = resolve(s);
	echo_sampling(rep, sch);
	const auto gamma = parse_observable(obs_text, phi.domain().dim(), phi.codomain().dim());
	rep.parameters["observable"] = obs_text;
	const auto n = amenable_norm(phi, gamma, sch.radii, sch.options);
	rep.results = {{"radii", n.radii}, {"values", n.values}, {"stderrs", n.stderrs}};
	rep.note_kinks(n.kink_hits);
}

std::string joined(const std::vector<std::string>& args)
{
	std::string out = "nilcohom";
	for (const auto& a : args) {
		out += ' ';
		const bool quote = a.empty() || a.find_first_of(" \t\"'") != std::string::npos;
		out += quote ? "'" + a + "'" : a;
	}
	return out;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
	CLI::App app{"Cohomology of nilpotent Lie algebras and amenable averages of pullbacks", "nilcohom"};
	app.require_subcommand(1);
	app.set_version_flag("--version", "nilcohom 0.1.0");

	CommonArgs common;
	Sampling sampling;
	std::string algebra_a, algebra_b, observables, basepoints, window, target, form;
	std::vector<std::string> forms;
	double tol = kDefaultTolerance;
	int grid = 8;
	std::function<void(Report&)> action;
	std::uint64_t report_seed = 0;
	bool randomized = false;

	auto with_out = [&](CLI::App* sub) {
		sub->add_option("--out", common.out, "Write the report to this file instead of stdout");
		return sub;
	};
	auto with_map = [&](CLI::App* sub) {
		sub->add_option("--map", common.map, "Map file")->required();
		return sub;
	};

	auto* coh = with_out(app.add_subcommand("cohomology", "Betti numbers, representatives and cup table"));
	coh->add_option("algebra", algebra_a, "Algebra file or builtin (abelian:N, heisenberg:M, filiform:N, free2:R)")
		->required();
	coh->callback([&] { action = [&](Report& r) { cmd_cohomology(r, algebra_a); }; });

	auto* cmp = with_out(app.add_subcommand("compare", "Compare two cohomology rings by their invariants"));
	cmp->add_option("a", algebra_a, "First algebra")->required();
	cmp->add_option("b", algebra_b, "Second algebra")->required();
	cmp->callback([&] { action = [&](Report& r) { cmd_compare(r, algebra_a, algebra_b); }; });

	auto* avg = with_out(with_map(app.add_subcommand("average", "Amenable averages of pulled-back forms")));
	avg->add_option("--form", forms, "Codomain form such as e1^e2 (repeatable)")->required();
	add_sampling(avg, sampling);
	avg->callback([&] {
		randomized = true;
		action = [&](Report& r) { cmd_average(r, common, sampling, forms); };
	});

	auto* orb = with_out(with_map(app.add_subcommand("orbit", "Empirical measures along the orbit and ergodicity probe")));
	orb->add_option("--observables", observables, "Comma-separated observables, e.g. d11,d12,d12sq")->required();
	orb->add_option("--basepoints", basepoints, "Points separated by ',' with coordinates separated by ':'");
	orb->add_option("--tol", tol, "Absolute stability tolerance")->check(CLI::PositiveNumber);
	add_sampling(orb, sampling);
	orb->callback([&] {
		randomized = true;
		action = [&](Report& r) { cmd_orbit(r, common, sampling, observables, basepoints, tol); };
	});

	auto* deg = with_out(with_map(app.add_subcommand("degree", "Local degree by preimage counting")));
	deg->add_option("--window", window, "Window, e.g. R=5 or shape=box,R=5")->required();
	deg->add_option("--target", target, "Target point, comma-separated coordinates")->required();
	deg->add_option("--grid", grid, "Newton starts per axis")->check(CLI::Range(1, 1024));
	deg->add_option("--seed", sampling.seed, "Seed for target perturbation (default 0)");
	deg->callback([&] {
		randomized = true;
		action = [&](Report& r) { cmd_degree(r, common, window, target, sampling.seed, grid); };
	});

	auto* area = with_out(with_map(app.add_subcommand("area", "Signed area formula check on a window")));
	area->add_option("--window", window, "Window, e.g. R=1")->required();
	area->add_option("--grid", grid, "Newton starts per axis")->check(CLI::Range(1, 1024));
	add_sampling(area, sampling);
	area->callback([&] {
		randomized = true;
		action = [&](Report& r) { cmd_area(r, common, sampling, window, grid); };
	});

	auto* asym = with_out(with_map(app.add_subcommand("asymdeg", "Asymptotic degree trace tau(R)/|B_R|")));
	asym->add_option("--form", form, "Codomain top form (default: volume form)");
	add_sampling(asym, sampling);
	asym->callback([&] {
		randomized = true;
		action = [&](Report& r) { cmd_asymdeg(r, common, sampling, form); };
	});

	auto* ind = with_out(with_map(app.add_subcommand("induced", "Induced map on cohomology and multiplicativity")));
	add_sampling(ind, sampling);
	ind->callback([&] {
		randomized = true;
		action = [&](Report& r) { cmd_induced(r, common, sampling); };
	});

	auto* nrm = with_out(with_map(app.add_subcommand("norm", "Amenable norm of an observable along the orbit")));
	nrm->add_option("--observable", observables, "One observable")->required();
	add_sampling(nrm, sampling);
	nrm->callback([&] {
		randomized = true;
		action = [&](Report& r) { cmd_norm(r, common, sampling, observables); };
	});

	try {
		std::vector<std::string> reversed(args.rbegin(), args.rend());
		app.parse(reversed);
	} catch (const CLI::CallForHelp& e) {
		out << app.help();
		return kExitOk;
	} catch (const CLI::CallForAllHelp& e) {
		out << app.help("", CLI::AppFormatMode::All);
		return kExitOk;
	} catch (const CLI::CallForVersion& e) {
		out << e.what() << "\n";
		return kExitOk;
	} catch (const CLI::ParseError& e) {
		if (!args.empty() && !args.front().empty() && args.front().front() != '-' && app.get_subcommands().empty())
			err << "nilcohom: unknown subcommand '" << args.front() << "'\n";
		else
			err << "nilcohom: " << e.what() << "\n";
		if (!app.get_subcommands().empty())
			err << "run 'nilcohom " << app.get_subcommands().front()->get_name() << " --help' for usage\n";
		else
			err << "run 'nilcohom --help' for usage\n";
		return kExitUsage;
	}
	report_seed = sampling.seed;

	const auto start = std::chrono::steady_clock::now();
	Report rep;
	try {
		action(rep);
	} catch (const Error& e) {
		err << "nilcohom: " << e.what() << "\n";
		return kExitDomain;
	}
	const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

	Json doc;
	doc["command"] = joined(args);
	doc["inputs"] = rep.inputs;
	if (randomized)
		doc["seed"] = report_seed;
	else
		doc["seed"] = nullptr;
	doc["parameters"] = rep.parameters;
	doc["results"] = rep.results;
	doc["warnings"] = rep.warnings;
	doc["wall_time_s"] = elapsed.count();
	const std::string text = doc.dump(2) + "\n";

	if (common.out.empty()) {
		out << text;
	} else {
		std::ofstream file(common.out, std::ios::binary);
		file << text;
		if (!file) {
			err << "nilcohom: cannot write " << common.out << "\n";
			return kExitDomain;
		}
	}
	return kExitOk;
}

} // namespace nilcohom::app
