#include "nilcohom/io.hpp"

#include "nilcohom/error.hpp"
#include "nilcohom/expr.hpp"

#include "json.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace nilcohom {

namespace {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw ParseError("cannot open '" + path.string() + "'");
	std::ostringstream os;
	os << in.rdbuf();
	return os.str();
}

json parse_json(std::string_view text, const std::string& source)
{
	try {
		return json::parse(text.begin(), text.end());
	} catch (const json::parse_error& e) {
		std::size_t line = 1, column = 1;
		const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
		for (std::size_t i = 0; i < upto; ++i) {
			if (text[i] == '\n') {
				++line;
				column = 1;
			} else {
				++column;
			}
		}
		throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON (" +
				e.what() + ")",
			line, column);
	}
}

int parse_count(std::string_view digits, std::string_view whole)
{
	int value = 0;
	auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
	if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || value < 1)
		throw ParseError("malformed built-in algebra name '" + std::string(whole) + "'");
	return value;
}

LieAlgebra algebra_from_json(const json& doc, const std::string& source)
{
	auto fail = [&](const std::string& what) -> ParseError { return ParseError(source + ": " + what); };
	if (!doc.is_object())
		throw fail("algebra record must be a JSON object");
	if (!doc.contains("dim") || !doc["dim"].is_number_integer())
		throw fail("field 'dim' must be an integer");
	const long long dim = doc["dim"].get<long long>();
	if (dim < 1 || dim > kMaxAlgebraDim)
		throw fail("dimension " + std::to_string(dim) + " outside 1.." + std::to_string(kMaxAlgebraDim));
	const int n = static_cast<int>(dim);

	std::vector<std::string> names;
	if (doc.contains("basis")) {
		if (!doc["basis"].is_array())
			throw fail("field 'basis' must be a list of names");
		for (const auto& b : doc["basis"]) {
			if (!b.is_string())
				throw fail("basis names must be strings");
			names.push_back(b.get<std::string>());
		}
		if (static_cast<int>(names.size()) != n)
			throw fail("basis lists " + std::to_string(names.size()) + " names for dimension " + std::to_string(n));
	}

	std::vector<BracketEntry> entries;
	if (doc.contains("brackets")) {
		const auto& list = doc["brackets"];
		if (!list.is_array())
			throw fail("field 'brackets' must be a list");
		std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
		for (std::size_t e = 0; e < list.size(); ++e) {
			const auto& item = list[e];
			const std::string label = "bracket entry " + std::to_string(e + 1) + " " + item.dump();
			if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() || !item[1].is_number_integer() ||
				!item[2].is_array())
				throw fail(label + ": expected [i, j, [[k, \"p/q\"], ...]]");
			const long long i = item[0].get<long long>();
			const long long j = item[1].get<long long>();
			if (i < 1 || i > n || j < 1 || j > n)
				throw fail(label + ": index out of range 1.." + std::to_string(n));
			if (i >= j)
				throw fail(label + ": indices must satisfy i < j");
			auto flag = seen[static_cast<std::size_t>(i - 1) * n + (j - 1)];
			if (flag)
				throw fail(label + ": duplicate pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
			flag = true;
			BracketEntry entry{static_cast<int>(i - 1), static_cast<int>(j - 1), {}};
			for (const auto& term : item[2]) {
				if (!term.is_array() || term.size() != 2 || !term[0].is_number_integer())
					throw fail(label + ": terms must look like [k, \"p/q\"]");
				const long long k = term[0].get<long long>();
				if (k < 1 || k > n)
					throw fail(label + ": result index " + std::to_string(k) + " out of range 1.." + std::to_string(n));
				Rational c;
				if (term[1].is_string()) {
					try {
						c = parse_rational(term[1].get<std::string>());
					} catch (const ParseError& err) {
						throw fail(label + ": " + err.what());
					}
				} else if (term[1].is_number_integer()) {
					c = Rational(term[1].get<long>());
				} else {
					throw fail(label + ": coefficients must be rational strings such as \"1/2\"");
				}
				entry.terms.emplace_back(static_cast<int>(k - 1), c);
			}
			entries.push_back(std::move(entry));
		}
	}
	return validate_algebra(n, std::move(entries), std::move(names));
}

struct Resolved {
	LieAlgebra algebra;
	std::string ref;
	std::optional<std::filesystem::path> file;
};

Resolved resolve_algebra(const json& ref, const std::filesystem::path& base_dir, const std::string& field,
	const std::string& source)
{
	if (ref.is_object())
		return {algebra_from_json(ref, source + " (inline " + field + ")"), "inline", std::nullopt};
	if (!ref.is_string())
		throw ParseError(source + ": field '" + field + "' must be a built-in name, a file path or an algebra record");
	const std::string name = ref.get<std::string>();
	if (is_builtin_algebra(name))
		return {builtin_algebra(name), name, std::nullopt};
	std::filesystem::path path = name;
	if (path.is_relative())
		path = base_dir / path;
	return {load_algebra(path), name, path};
}

std::string trim(std::string_view s)
{
	std::size_t a = 0, b = s.size();
	while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
		++a;
	while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
		--b;
	return std::string(s.substr(a, b - a));
}

double parse_constant(std::string_view text)
{
	static const SymbolTable kNoSymbols;
	try {
		auto e = parse_expression(text, kNoSymbols);
		return Program(*e).evaluate<double>(std::span<const double>{});
	} catch (const SyntaxError& err) {
		throw ParseError("malformed number '" + std::string(text) + "': " + err.what());
	} catch (const UnknownSymbol& err) {
		throw ParseError("malformed number '" + std::string(text) + "': " + err.what());
	}
}

template <class Scalar>
std::string format_form(const BasicForm<Scalar>& f, const LieAlgebra& alg)
{
	if (f.is_zero())
		return "0";
	std::ostringstream os;
	os.precision(17);
	bool first = true;
	for (const auto& [mask, c] : f.terms()) {
		std::string coeff;
		bool negative;
		if constexpr (std::is_same_v<Scalar, Rational>) {
			negative = sgn(c) < 0;
			coeff = to_string(Rational(abs(c)));
		} else {
			negative = c < 0;
			std::ostringstream cs;
			cs.precision(17);
			cs << std::abs(c);
			coeff = cs.str();
		}
		if (first)
			os << (negative ? "-" : "");
		else
			os << (negative ? " - " : " + ");
		first = false;
		const auto idx = mask_indices(mask);
		if (idx.empty()) {
			os << coeff;
			continue;
		}
		if (coeff != "1")
			os << coeff << '*';
		for (std::size_t t = 0; t < idx.size(); ++t)
			os << (t ? "^" : "") << alg.basis_names()[idx[t]];
	}
	return os.str();
}

} // namespace

LieAlgebra parse_algebra(std::string_view text, const std::string& source)
{
	return algebra_from_json(parse_json(text, source), source);
}

LieAlgebra load_algebra(const std::filesystem::path& path)
{
	return parse_algebra(read_file(path), path.string());
}

std::string algebra_to_json(const LieAlgebra& alg)
{
	nlohmann::ordered_json doc;
	doc["dim"] = alg.dim();
	doc["basis"] = alg.basis_names();
	auto brackets = nlohmann::ordered_json::array();
	for (const auto& e : alg.brackets()) {
		auto terms = nlohmann::ordered_json::array();
		for (const auto& [k, c] : e.terms)
			terms.push_back({k + 1, to_string(c)});
		brackets.push_back({e.i + 1, e.j + 1, terms});
	}
	doc["brackets"] = brackets;
	return doc.dump(2);
}

bool is_builtin_algebra(std::string_view name)
{
	for (std::string_view prefix : {"abelian:", "heisenberg:", "filiform:", "free2:"})
		if (name.substr(0, prefix.size()) == prefix)
			return true;
	return false;
}

LieAlgebra builtin_algebra(std::string_view name)
{
	const auto colon = name.find(':');
	const std::string_view kind = name.substr(0, colon);
	const int k = parse_count(colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1), name);
	if (kind == "abelian")
		return algebras::abelian(k);
	if (kind == "heisenberg")
		return algebras::heisenberg(k);
	if (kind == "filiform")
		return algebras::filiform(k);
	if (kind == "free2")
		return algebras::free_nilpotent_class2(k);
	throw ParseError("unknown built-in algebra '" + std::string(name) + "'");
}

LoadedMap parse_map(std::string_view text, const std::filesystem::path& base_dir, const std::string& source)
{
	const json doc = parse_json(text, source);
	if (!doc.is_object())
		throw ParseError(source + ": map record must be a JSON object");
	for (const char* field : {"domain", "codomain", "components"})
		if (!doc.contains(field))
			throw ParseError(source + ": missing field '" + field + "'");
	Resolved domain = resolve_algebra(doc["domain"], base_dir, "domain", source);
	Resolved codomain = resolve_algebra(doc["codomain"], base_dir, "codomain", source);
	if (!doc["components"].is_array())
		throw ParseError(source + ": field 'components' must be a list of expressions");
	std::vector<std::string> components;
	for (const auto& c : doc["components"]) {
		if (!c.is_string())
			throw ParseError(source + ": map components must be strings");
		components.push_back(c.get<std::string>());
	}
	auto g = std::make_shared<const Group>(std::move(domain.algebra));
	auto h = std::make_shared<const Group>(std::move(codomain.algebra));
	LoadedMap out{SmoothMap(g, h, components), domain.ref, codomain.ref, {}};
	if (domain.file)
		out.referenced_files.push_back(*domain.file);
	if (codomain.file)
		out.referenced_files.push_back(*codomain.file);
	return out;
}

LoadedMap load_map(const std::filesystem::path& path)
{
	return parse_map(read_file(path), path.parent_path(), path.string());
}

KForm parse_form(std::string_view text, const LieAlgebra& alg)
{
	const int n = alg.dim();
	// Split on top-level + and - (a sign right after '/' or at the start
	// belongs to the next term).
	std::vector<std::pair<int, std::string>> terms;
	int sign = 1;
	std::string current;
	bool have_content = false;
	for (char c : text) {
		if ((c == '+' || c == '-') && have_content) {
			terms.emplace_back(sign, trim(current));
			current.clear();
			have_content = false;
			sign = c == '-' ? -1 : 1;
			continue;
		}
		if ((c == '+' || c == '-') && !have_content) {
			if (c == '-')
				sign = -sign;
			continue;
		}
		if (!std::isspace(static_cast<unsigned char>(c)))
			have_content = true;
		current += c;
	}
	if (have_content)
		terms.emplace_back(sign, trim(current));
	if (terms.empty())
		throw ParseError("empty form expression");

	std::optional<KForm> out;
	for (const auto& [s, term] : terms) {
		Rational coeff = s;
		std::string_view body = term;
		const auto star = body.find('*');
		std::string_view wedge_part;
		if (star != std::string_view::npos) {
			coeff *= parse_rational(trim(body.substr(0, star)));
			wedge_part = body.substr(star + 1);
		} else if (!body.empty() && (std::isdigit(static_cast<unsigned char>(body[0])) || body[0] == '.')) {
			coeff *= parse_rational(body);
		} else {
			wedge_part = body;
		}
		std::vector<int> indices;
		if (!wedge_part.empty() || star != std::string_view::npos) {
			std::size_t start = 0;
			while (true) {
				const auto caret = wedge_part.find('^', start);
				const std::string name = trim(wedge_part.substr(start, caret == std::string_view::npos ? caret : caret - start));
				int found = -1;
				for (int i = 0; i < n; ++i)
					if (alg.basis_names()[i] == name)
						found = i;
				if (found < 0)
					throw ParseError("unknown basis covector '" + name + "' in form '" + std::string(text) + "'");
				indices.push_back(found);
				if (caret == std::string_view::npos)
					break;
				start = caret + 1;
			}
		}
		KForm piece = KForm::basis(n, indices, coeff);
		if (!out)
			out = KForm(n, static_cast<int>(indices.size()));
		if (out->degree() != static_cast<int>(indices.size()))
			throw ParseError("form '" + std::string(text) + "' mixes degrees " + std::to_string(out->degree()) +
				" and " + std::to_string(indices.size()));
		*out += piece;
	}
	return *out;
}

std::string form_to_string(const KForm& f, const LieAlgebra& alg) { return format_form(f, alg); }
std::string form_to_string(const RealForm& f, const LieAlgebra& alg) { return format_form(f, alg); }

BallSpec parse_ball(std::string_view text, const Group& group)
{
	BallShape shape = BallShape::Box;
	std::optional<double> radius;
	std::size_t start = 0;
	while (start <= text.size()) {
		const auto comma = text.find(',', start);
		const std::string item = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
		if (!item.empty()) {
			const auto eq = item.find('=');
			if (eq == std::string::npos)
				throw ParseError("ball spec item '" + item + "' must look like key=value");
			const std::string key = trim(std::string_view(item).substr(0, eq));
			const std::string value = trim(std::string_view(item).substr(eq + 1));
			if (key == "shape")
				shape = parse_ball_shape(value);
			else if (key == "R" || key == "r" || key == "radius")
				radius = parse_constant(value);
			else
				throw ParseError("unknown ball spec key '" + key + "' (expected shape or R)");
		}
		if (comma == std::string_view::npos)
			break;
		start = comma + 1;
	}
	if (!radius)
		throw ParseError("ball spec needs R=<radius>");
	if (!(*radius > 0.0))
		throw ParseError("ball radius must be positive");
	return make_ball(group, *radius, shape);
}

GroupPoint parse_point(std::string_view text, int dim)
{
	GroupPoint out;
	std::size_t start = 0;
	while (true) {
		const auto comma = text.find(',', start);
		out.push_back(parse_constant(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start))));
		if (comma == std::string_view::npos)
			break;
		start = comma + 1;
	}
	if (static_cast<int>(out.size()) != dim)
		throw ParseError("point '" + std::string(text) + "' has " + std::to_string(out.size()) +
			" coordinates, expected " + std::to_string(dim));
	return out;
}

std::vector<GroupPoint> parse_points(std::string_view text, int dim)
{
	std::vector<GroupPoint> out;
	std::size_t start = 0;
	while (true) {
		const auto comma = text.find(',', start);
		std::string item = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
		for (auto& c : item)
			if (c == ':')
				c = ',';
		out.push_back(parse_point(item, dim));
		if (comma == std::string_view::npos)
			break;
		start = comma + 1;
	}
	return out;
}

} // namespace nilcohom
