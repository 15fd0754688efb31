#pragma once

#include "nilcohom/exterior.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/lie_algebra.hpp"
#include "nilcohom/smooth_map.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nilcohom {

/// Algebra files are JSON records
///   {"dim": 3, "basis": ["e1","e2","e3"], "brackets": [[1, 2, [[3, "1"]]]]}
/// with 1-based indices, i < j, and rational coefficients as strings.
/// Syntax errors carry line and column; structural errors name the
/// offending bracket entry.
LieAlgebra parse_algebra(std::string_view text, const std::string& source = "<input>");
LieAlgebra load_algebra(const std::filesystem::path& path);

/// Serializes in the file format above (stable key order).
std::string algebra_to_json(const LieAlgebra& alg);

/// Built-in algebra names: abelian:N, heisenberg:M, filiform:N, free2:R.
bool is_builtin_algebra(std::string_view name);
LieAlgebra builtin_algebra(std::string_view name);

/// Map files are JSON records
///   {"domain": <ref>, "codomain": <ref>, "components": ["x1", "sin(x1)"]}
/// where a reference is a built-in name, a path relative to the map file,
/// or an inline algebra record.
struct LoadedMap {
	SmoothMap map;
	std::string domain_ref;
	std::string codomain_ref;
	std::vector<std::filesystem::path> referenced_files;
};

LoadedMap parse_map(std::string_view text, const std::filesystem::path& base_dir, const std::string& source = "<input>");
LoadedMap load_map(const std::filesystem::path& path);

/// Forms over the basis names with '^' for wedge, e.g. "2*e1^e3 - 1/2*e2^e3"
/// or "1" for the unit 0-form.
KForm parse_form(std::string_view text, const LieAlgebra& alg);
std::string form_to_string(const KForm& f, const LieAlgebra& alg);
std::string form_to_string(const RealForm& f, const LieAlgebra& alg);

/// "shape=box,R=2.5" (shape optional, defaults to box).
BallSpec parse_ball(std::string_view text, const Group& group);

/// Comma-separated coordinates; each may be a constant expression such as
/// "pi/2" or "-10".
GroupPoint parse_point(std::string_view text, int dim);

/// Comma-separated points whose coordinates are separated by ':'.
std::vector<GroupPoint> parse_points(std::string_view text, int dim);

} // namespace nilcohom
