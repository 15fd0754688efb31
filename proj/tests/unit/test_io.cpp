#include "nilcohom/cohomology.hpp"
#include "nilcohom/error.hpp"
#include "nilcohom/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>

using namespace nilcohom;

namespace {

const std::filesystem::path kData = NILCOHOM_DATA_DIR;

std::string parse_error(const std::string& text)
{
	try {
		parse_algebra(text, "test.json");
	} catch (const ParseError& err) {
		return err.what();
	}
	return "";
}

} // namespace

TEST(AlgebraFiles, CorpusLoadsAndMatchesBuiltins)
{
	EXPECT_EQ(load_algebra(kData / "algebras/h3.json"), algebras::heisenberg(1));
	EXPECT_EQ(load_algebra(kData / "algebras/h5.json").lower_central_series(), algebras::heisenberg(2).lower_central_series());
	EXPECT_EQ(load_algebra(kData / "algebras/filiform4.json"), algebras::filiform(4));
	EXPECT_EQ(load_algebra(kData / "algebras/abelian4.json"), algebras::abelian(4));
	auto free = load_algebra(kData / "algebras/free_2_3.json");
	EXPECT_EQ(cohomology(free).betti(), cohomology(algebras::free_nilpotent_class2(3)).betti());
	EXPECT_EQ(free.basis_names()[3], "e12");
}

TEST(AlgebraFiles, RoundTrip)
{
	for (const auto& alg : {algebras::heisenberg(2), algebras::filiform(5), algebras::free_nilpotent_class2(3)})
		EXPECT_EQ(parse_algebra(algebra_to_json(alg)), alg);
}

TEST(AlgebraFiles, Builtins)
{
	EXPECT_TRUE(is_builtin_algebra("heisenberg:1"));
	EXPECT_FALSE(is_builtin_algebra("h3.json"));
	EXPECT_EQ(builtin_algebra("abelian:3"), algebras::abelian(3));
	EXPECT_EQ(builtin_algebra("free2:3").dim(), 6);
	EXPECT_THROW(builtin_algebra("heisenberg:x"), ParseError);
}

TEST(AlgebraFiles, Errors)
{
	auto syntax = parse_error("{\n  \"dim\": 3,\n  \"brackets\": [[1, 2 [[3, \"1\"]]]]\n}");
	EXPECT_NE(syntax.find("test.json:3:"), std::string::npos) << syntax;

	auto range = parse_error(R"({"dim": 3, "brackets": [[1, 2, [[3, "1"]]], [1, 4, [[3, "1"]]]]})");
	EXPECT_NE(range.find("bracket entry 2"), std::string::npos) << range;
	EXPECT_NE(range.find("out of range"), std::string::npos) << range;

	EXPECT_NE(parse_error(R"({"dim": 3, "brackets": [[2, 1, [[3, "1"]]]]})").find("i < j"), std::string::npos);
	EXPECT_NE(parse_error(R"({"dim": 3, "brackets": [[1, 2, [[3, "1"]]], [1, 2, [[3, "2"]]]]})").find("duplicate"),
		std::string::npos);
	EXPECT_NE(parse_error(R"({"dim": 3, "brackets": [[1, 2, [[3, 0.5]]]]})").find("rational"), std::string::npos);
	EXPECT_NE(parse_error(R"({"brackets": []})").find("dim"), std::string::npos);
	EXPECT_THROW(parse_algebra(R"({"dim": 3, "brackets": [[1, 2, [[3, "1"]]], [1, 3, [[2, "1"]]]]})"),
		NotNilpotent);
	EXPECT_THROW(load_algebra(kData / "algebras/missing.json"), ParseError);
}

TEST(MapFiles, LoadRelativeReferences)
{
	auto loaded = load_map(kData / "maps/f1.json");
	EXPECT_EQ(loaded.map.domain().dim(), 1);
	EXPECT_EQ(loaded.map.codomain().dim(), 2);
	EXPECT_EQ(loaded.referenced_files.size(), 2u);
	auto v = loaded.map.evaluate(GroupPoint{std::numbers::pi / 2});
	EXPECT_NEAR(v[1], 1.0, 1e-15);

	auto inline_map = parse_map(R"({"domain": "heisenberg:1", "codomain": {"dim": 1, "brackets": []},
		"components": ["x3"]})", ".");
	EXPECT_EQ(inline_map.map.domain().dim(), 3);
	EXPECT_EQ(inline_map.domain_ref, "heisenberg:1");
	EXPECT_TRUE(inline_map.referenced_files.empty());

	EXPECT_THROW(parse_map(R"({"domain": "abelian:1", "components": ["x1"]})", "."), ParseError);
	EXPECT_THROW(parse_map(R"({"domain": "abelian:1", "codomain": "abelian:1", "components": ["x1 +"]})", "."),
		SyntaxError);
}

TEST(Forms, ParseAndPrint)
{
	auto h = algebras::heisenberg(1);
	auto f = parse_form("2*e1^e3 - 1/2*e2^e3", h);
	EXPECT_EQ(f.degree(), 2);
	EXPECT_EQ(f.coeff(0b101), Rational(2));
	EXPECT_EQ(f.coeff(0b110), Rational(-1, 2));
	EXPECT_EQ(parse_form(form_to_string(f, h), h), f);
	EXPECT_EQ(parse_form("e2^e1", h).coeff(0b011), Rational(-1));
	EXPECT_EQ(parse_form("1", h), KForm::unit(3));
	EXPECT_THROW(parse_form("e1 + e1^e2", h), ParseError);
	EXPECT_THROW(parse_form("e4", h), ParseError);
	EXPECT_THROW(parse_form("", h), ParseError);
}

TEST(Arguments, BallsAndPoints)
{
	Group h(algebras::heisenberg(1));
	auto b = parse_ball("shape=quasi-ball,R=2.5", h);
	EXPECT_EQ(b.shape, BallShape::QuasiBall);
	EXPECT_DOUBLE_EQ(b.radius, 2.5);
	EXPECT_EQ(parse_ball("R=3", h).shape, BallShape::Box);
	EXPECT_THROW(parse_ball("shape=box", h), ParseError);
	EXPECT_THROW(parse_ball("R=-1", h), ParseError);

	auto p = parse_point("pi/2, -1, 0.5", 3);
	EXPECT_DOUBLE_EQ(p[0], std::numbers::pi / 2);
	EXPECT_EQ(p[1], -1.0);
	EXPECT_THROW(parse_point("1,2", 3), ParseError);

	auto pts = parse_points("0,1,pi", 1);
	ASSERT_EQ(pts.size(), 3u);
	EXPECT_DOUBLE_EQ(pts[2][0], std::numbers::pi);
	auto pts2 = parse_points("0:0:0,1:0:-2", 3);
	ASSERT_EQ(pts2.size(), 2u);
	EXPECT_EQ(pts2[1], (GroupPoint{1, 0, -2}));
}
