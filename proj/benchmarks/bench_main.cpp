#include "nilcohom/cohomology.hpp"
#include "nilcohom/degree.hpp"
#include "nilcohom/ergodic.hpp"
#include "nilcohom/group.hpp"
#include "nilcohom/pullback.hpp"
#include "nilcohom/smooth_map.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <numbers>

using namespace nilcohom;

namespace {

GroupPtr group(LieAlgebra alg) { return std::make_shared<const Group>(std::move(alg)); }

SamplingOptions sampling(std::size_t samples, int threads)
{
	SamplingOptions o;
	o.samples = samples;
	o.seed = 1;
	o.threads = threads;
	return o;
}

} // namespace

static void BM_GroupMultiply(benchmark::State& state)
{
	const Group g(algebras::filiform(static_cast<int>(state.range(0))));
	GroupPoint a(static_cast<std::size_t>(g.dim())), b(a.size());
	for (std::size_t i = 0; i < a.size(); ++i) {
		a[i] = 0.3 + 0.1 * static_cast<double>(i);
		b[i] = -0.7 + 0.05 * static_cast<double>(i);
	}
	for (auto _ : state)
		benchmark::DoNotOptimize(g.multiply(a, b));
}
BENCHMARK(BM_GroupMultiply)->Arg(3)->Arg(5)->Arg(8);

static void BM_Cohomology(benchmark::State& state)
{
	const LieAlgebra alg = state.range(0) == 0 ? algebras::heisenberg(2) : algebras::free_nilpotent_class2(3);
	for (auto _ : state)
		benchmark::DoNotOptimize(cohomology(alg).betti());
}
BENCHMARK(BM_Cohomology)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_FormAverage(benchmark::State& state)
{
	SmoothMap f1(group(algebras::abelian(1)), group(algebras::abelian(2)), {"x1", "sin(x1)"});
	const std::vector<KForm> forms{KForm::basis(2, std::vector<int>{1})};
	const auto radii = geometric_schedule(4 * std::numbers::pi, 2, 3);
	const auto opts = sampling(100000, static_cast<int>(state.range(0)));
	for (auto _ : state)
		benchmark::DoNotOptimize(amenable_averages(f1, forms, radii, opts));
	state.SetItemsProcessed(state.iterations() * 3 * 100000);
}
BENCHMARK(BM_FormAverage)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_HeisenbergOrbit(benchmark::State& state)
{
	auto h = group(algebras::heisenberg(1));
	SmoothMap phi(h, h, {"x1 + sin(x2)", "x2", "x3 + x1*cos(x2)"});
	const auto obs = parse_observables("d11,d12,d33sq", 3, 3);
	const auto opts = sampling(50000, 1);
	for (auto _ : state)
		benchmark::DoNotOptimize(empirical_measure(phi, obs, 4.0, opts));
	state.SetItemsProcessed(state.iterations() * 50000);
}
BENCHMARK(BM_HeisenbergOrbit)->Unit(benchmark::kMillisecond);

static void BM_LocalDegree(benchmark::State& state)
{
	auto plane = group(algebras::abelian(2));
	SmoothMap square(plane, plane, {"x1^2 - x2^2", "2*x1*x2"});
	const BallSpec window = make_ball(*plane, 1.0);
	for (auto _ : state)
		benchmark::DoNotOptimize(local_degree(square, window, GroupPoint{0.1, 0.05}).value);
}
BENCHMARK(BM_LocalDegree)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
