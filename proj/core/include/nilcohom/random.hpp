#pragma once

#include <cstdint>

namespace nilcohom {

/// Stateless counter-based generator. Every draw is a pure function of
/// (seed, stream, index, lane), so any partition of the work across
/// threads reproduces the same numbers.
class CounterRng {
public:
	CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(mix(seed) ^ (stream + 0x632be59bd9b4e019ULL))) {}

	std::uint64_t bits(std::uint64_t index, std::uint64_t lane) const noexcept
	{
		return mix(key_ ^ mix(index ^ mix(lane + 0xd1b54a32d192ed03ULL)));
	}

	/// Uniform double in [0, 1) with 53 random bits.
	double uniform(std::uint64_t index, std::uint64_t lane) const noexcept
	{
		return static_cast<double>(bits(index, lane) >> 11) * 0x1.0p-53;
	}

	/// Uniform double in [lo, hi).
	double uniform(std::uint64_t index, std::uint64_t lane, double lo, double hi) const noexcept
	{
		return lo + (hi - lo) * uniform(index, lane);
	}

	static constexpr std::uint64_t mix(std::uint64_t z) noexcept
	{
		z += 0x9e3779b97f4a7c15ULL;
		z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
		z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
		return z ^ (z >> 31);
	}

private:
	std::uint64_t key_;
};

} // namespace nilcohom
