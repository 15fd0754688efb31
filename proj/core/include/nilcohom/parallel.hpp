#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace nilcohom {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
	void add(double x) noexcept
	{
		const double t = sum_ + x;
		if (std::abs(sum_) >= std::abs(x))
			comp_ += (sum_ - t) + x;
		else
			comp_ += (x - t) + sum_;
		sum_ = t;
	}
	double value() const noexcept { return sum_ + comp_; }

private:
	double sum_ = 0.0;
	double comp_ = 0.0;
};

/// Work is cut into fixed-size chunks independent of the thread count; each
/// chunk produces a Result, and the results come back in chunk order. Any
/// reduction done over that vector is therefore identical for every thread
/// count. The exception from the lowest failing chunk is rethrown.
template <class Result, class Fn>
std::vector<Result> map_chunks(std::size_t total, std::size_t chunk, int threads, Fn&& fn)
{
	chunk = std::max<std::size_t>(chunk, 1);
	const std::size_t chunks = (total + chunk - 1) / chunk;
	std::vector<Result> results(chunks);
	std::vector<std::exception_ptr> errors(chunks);

	auto run = [&](std::size_t c) {
		const std::size_t begin = c * chunk;
		const std::size_t end = std::min(total, begin + chunk);
		try {
			results[c] = fn(begin, end);
		} catch (...) {
			errors[c] = std::current_exception();
		}
	};

	const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), chunks);
	if (workers <= 1) {
		for (std::size_t c = 0; c < chunks; ++c)
			run(c);
	} else {
		std::vector<std::thread> pool;
		pool.reserve(workers);
		for (std::size_t w = 0; w < workers; ++w)
			pool.emplace_back([&, w] {
				for (std::size_t c = w; c < chunks; c += workers)
					run(c);
			});
		for (auto& t : pool)
			t.join();
	}

	for (auto& e : errors)
		if (e)
			std::rethrow_exception(e);
	return results;
}

} // namespace nilcohom
