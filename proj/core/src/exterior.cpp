#include "nilcohom/exterior.hpp"

namespace nilcohom {

std::vector<int> mask_indices(WedgeMask m)
{
	std::vector<int> out;
	for (; m != 0; m &= m - 1)
		out.push_back(std::countr_zero(m));
	return out;
}

WedgeMask mask_of(std::span<const int> indices)
{
	WedgeMask m = 0;
	for (int i : indices)
		m |= WedgeMask(1) << i;
	return m;
}

std::vector<WedgeMask> wedge_basis(int n, int k)
{
	std::vector<WedgeMask> out;
	if (k < 0 || k > n)
		return out;
	std::vector<int> idx(k);
	for (int i = 0; i < k; ++i)
		idx[i] = i;
	while (true) {
		out.push_back(mask_of(idx));
		int pos = k - 1;
		while (pos >= 0 && idx[pos] == n - k + pos)
			--pos;
		if (pos < 0)
			break;
		++idx[pos];
		for (int i = pos + 1; i < k; ++i)
			idx[i] = idx[i - 1] + 1;
	}
	return out;
}

} // namespace nilcohom
