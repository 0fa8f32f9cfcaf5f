#pragma once

#include <vector>

namespace spinlhv::stats {

// Ranks starting at 1; tied values share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values);

// Pearson correlation of the average ranks. Throws std::invalid_argument for
// sizes below 2 or mismatched lengths; returns NaN if either side is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace spinlhv::stats
