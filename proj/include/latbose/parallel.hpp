#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Worker pool helpers with reproducible reductions: work is cut into blocks
// whose boundaries depend only on the problem size, and block partials are
// combined by a fixed pairwise tree, so results are bit-identical for any
// worker count.
namespace latbose::parallel {

/// Set the number of workers; 0 selects the hardware concurrency.
void set_threads(unsigned n);
unsigned threads();

/// Calls fn(begin, end) for consecutive blocks of [0, n).
void for_blocks(std::size_t n, std::size_t block,
                const std::function<void(std::size_t, std::size_t)>& fn);

/// Pairwise (tree) summation in index order.
double pairwise_sum(std::span<const double> values);

/// Sum over [0, n): block_sum(begin, end) returns the sequential partial of
/// one block; partials are merged with pairwise_sum.
double reduce_blocks(std::size_t n, std::size_t block,
                     const std::function<double(std::size_t, std::size_t)>& block_sum);

}  // namespace latbose::parallel
