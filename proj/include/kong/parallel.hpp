#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace kong {

/// Worker bound: KONG_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
std::size_t worker_count();

/// Splits [0, rows) into contiguous ranges and runs fn(begin, end) on each,
/// in parallel when there is enough work. Each range is owned by exactly one
/// worker, so fills that only write rows in their range never race.
template <class F>
void parallel_rows(std::size_t rows, std::size_t min_rows_per_worker, F&& fn)
{
    const std::size_t workers =
        std::clamp<std::size_t>(rows / std::max<std::size_t>(min_rows_per_worker, 1), 1, worker_count());
    if (workers <= 1) {
        fn(std::size_t{0}, rows);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (rows + workers - 1) / workers;
    for (std::size_t begin = 0; begin < rows; begin += chunk)
        pool.emplace_back([&fn, begin, end = std::min(rows, begin + chunk)] { fn(begin, end); });
}

} // namespace kong
