#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace mcinv {

/// Raised when a scenario or argument fails validation. The CLI maps this
/// to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an iterative solver cannot converge. The CLI maps this to
/// exit code 3.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Process-wide worker count for row-parallel loops. Results are identical
/// for any value: threads only fill disjoint slices of per-row buffers,
/// reductions always run sequentially in row order.
void set_max_threads(int threads);
int max_threads();

namespace detail {
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);
}  // namespace detail

/// Runs fn(begin, end) over a partition of [0, n) into contiguous chunks,
/// one per worker. With max_threads() == 1 this is a plain call.
template <typename Fn>
void parallel_for_rows(std::size_t n, Fn&& fn) {
  detail::parallel_chunks(n, std::function<void(std::size_t, std::size_t)>(std::forward<Fn>(fn)));
}

}  // namespace mcinv
