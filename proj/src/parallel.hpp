#ifndef CONFCURV_SRC_PARALLEL_HPP
#define CONFCURV_SRC_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace confcurv::detail {

/// Runs body(i) for i in [0, count) on up to `jobs` threads, striding by job.
/// If any call throws, the exception from the smallest index is rethrown.
template <typename Body>
void parallel_for(std::size_t count, int jobs, const Body& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_index(workers, count);
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < count; i += workers) {
      try {
        body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        error_index[w] = i;
        return;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (std::thread& t : threads) t.join();
  }
  std::size_t first = count;
  std::exception_ptr err;
  for (std::size_t w = 0; w < workers; ++w)
    if (errors[w] && error_index[w] < first) {
      first = error_index[w];
      err = errors[w];
    }
  if (err) std::rethrow_exception(err);
}

}  // namespace confcurv::detail

#endif  // CONFCURV_SRC_PARALLEL_HPP
