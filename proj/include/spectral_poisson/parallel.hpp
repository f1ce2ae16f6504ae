#pragma once

#include <chrono>
#include <functional>

namespace spoisson {

// requested > 0 wins; otherwise SPECTRAL_POISSON_THREADS; otherwise 1.
int resolve_thread_count(int requested = 0);

// Runs fn(0..count-1) on up to `threads` workers. Each index must write disjoint
// output, so results do not depend on the schedule. Rethrows the exception of the
// lowest failing index.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace spoisson
