#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>

namespace netval {

// Paths are processed in fixed-size blocks. Each block accumulates its own
// partial sums sequentially in path order, blocks may be handed to any
// thread, and the partials are combined in block order afterwards. The
// summation tree is therefore a function of n_paths alone and every result
// is bitwise independent of the thread count and schedule.
inline constexpr std::size_t kMcBlock = 8192;

inline std::size_t mc_block_count(std::size_t n_paths) {
    return (n_paths + kMcBlock - 1) / kMcBlock;
}

// Collects the first exception thrown inside a parallel block loop; OpenMP
// regions must not leak exceptions.
class McErrorCollector {
public:
    template <class Fn>
    void run(Fn&& fn) {
        if (failed_.load(std::memory_order_relaxed)) return;
        try {
            fn();
        } catch (...) {
            const std::lock_guard<std::mutex> lock(mutex_);
            if (!error_) error_ = std::current_exception();
            failed_.store(true, std::memory_order_relaxed);
        }
    }

    void rethrow_if_failed() const {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
    std::atomic<bool> failed_{false};
};

template <class Fn>
void for_each_mc_block(std::size_t n_paths, Fn&& fn) {
    const long nb = static_cast<long>(mc_block_count(n_paths));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long b = 0; b < nb; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kMcBlock;
        const std::size_t end = std::min(n_paths, begin + kMcBlock);
        fn(static_cast<std::size_t>(b), begin, end);
    }
}

// Standard error of the mean from (sum, sum of squares, count).
inline double se_of_mean(double sum, double sumsq, std::size_t n) {
    if (n < 2) return 0.0;
    const double mean = sum / double(n);
    const double var = std::max(0.0, (sumsq - double(n) * mean * mean) / double(n - 1));
    return std::sqrt(var / double(n));
}

}  // namespace netval
