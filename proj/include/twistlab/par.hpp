#pragma once

#include <atomic>
#include <cstddef>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace twistlab::par {

namespace detail {
inline std::atomic<bool>& enabled_flag() {
    static std::atomic<bool> flag{true};
    return flag;
}
}  // namespace detail

inline bool enabled() { return detail::enabled_flag().load(std::memory_order_relaxed); }
inline void set_enabled(bool on) { detail::enabled_flag().store(on, std::memory_order_relaxed); }

inline int thread_count() {
#ifdef _OPENMP
    return enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

// Serial reference loop. The parallel kernels below must produce exactly the
// same result as these on the same inputs; tests compare them bit for bit.
template <class F>
void for_each_serial(std::size_t n, F&& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
}

// f(i) for i in [0, n). Distinct iterations must write to disjoint locations
// and must not throw.
template <class F>
void for_each(std::size_t n, F&& f) {
#ifdef _OPENMP
    if (enabled() && n > 1) {
        const long long m = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < m; ++i) f(static_cast<std::size_t>(i));
        return;
    }
#endif
    for_each_serial(n, f);
}

struct MaxLoc {
    double value = -std::numeric_limits<double>::infinity();
    std::size_t index = std::numeric_limits<std::size_t>::max();
};

namespace detail {
inline bool better(double v, std::size_t i, const MaxLoc& cur) {
    return v > cur.value || (v == cur.value && i < cur.index);
}
}  // namespace detail

template <class F>
MaxLoc max_reduce_serial(std::size_t n, F&& f) {
    MaxLoc best;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f(i);
        if (detail::better(v, i, best)) best = MaxLoc{v, i};
    }
    return best;
}

// Maximum of f(i) over [0, n) with the argmax. Ties resolve toward the
// smaller index, so the result is independent of schedule and thread count.
template <class F>
MaxLoc max_reduce(std::size_t n, F&& f) {
#ifdef _OPENMP
    if (enabled() && n > 1) {
        MaxLoc best;
        const long long m = static_cast<long long>(n);
#pragma omp parallel
        {
            MaxLoc local;
#pragma omp for schedule(static) nowait
            for (long long i = 0; i < m; ++i) {
                const double v = f(static_cast<std::size_t>(i));
                if (detail::better(v, static_cast<std::size_t>(i), local))
                    local = MaxLoc{v, static_cast<std::size_t>(i)};
            }
#pragma omp critical(twistlab_max_reduce)
            {
                if (local.index != std::numeric_limits<std::size_t>::max() &&
                    detail::better(local.value, local.index, best))
                    best = local;
            }
        }
        return best;
    }
#endif
    return max_reduce_serial(n, f);
}

}  // namespace twistlab::par
