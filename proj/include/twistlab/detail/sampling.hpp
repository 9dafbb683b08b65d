#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "twistlab/core.hpp"
#include "twistlab/rng.hpp"

// Shared deterministic samplers behind the constant estimators. Trial t of
// seed s always draws from rng::trial_stream(s, t), so estimates do not
// depend on evaluation order and extending the trial count extends the
// sample set.

namespace twistlab::detail {

inline FinVec gaussian_vec(IndexSet set, rng::Stream& st) {
    std::vector<double> e(set.size());
    for (double& v : e) v = st.gaussian();
    return FinVec(set, std::move(e));
}

inline FinVec random_indicator(IndexSet set, rng::Stream& st) {
    const std::size_t n = set.size();
    std::vector<double> e(n, 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (st.bits() & 1u) {
            e[i] = 1.0;
            ++count;
        }
    if (count == 0) e[st.index(n)] = 1.0;
    return FinVec(set, std::move(e));
}

// Disjoint pair of indicators of equal cardinality, hence of equal p-norm
// for every p. These are the extremal inputs of the maps under study.
inline std::pair<FinVec, FinVec> disjoint_equal_indicators(IndexSet set, rng::Stream& st) {
    const std::size_t n = set.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    const std::size_t m = 1 + st.index(std::max<std::size_t>(n / 2, 1));
    for (std::size_t i = 0; i < std::min(2 * m, n); ++i) {
        std::size_t j = i + st.index(n - i);
        std::swap(perm[i], perm[j]);
    }
    std::vector<double> ex(n, 0.0), ey(n, 0.0);
    if (n == 1) {
        ex[perm[0]] = 1.0;  // degenerate ground set: no disjoint pair exists
        ey[perm[0]] = 1.0;
    } else {
        for (std::size_t i = 0; i < m; ++i) ex[perm[i]] = 1.0;
        for (std::size_t i = m; i < 2 * m; ++i) ey[perm[i]] = 1.0;
    }
    return {FinVec(set, std::move(ex)), FinVec(set, std::move(ey))};
}

inline std::pair<FinVec, FinVec> sample_q_pair(IndexSet set, std::uint64_t seed, std::uint64_t trial) {
    rng::Stream st = rng::trial_stream(seed, trial);
    switch (trial % 3) {
        case 0: return {gaussian_vec(set, st), gaussian_vec(set, st)};
        case 1: return {random_indicator(set, st), random_indicator(set, st)};
        default: return disjoint_equal_indicators(set, st);
    }
}

inline std::pair<FinVec, FinVec> sample_c_pair(IndexSet set, std::uint64_t seed, std::uint64_t trial) {
    rng::Stream st = rng::trial_stream(seed, trial);
    FinVec a = FinVec::zeros(set);
    switch (trial % 3) {
        case 0: {
            std::vector<double> e(set.size());
            for (double& v : e) v = st.sign();
            a = FinVec(set, std::move(e));
            break;
        }
        case 1: a = random_indicator(set, st); break;
        default: {
            std::vector<double> e(set.size());
            for (double& v : e) v = st.uniform(-1.0, 1.0);
            a = FinVec(set, std::move(e));
            break;
        }
    }
    FinVec x = (trial % 2 == 0) ? gaussian_vec(set, st) : random_indicator(set, st);
    return {std::move(a), std::move(x)};
}

inline FinVec sample_single(IndexSet set, std::uint64_t seed, std::uint64_t trial) {
    rng::Stream st = rng::trial_stream(seed, trial);
    return (trial % 2 == 0) ? gaussian_vec(set, st) : random_indicator(set, st);
}

}  // namespace twistlab::detail
