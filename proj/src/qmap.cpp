#include "twistlab/qmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "twistlab/detail/sampling.hpp"
#include "twistlab/par.hpp"
#include "twistlab/rng.hpp"

namespace twistlab {

FinVec defect_add(const QMap& phi, const FinVec& x, const FinVec& y) {
    if (!compatible(x.index_set(), y.index_set())) throw std::domain_error("defect_add: index sets differ");
    return phi(x + y) - phi(x) - phi(y);
}

FinVec defect_mod(const QMap& phi, const FinVec& a, const FinVec& x) {
    if (!compatible(a.index_set(), x.index_set())) throw std::domain_error("defect_mod: index sets differ");
    return phi(hadamard(a, x)) - hadamard(a, phi(x));
}

using detail::sample_c_pair;
using detail::sample_q_pair;
using detail::sample_single;

ConstantEstimate estimate_Q(const QMap& phi, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("estimate_Q: trials must be >= 1");
    const IndexSet set = phi.index_set();
    auto ratio = [&](std::size_t t) {
        auto [x, y] = sample_q_pair(set, seed, t);
        const double den = pnorm(x, phi.domain_p()) + pnorm(y, phi.domain_p());
        if (den == 0.0) return -1.0;
        return pnorm(defect_add(phi, x, y), phi.codomain_p()) / den;
    };
    const par::MaxLoc best = par::max_reduce(trials, ratio);
    auto [wx, wy] = sample_q_pair(set, seed, best.index);
    return ConstantEstimate{std::max(best.value, 0.0), trials, seed, std::move(wx), std::move(wy)};
}

ConstantEstimate estimate_C(const QMap& phi, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("estimate_C: trials must be >= 1");
    const IndexSet set = phi.index_set();
    auto ratio = [&](std::size_t t) {
        auto [a, x] = sample_c_pair(set, seed, t);
        const double den = sup_norm(a) * pnorm(x, phi.domain_p());
        if (den == 0.0) return -1.0;
        return pnorm(defect_mod(phi, a, x), phi.codomain_p()) / den;
    };
    const par::MaxLoc best = par::max_reduce(trials, ratio);
    auto [wa, wx] = sample_c_pair(set, seed, best.index);
    return ConstantEstimate{std::max(best.value, 0.0), trials, seed, std::move(wa), std::move(wx)};
}

ConstantEstimate strong_equiv_dist(const QMap& phi, const QMap& psi, std::uint64_t trials,
                                   std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("strong_equiv_dist: trials must be >= 1");
    if (!compatible(phi.index_set(), psi.index_set()))
        throw std::domain_error("strong_equiv_dist: maps live on different index sets");
    const IndexSet set = phi.index_set();
    auto ratio = [&](std::size_t t) {
        const FinVec x = sample_single(set, seed, t);
        const double den = pnorm(x, phi.domain_p());
        if (den == 0.0) return -1.0;
        return pnorm(phi(x) - psi(x), phi.codomain_p()) / den;
    };
    const par::MaxLoc best = par::max_reduce(trials, ratio);
    FinVec wx = sample_single(set, seed, best.index);
    return ConstantEstimate{std::max(best.value, 0.0), trials, seed, std::move(wx), FinVec::zeros(set)};
}

namespace {

// Pairwise summation tree over a stream of vectors. When the number of
// terms is a power of two the tree is perfect, so summing 2^s copies of the
// same vector yields exactly 2^s times that vector.
class PairwiseAccumulator {
public:
    void add(std::vector<double> term) {
        levels_.emplace_back(std::move(term), 0);
        while (levels_.size() >= 2 &&
               levels_[levels_.size() - 1].second == levels_[levels_.size() - 2].second) {
            auto [top, rank] = std::move(levels_.back());
            levels_.pop_back();
            auto& dst = levels_.back();
            for (std::size_t i = 0; i < dst.first.size(); ++i) dst.first[i] += top[i];
            dst.second = rank + 1;
        }
    }

    std::vector<double> finish(std::size_t dim) {
        if (levels_.empty()) return std::vector<double>(dim, 0.0);
        while (levels_.size() >= 2) {
            auto top = std::move(levels_.back().first);
            levels_.pop_back();
            auto& dst = levels_.back().first;
            for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += top[i];
        }
        return std::move(levels_.front().first);
    }

private:
    std::vector<std::pair<std::vector<double>, int>> levels_;
};

std::uint64_t support_hash(std::span<const std::size_t> support) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i : support) {
        h ^= static_cast<std::uint64_t>(i) + 1;
        h *= 1099511628211ull;
    }
    return h;
}

class SymmetrizedMap final : public QMap {
public:
    SymmetrizedMap(std::shared_ptr<const QMap> base, std::size_t cap, std::size_t mc_samples,
                   std::uint64_t seed)
        : base_(std::move(base)), cap_(cap), mc_samples_(mc_samples), seed_(seed) {
        if (cap_ < 1) throw std::invalid_argument("symmetrize: cap must be >= 1");
        if (mc_samples_ < 1) throw std::invalid_argument("symmetrize: mc_samples must be >= 1");
    }

    FinVec operator()(const FinVec& x) const override {
        const std::vector<std::size_t> support = x.support();
        if (support.empty()) return FinVec::zeros(x.index_set());

        // Evaluate at the canonical representative |x| and restore the signs
        // afterwards; this makes sign-equivariance hold bit for bit.
        const FinVec ax = twistlab::abs(x);
        std::vector<double> avg = support.size() <= cap_ ? exact_average(ax, support)
                                                         : monte_carlo_average(ax, support);
        for (std::size_t i : support)
            if (x[i] < 0.0) avg[i] = -avg[i];
        // coordinates off supp(x) keep the +1 sign of the canonical pattern
        return FinVec(x.index_set(), std::move(avg));
    }

    IndexSet index_set() const override { return base_->index_set(); }
    PNorm domain_p() const override { return base_->domain_p(); }
    PNorm codomain_p() const override { return base_->codomain_p(); }
    bool declared_homogeneous() const override { return base_->declared_homogeneous(); }
    bool commutes_with_signs() const override { return true; }
    bool preserves_supports() const override { return base_->preserves_supports(); }

    nlohmann::ordered_json descriptor() const override {
        return {{"kind", "symmetrized"},
                {"base", base_->descriptor()},
                {"cap", cap_},
                {"mc_samples", mc_samples_}};
    }

private:
    std::vector<double> signed_term(const FinVec& ax, std::span<const std::size_t> support,
                                    const std::vector<std::int8_t>& flips) const {
        std::vector<double> in(ax.entries().begin(), ax.entries().end());
        for (std::size_t j = 0; j < support.size(); ++j)
            if (flips[j]) in[support[j]] = -in[support[j]];
        FinVec out = (*base_)(FinVec(ax.index_set(), std::move(in)));
        std::vector<double> term(out.entries().begin(), out.entries().end());
        for (std::size_t j = 0; j < support.size(); ++j)
            if (flips[j]) term[support[j]] = -term[support[j]];
        return term;
    }

    std::vector<double> exact_average(const FinVec& ax, std::span<const std::size_t> support) const {
        const std::size_t s = support.size();
        PairwiseAccumulator acc;
        std::vector<std::int8_t> flips(s, 0);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
            for (std::size_t j = 0; j < s; ++j) flips[j] = static_cast<std::int8_t>((mask >> j) & 1u);
            acc.add(signed_term(ax, support, flips));
        }
        std::vector<double> sum = acc.finish(ax.dim());
        const double inv = 1.0 / static_cast<double>(std::uint64_t{1} << s);
        for (double& v : sum) v *= inv;
        return sum;
    }

    std::vector<double> monte_carlo_average(const FinVec& ax,
                                            std::span<const std::size_t> support) const {
        rng::Stream st(seed_, support_hash(support));
        PairwiseAccumulator acc;
        std::vector<std::int8_t> flips(support.size(), 0);
        for (std::size_t k = 0; k < mc_samples_; ++k) {
            for (auto& f : flips) f = static_cast<std::int8_t>(st.bits() & 1u);
            acc.add(signed_term(ax, support, flips));
        }
        std::vector<double> sum = acc.finish(ax.dim());
        for (double& v : sum) v /= static_cast<double>(mc_samples_);
        return sum;
    }

    std::shared_ptr<const QMap> base_;
    std::size_t cap_;
    std::size_t mc_samples_;
    std::uint64_t seed_;
};

}  // namespace

std::shared_ptr<const QMap> symmetrize(std::shared_ptr<const QMap> h, std::size_t cap,
                                       std::size_t mc_samples, std::uint64_t seed) {
    if (!h) throw std::invalid_argument("symmetrize: null map");
    return std::make_shared<SymmetrizedMap>(std::move(h), cap, mc_samples, seed);
}

}  // namespace twistlab
