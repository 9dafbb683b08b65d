#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "twistlab/core.hpp"

namespace twistlab {

// Homogeneous map on vectors over a fixed ground set. Homogeneity,
// sign-commutation and support preservation are declared contracts that the
// test suite samples; nothing is enforced at call time.
class QMap {
public:
    virtual ~QMap() = default;

    virtual FinVec operator()(const FinVec& x) const = 0;
    virtual IndexSet index_set() const = 0;
    virtual PNorm domain_p() const = 0;
    virtual PNorm codomain_p() const = 0;

    virtual bool declared_homogeneous() const { return true; }
    virtual bool commutes_with_signs() const { return false; }
    virtual bool preserves_supports() const { return false; }

    virtual nlohmann::ordered_json descriptor() const = 0;
};

// Sampled lower bound for one of the map constants, together with the pair
// of inputs that realized it. The value is always recomputable from the
// witness pair.
struct ConstantEstimate {
    double value = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    FinVec witness_x;
    FinVec witness_y;
};

// Phi(x + y) - Phi(x) - Phi(y)
FinVec defect_add(const QMap& phi, const FinVec& x, const FinVec& y);

// Phi(a x) - a Phi(x), with a acting as a coordinatewise multiplier
FinVec defect_mod(const QMap& phi, const FinVec& a, const FinVec& x);

// Sampled sup of |defect_add| / (|x| + |y|). Deterministic given the seed;
// trials are independent lanes, so extending the trial count only extends
// the sample set.
ConstantEstimate estimate_Q(const QMap& phi, std::uint64_t trials, std::uint64_t seed);

// Sampled sup of |defect_mod| / (sup|a| * |x|); witness_x holds the
// multiplier, witness_y the vector.
ConstantEstimate estimate_C(const QMap& phi, std::uint64_t trials, std::uint64_t seed);

// Sampled sup of |Phi(x) - Psi(x)| / |x|; witness_x holds the argmax input.
ConstantEstimate strong_equiv_dist(const QMap& phi, const QMap& psi, std::uint64_t trials,
                                   std::uint64_t seed);

// Sign-group average of H. On inputs with support size <= cap the average
// over all 2^|supp| sign patterns on the support is computed exactly (via a
// pairwise summation tree, so averaging a sign-invariant H reproduces it bit
// for bit); larger supports fall back to a Monte Carlo average with the
// declared sample count. The result commutes with every sign pattern that
// fixes the complement of supp(x), exactly in the exact regime.
std::shared_ptr<const QMap> symmetrize(std::shared_ptr<const QMap> h, std::size_t cap = 12,
                                       std::size_t mc_samples = 256, std::uint64_t seed = 0);

}  // namespace twistlab
