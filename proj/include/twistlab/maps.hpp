#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "twistlab/core.hpp"
#include "twistlab/qmap.hpp"

namespace twistlab {

// Scalar weight function used by the Kalton-Peck family. func is expected to
// vanish at 0 and be Lipschitz with the declared constant; both are sampled
// contracts, checked by the test suite rather than at call time.
struct LipschitzPhi {
    std::string name;
    double lip_const = 1.0;
    std::function<double(double)> func;

    double operator()(double t) const { return func(t); }

    static LipschitzPhi identity();
    static LipschitzPhi clipped(double cap);
    static LipschitzPhi scaled(double factor);
    // t -> inner(stretch * t); used to relate the blockwise and the
    // coordinatewise map on the discrete partition
    static LipschitzPhi stretched(const LipschitzPhi& inner, double stretch);
};

// x_i -> x_i * phi((p/2) * log(|x|_p / |x_i|)), with zero coordinates
// contributing zero. Support preserving, sign commuting, homogeneous.
FinVec kp_eval(PNorm p, const LipschitzPhi& phi, const FinVec& x);

// Blockwise variant over a fixed partition: block i is scaled by
// phi(p * log(|x|_p / |x_i|_p)), zero blocks contributing zero. With
// phi = id and q nonzero blocks of equal norm the result is log(q) * x;
// vectors supported in a single block map to zero.
FinVec chunked_eval(PNorm p, const LipschitzPhi& phi, const ChunkPartition& partition,
                    const FinVec& x);

class KPMap final : public QMap {
public:
    KPMap(IndexSet set, PNorm p, LipschitzPhi phi = LipschitzPhi::identity());

    FinVec operator()(const FinVec& x) const override { return kp_eval(p_, phi_, x); }
    IndexSet index_set() const override { return set_; }
    PNorm domain_p() const override { return p_; }
    PNorm codomain_p() const override { return p_; }
    bool commutes_with_signs() const override { return true; }
    bool preserves_supports() const override { return true; }
    nlohmann::ordered_json descriptor() const override;

    const LipschitzPhi& phi() const { return phi_; }

private:
    IndexSet set_;
    PNorm p_;
    LipschitzPhi phi_;
};

class ChunkedKPMap final : public QMap {
public:
    ChunkedKPMap(ChunkPartition partition, PNorm p, LipschitzPhi phi = LipschitzPhi::identity());

    FinVec operator()(const FinVec& x) const override { return chunked_eval(p_, phi_, partition_, x); }
    IndexSet index_set() const override { return partition_.index_set(); }
    PNorm domain_p() const override { return p_; }
    PNorm codomain_p() const override { return p_; }
    bool commutes_with_signs() const override { return true; }
    bool preserves_supports() const override { return true; }
    nlohmann::ordered_json descriptor() const override;

    const ChunkPartition& partition() const { return partition_; }

private:
    ChunkPartition partition_;
    PNorm p_;
    LipschitzPhi phi_;
};

// The blockwise map on the m x n grid with row blocks, p = 2, phi = id.
ChunkedKPMap grid_chunked(std::size_t m, std::size_t n);

// Recursive map on 3^n coordinates laid out as [x-third | y-third | z-third].
// At depth 1 it maps (x, y, z) to (x, y, x|y| / sqrt(x^2 + y^2)) with
// 0/0 -> 0; deeper levels apply the same construction to the projected
// thirds. Depends only on its own projection; homogeneous.
FinVec elp_eval(std::size_t depth, const FinVec& x);

// Projection that zeroes every z-third recursively; elp_eval(x) equals
// elp_eval of the projection.
FinVec elp_project(std::size_t depth, const FinVec& x);

class ELPMap final : public QMap {
public:
    explicit ELPMap(std::size_t depth);

    FinVec operator()(const FinVec& x) const override { return elp_eval(depth_, x); }
    IndexSet index_set() const override { return set_; }
    PNorm domain_p() const override { return PNorm(2.0); }
    PNorm codomain_p() const override { return PNorm(2.0); }
    nlohmann::ordered_json descriptor() const override;

    std::size_t depth() const { return depth_; }

private:
    std::size_t depth_;
    IndexSet set_;
};

class ZeroMap final : public QMap {
public:
    ZeroMap(IndexSet set, PNorm p) : set_(set), p_(p) {}

    FinVec operator()(const FinVec& x) const override;
    IndexSet index_set() const override { return set_; }
    PNorm domain_p() const override { return p_; }
    PNorm codomain_p() const override { return p_; }
    bool commutes_with_signs() const override { return true; }
    bool preserves_supports() const override { return true; }
    nlohmann::ordered_json descriptor() const override;

private:
    IndexSet set_;
    PNorm p_;
};

// Linear map x -> d .* x; additive defect vanishes and it commutes with
// every coordinatewise multiplier.
class DiagonalMap final : public QMap {
public:
    DiagonalMap(FinVec diag, PNorm p) : diag_(std::move(diag)), p_(p) {}

    FinVec operator()(const FinVec& x) const override { return hadamard(diag_, x); }
    IndexSet index_set() const override { return diag_.index_set(); }
    PNorm domain_p() const override { return p_; }
    PNorm codomain_p() const override { return p_; }
    bool commutes_with_signs() const override { return true; }
    bool preserves_supports() const override { return true; }
    nlohmann::ordered_json descriptor() const override;

private:
    FinVec diag_;
    PNorm p_;
};

class ScaledMap final : public QMap {
public:
    ScaledMap(std::shared_ptr<const QMap> inner, double factor);

    FinVec operator()(const FinVec& x) const override { return factor_ * (*inner_)(x); }
    IndexSet index_set() const override { return inner_->index_set(); }
    PNorm domain_p() const override { return inner_->domain_p(); }
    PNorm codomain_p() const override { return inner_->codomain_p(); }
    bool commutes_with_signs() const override { return inner_->commutes_with_signs(); }
    bool preserves_supports() const override { return inner_->preserves_supports(); }
    nlohmann::ordered_json descriptor() const override;

private:
    std::shared_ptr<const QMap> inner_;
    double factor_;
};

// Transfer of a map from the p scale to the q scale, 0 < q < p:
// f -> u |f|^(q/r) Phi(|f|^(q/p)) with 1/q = 1/r + 1/p and f = u|f| the
// sign/modulus decomposition (sign(0) := +1). Throws for q >= p.
std::shared_ptr<const QMap> reflect(std::shared_ptr<const QMap> phi_p, double p, double q);

// Lifting built from a representative of the map on the 2p scale:
// f -> (u (Phi_2p(|f|^(1/2)))^2 / 2, Phi_p(f)) where Phi_p is the reflection
// of Phi_2p. The second component is the reflected map itself, evaluated
// through the identical code path.
class FFLift {
public:
    FFLift(std::shared_ptr<const QMap> phi_2p, double p);

    std::pair<FinVec, FinVec> operator()(const FinVec& f) const;

    const QMap& reflected() const { return *phi_p_; }
    std::shared_ptr<const QMap> reflected_ptr() const { return phi_p_; }
    double p() const { return p_; }

private:
    std::shared_ptr<const QMap> phi_2p_;
    std::shared_ptr<const QMap> phi_p_;
    double p_;
};

inline std::pair<FinVec, FinVec> ff_lift(const FFLift& lift, const FinVec& f) { return lift(f); }

}  // namespace twistlab
