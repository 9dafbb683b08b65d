#include "twistlab/maps.hpp"

#include <cmath>
#include <stdexcept>

namespace twistlab {

LipschitzPhi LipschitzPhi::identity() {
    return LipschitzPhi{"id", 1.0, [](double t) { return t; }};
}

LipschitzPhi LipschitzPhi::clipped(double cap) {
    if (!(cap > 0.0)) throw std::domain_error("LipschitzPhi::clipped: cap must be positive");
    return LipschitzPhi{"clip(" + std::to_string(cap) + ")", 1.0,
                        [cap](double t) { return std::min(t, cap); }};
}

LipschitzPhi LipschitzPhi::scaled(double factor) {
    return LipschitzPhi{"scale(" + std::to_string(factor) + ")", std::fabs(factor),
                        [factor](double t) { return factor * t; }};
}

LipschitzPhi LipschitzPhi::stretched(const LipschitzPhi& inner, double stretch) {
    auto f = inner.func;
    return LipschitzPhi{inner.name + "@" + std::to_string(stretch) + "t",
                        inner.lip_const * std::fabs(stretch),
                        [f, stretch](double t) { return f(stretch * t); }};
}

FinVec kp_eval(PNorm p, const LipschitzPhi& phi, const FinVec& x) {
    const double norm = pnorm(x, p);
    std::vector<double> out(x.dim(), 0.0);
    if (norm == 0.0) return FinVec(x.index_set(), std::move(out));
    const double half_p = 0.5 * p.p;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        out[i] = xi * phi(half_p * std::log(norm / std::fabs(xi)));
    }
    return FinVec(x.index_set(), std::move(out));
}

FinVec chunked_eval(PNorm p, const LipschitzPhi& phi, const ChunkPartition& partition,
                    const FinVec& x) {
    if (!compatible(partition.index_set(), x.index_set()))
        throw std::domain_error("chunked_eval: partition does not cover the index set");
    const double norm = pnorm(x, p);
    std::vector<double> out(x.dim(), 0.0);
    if (norm == 0.0) return FinVec(x.index_set(), std::move(out));
    std::vector<double> scratch;
    for (const auto& block : partition.blocks()) {
        scratch.clear();
        for (std::size_t i : block) scratch.push_back(x[i]);
        const double block_norm = pnorm(scratch, p);
        if (block_norm == 0.0) continue;
        const double coeff = phi(p.p * std::log(norm / block_norm));
        for (std::size_t i : block) out[i] = x[i] * coeff;
    }
    return FinVec(x.index_set(), std::move(out));
}

KPMap::KPMap(IndexSet set, PNorm p, LipschitzPhi phi) : set_(set), p_(p), phi_(std::move(phi)) {}

nlohmann::ordered_json KPMap::descriptor() const {
    return {{"kind", "kp"}, {"p", p_.p}, {"phi", phi_.name}};
}

ChunkedKPMap::ChunkedKPMap(ChunkPartition partition, PNorm p, LipschitzPhi phi)
    : partition_(std::move(partition)), p_(p), phi_(std::move(phi)) {}

nlohmann::ordered_json ChunkedKPMap::descriptor() const {
    nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
    for (const auto& b : partition_.blocks()) blocks.push_back(b);
    return {{"kind", "chunked"}, {"p", p_.p}, {"phi", phi_.name}, {"partition", blocks}};
}

ChunkedKPMap grid_chunked(std::size_t m, std::size_t n) {
    if (m < 1 || n < 1) throw std::domain_error("grid_chunked: grid sides must be >= 1");
    IndexSet set(m, n);
    return ChunkedKPMap(ChunkPartition::grid_rows(set), PNorm(2.0));
}

namespace {

std::size_t pow3(std::size_t n) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= 3;
    return r;
}

double l2(std::span<const double> v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

void elp_project_rec(std::span<double> v, std::size_t depth) {
    if (depth == 0) return;
    const std::size_t third = v.size() / 3;
    elp_project_rec(v.subspan(0, third), depth - 1);
    elp_project_rec(v.subspan(third, third), depth - 1);
    for (std::size_t i = 2 * third; i < v.size(); ++i) v[i] = 0.0;
}

void elp_eval_rec(std::span<const double> in, std::span<double> out, std::size_t depth) {
    if (depth == 0) {
        out[0] = in[0];
        return;
    }
    const std::size_t third = in.size() / 3;
    std::vector<double> pa(in.begin(), in.begin() + third);
    std::vector<double> pb(in.begin() + third, in.begin() + 2 * third);
    elp_project_rec(pa, depth - 1);
    elp_project_rec(pb, depth - 1);
    elp_eval_rec(pa, out.subspan(0, third), depth - 1);
    elp_eval_rec(pb, out.subspan(third, third), depth - 1);
    const double na = l2(pa);
    const double nb = l2(pb);
    const double denom = std::sqrt(na * na + nb * nb);
    auto tail = out.subspan(2 * third, third);
    if (denom == 0.0) {
        for (double& t : tail) t = 0.0;
    } else {
        const double scale = nb / denom;
        for (std::size_t i = 0; i < third; ++i) tail[i] = pa[i] * scale;
    }
}

}  // namespace

FinVec elp_eval(std::size_t depth, const FinVec& x) {
    if (x.dim() != pow3(depth)) throw std::domain_error("elp_eval: index set size is not 3^depth");
    std::vector<double> out(x.dim(), 0.0);
    elp_eval_rec(x.entries(), out, depth);
    return FinVec(x.index_set(), std::move(out));
}

FinVec elp_project(std::size_t depth, const FinVec& x) {
    if (x.dim() != pow3(depth)) throw std::domain_error("elp_project: index set size is not 3^depth");
    std::vector<double> v(x.entries().begin(), x.entries().end());
    elp_project_rec(v, depth);
    return FinVec(x.index_set(), std::move(v));
}

ELPMap::ELPMap(std::size_t depth) : depth_(depth), set_(pow3(depth)) {}

nlohmann::ordered_json ELPMap::descriptor() const {
    return {{"kind", "elp"}, {"p", 2.0}, {"depth", depth_}};
}

FinVec ZeroMap::operator()(const FinVec& x) const { return FinVec::zeros(x.index_set()); }

nlohmann::ordered_json ZeroMap::descriptor() const { return {{"kind", "zero"}, {"p", p_.p}}; }

nlohmann::ordered_json DiagonalMap::descriptor() const {
    return {{"kind", "diagonal"}, {"p", p_.p}};
}

ScaledMap::ScaledMap(std::shared_ptr<const QMap> inner, double factor)
    : inner_(std::move(inner)), factor_(factor) {
    if (!inner_) throw std::invalid_argument("ScaledMap: null map");
}

nlohmann::ordered_json ScaledMap::descriptor() const {
    return {{"kind", "scaled"}, {"factor", factor_}, {"base", inner_->descriptor()}};
}

namespace {

class ReflectedMap final : public QMap {
public:
    ReflectedMap(std::shared_ptr<const QMap> inner, double p, double q)
        : inner_(std::move(inner)), p_(p), q_(q) {
        if (!inner_) throw std::invalid_argument("reflect: null map");
        if (!(q > 0.0) || q >= p) throw std::domain_error("reflect: need 0 < q < p");
        if (inner_->domain_p().p != p)
            throw std::domain_error("reflect: map does not live on the stated p scale");
    }

    FinVec operator()(const FinVec& f) const override {
        const double inner_exp = q_ / p_;        // |f|^(q/p) feeds the inner map
        const double outer_exp = 1.0 - q_ / p_;  // q/r with 1/r = 1/q - 1/p
        std::vector<double> g(f.dim(), 0.0);
        for (std::size_t i = 0; i < f.dim(); ++i)
            if (f[i] != 0.0) g[i] = std::pow(std::fabs(f[i]), inner_exp);
        const FinVec inner_val = (*inner_)(FinVec(f.index_set(), std::move(g)));
        std::vector<double> out(f.dim(), 0.0);
        for (std::size_t i = 0; i < f.dim(); ++i) {
            const double fi = f[i];
            const double u = fi < 0.0 ? -1.0 : 1.0;
            const double mod = fi == 0.0 ? 0.0 : std::pow(std::fabs(fi), outer_exp);
            out[i] = u * mod * inner_val[i];
        }
        return FinVec(f.index_set(), std::move(out));
    }

    IndexSet index_set() const override { return inner_->index_set(); }
    PNorm domain_p() const override { return PNorm(q_); }
    PNorm codomain_p() const override { return PNorm(q_); }
    bool commutes_with_signs() const override { return true; }
    bool preserves_supports() const override { return inner_->preserves_supports(); }

    nlohmann::ordered_json descriptor() const override {
        return {{"kind", "reflected"}, {"p", p_}, {"q", q_}, {"base", inner_->descriptor()}};
    }

private:
    std::shared_ptr<const QMap> inner_;
    double p_;
    double q_;
};

}  // namespace

std::shared_ptr<const QMap> reflect(std::shared_ptr<const QMap> phi_p, double p, double q) {
    return std::make_shared<ReflectedMap>(std::move(phi_p), p, q);
}

FFLift::FFLift(std::shared_ptr<const QMap> phi_2p, double p) : phi_2p_(std::move(phi_2p)), p_(p) {
    if (!phi_2p_) throw std::domain_error("FFLift: missing 2p-scale representative");
    if (!(p > 0.0)) throw std::domain_error("FFLift: need p > 0");
    phi_p_ = reflect(phi_2p_, 2.0 * p, p);
}

std::pair<FinVec, FinVec> FFLift::operator()(const FinVec& f) const {
    std::vector<double> g(f.dim(), 0.0);
    for (std::size_t i = 0; i < f.dim(); ++i)
        if (f[i] != 0.0) g[i] = std::sqrt(std::fabs(f[i]));
    const FinVec w = (*phi_2p_)(FinVec(f.index_set(), std::move(g)));
    std::vector<double> first(f.dim(), 0.0);
    for (std::size_t i = 0; i < f.dim(); ++i) {
        const double u = f[i] < 0.0 ? -1.0 : 1.0;
        first[i] = u * w[i] * w[i] * 0.5;
    }
    return {FinVec(f.index_set(), std::move(first)), (*phi_p_)(f)};
}

}  // namespace twistlab
