#include "twistlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twistlab {

IndexSet::IndexSet(std::size_t size) : size_(size) {
    if (size == 0) throw std::domain_error("IndexSet: size must be >= 1");
}

IndexSet::IndexSet(std::size_t rows, std::size_t cols) : size_(rows * cols), grid_(Grid{rows, cols}) {
    if (rows == 0 || cols == 0) throw std::domain_error("IndexSet: grid sides must be >= 1");
}

std::size_t IndexSet::to_index(std::size_t row, std::size_t col) const {
    if (!grid_) throw std::domain_error("IndexSet: no grid structure");
    if (row >= grid_->rows || col >= grid_->cols) throw std::domain_error("IndexSet: grid position out of range");
    return row * grid_->cols + col;
}

PNorm::PNorm(double value) : p(value) {
    if (!(value > 0.0) || !std::isfinite(value)) throw std::domain_error("PNorm: need 0 < p < inf");
}

namespace {
void require_finite(std::span<const double> entries) {
    for (double e : entries)
        if (!std::isfinite(e)) throw std::domain_error("FinVec: entries must be finite");
}
}  // namespace

FinVec::FinVec(IndexSet set, std::vector<double> entries) : set_(set), entries_(std::move(entries)) {
    if (entries_.size() != set_.size()) throw std::domain_error("FinVec: entry count does not match index set");
    require_finite(entries_);
}

FinVec FinVec::zeros(IndexSet set) { return FinVec(set, std::vector<double>(set.size(), 0.0)); }

FinVec FinVec::unit(IndexSet set, std::size_t i) {
    if (i >= set.size()) throw std::domain_error("FinVec::unit: index out of range");
    std::vector<double> e(set.size(), 0.0);
    e[i] = 1.0;
    return FinVec(set, std::move(e));
}

FinVec FinVec::indicator(IndexSet set, std::span<const std::size_t> block) {
    std::vector<double> e(set.size(), 0.0);
    for (std::size_t i : block) {
        if (i >= set.size()) throw std::domain_error("FinVec::indicator: index out of range");
        e[i] = 1.0;
    }
    return FinVec(set, std::move(e));
}

std::vector<std::size_t> FinVec::support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i] != 0.0) s.push_back(i);
    return s;
}

std::size_t FinVec::support_size() const {
    std::size_t n = 0;
    for (double e : entries_) n += (e != 0.0);
    return n;
}

bool FinVec::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](double e) { return e == 0.0; });
}

namespace {
void require_compatible(const FinVec& a, const FinVec& b, const char* what) {
    if (!compatible(a.index_set(), b.index_set())) throw std::domain_error(std::string(what) + ": index sets differ");
}
}  // namespace

FinVec operator+(const FinVec& a, const FinVec& b) {
    require_compatible(a, b, "FinVec+");
    std::vector<double> e(a.dim());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a[i] + b[i];
    return FinVec(a.index_set(), std::move(e));
}

FinVec operator-(const FinVec& a, const FinVec& b) {
    require_compatible(a, b, "FinVec-");
    std::vector<double> e(a.dim());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a[i] - b[i];
    return FinVec(a.index_set(), std::move(e));
}

FinVec operator-(const FinVec& a) {
    std::vector<double> e(a.dim());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -a[i];
    return FinVec(a.index_set(), std::move(e));
}

FinVec operator*(double s, const FinVec& v) {
    std::vector<double> e(v.dim());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = s * v[i];
    return FinVec(v.index_set(), std::move(e));
}

FinVec hadamard(const FinVec& a, const FinVec& b) {
    require_compatible(a, b, "hadamard");
    std::vector<double> e(a.dim());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = a[i] * b[i];
    return FinVec(a.index_set(), std::move(e));
}

FinVec abs(const FinVec& v) {
    std::vector<double> e(v.dim());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::fabs(v[i]);
    return FinVec(v.index_set(), std::move(e));
}

SignPattern::SignPattern(IndexSet set, std::vector<std::int8_t> signs) : set_(set), signs_(std::move(signs)) {
    if (signs_.size() != set_.size()) throw std::domain_error("SignPattern: size mismatch");
    for (std::int8_t s : signs_)
        if (s != 1 && s != -1) throw std::domain_error("SignPattern: entries must be +1 or -1");
}

SignPattern SignPattern::all_plus(IndexSet set) {
    return SignPattern(set, std::vector<std::int8_t>(set.size(), 1));
}

SignPattern SignPattern::all_minus(IndexSet set) {
    return SignPattern(set, std::vector<std::int8_t>(set.size(), -1));
}

FinVec SignPattern::as_vector() const {
    std::vector<double> e(signs_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = signs_[i];
    return FinVec(set_, std::move(e));
}

ChunkPartition::ChunkPartition(IndexSet set, std::vector<std::vector<std::size_t>> blocks)
    : set_(set), blocks_(std::move(blocks)) {
    std::vector<char> seen(set_.size(), 0);
    std::size_t covered = 0;
    for (auto& block : blocks_) {
        if (block.empty()) throw std::domain_error("ChunkPartition: empty block");
        std::sort(block.begin(), block.end());
        for (std::size_t i : block) {
            if (i >= set_.size()) throw std::domain_error("ChunkPartition: index out of range");
            if (seen[i]) throw std::domain_error("ChunkPartition: blocks overlap");
            seen[i] = 1;
            ++covered;
        }
    }
    if (covered != set_.size()) throw std::domain_error("ChunkPartition: blocks do not cover the index set");
}

ChunkPartition ChunkPartition::discrete(IndexSet set) {
    std::vector<std::vector<std::size_t>> blocks(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) blocks[i] = {i};
    return ChunkPartition(set, std::move(blocks));
}

ChunkPartition ChunkPartition::grid_rows(IndexSet set) {
    if (!set.grid()) throw std::domain_error("ChunkPartition::grid_rows: index set has no grid structure");
    const auto [rows, cols] = *set.grid();
    std::vector<std::vector<std::size_t>> blocks(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        blocks[r].resize(cols);
        for (std::size_t c = 0; c < cols; ++c) blocks[r][c] = r * cols + c;
    }
    return ChunkPartition(set, std::move(blocks));
}

double pnorm(std::span<const double> values, PNorm p) {
    if (values.size() == 1) return std::fabs(values[0]);
    if (p.p == 2.0) {
        double s = 0.0;
        for (double v : values) s += v * v;
        return std::sqrt(s);
    }
    if (p.p == 1.0) {
        double s = 0.0;
        for (double v : values) s += std::fabs(v);
        return s;
    }
    double s = 0.0;
    for (double v : values)
        if (v != 0.0) s += std::pow(std::fabs(v), p.p);
    return s == 0.0 ? 0.0 : std::pow(s, 1.0 / p.p);
}

double pnorm(const FinVec& v, PNorm p) { return pnorm(v.entries(), p); }

double sup_norm(const FinVec& v) {
    double m = 0.0;
    for (double e : v.entries()) m = std::max(m, std::fabs(e));
    return m;
}

FinVec chunk_restrict(const FinVec& v, std::span<const std::size_t> block) {
    std::vector<double> e(v.dim(), 0.0);
    for (std::size_t i : block) {
        if (i >= v.dim()) throw std::domain_error("chunk_restrict: block not contained in index set");
        e[i] = v[i];
    }
    return FinVec(v.index_set(), std::move(e));
}

FinVec sign_apply(const SignPattern& u, const FinVec& v) {
    if (!compatible(u.index_set(), v.index_set())) throw std::domain_error("sign_apply: index sets differ");
    std::vector<double> e(v.dim());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = u.sign(i) * v[i];
    return FinVec(v.index_set(), std::move(e));
}

bool disjoint_equal_norm(const FinVec& x, const FinVec& y, PNorm p, double tol) {
    if (!compatible(x.index_set(), y.index_set())) throw std::domain_error("disjoint_equal_norm: index sets differ");
    for (std::size_t i = 0; i < x.dim(); ++i)
        if (x[i] != 0.0 && y[i] != 0.0) return false;
    const double nx = pnorm(x, p);
    const double ny = pnorm(y, p);
    return std::fabs(nx - ny) <= tol * std::max(nx, 1.0);
}

}  // namespace twistlab
