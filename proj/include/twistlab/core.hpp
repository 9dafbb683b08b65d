#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace twistlab {

struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool operator==(const Grid&) const = default;
};

// Finite ground set {0, ..., size-1}, optionally identified with an m x n
// grid in row-major order: index i <-> (i / cols, i % cols).
class IndexSet {
public:
    explicit IndexSet(std::size_t size);
    IndexSet(std::size_t rows, std::size_t cols);

    std::size_t size() const { return size_; }
    const std::optional<Grid>& grid() const { return grid_; }
    std::size_t to_index(std::size_t row, std::size_t col) const;

    bool operator==(const IndexSet&) const = default;

private:
    std::size_t size_;
    std::optional<Grid> grid_;
};

// Two vectors may be combined whenever their ground sets have equal size;
// the grid annotation is bookkeeping, not part of the algebra.
inline bool compatible(const IndexSet& a, const IndexSet& b) { return a.size() == b.size(); }

struct PNorm {
    explicit PNorm(double value);
    double p;
};

// Finitely supported real vector over an explicit ground set. Entries are
// validated to be finite on construction; all operations treat values as
// immutable and return fresh vectors.
class FinVec {
public:
    FinVec(IndexSet set, std::vector<double> entries);

    static FinVec zeros(IndexSet set);
    static FinVec unit(IndexSet set, std::size_t i);
    static FinVec indicator(IndexSet set, std::span<const std::size_t> block);

    std::size_t dim() const { return entries_.size(); }
    const IndexSet& index_set() const { return set_; }
    double operator[](std::size_t i) const { return entries_[i]; }
    std::span<const double> entries() const { return entries_; }

    std::vector<std::size_t> support() const;
    std::size_t support_size() const;
    bool is_zero() const;

    bool operator==(const FinVec&) const = default;

private:
    IndexSet set_;
    std::vector<double> entries_;
};

FinVec operator+(const FinVec& a, const FinVec& b);
FinVec operator-(const FinVec& a, const FinVec& b);
FinVec operator-(const FinVec& a);
FinVec operator*(double s, const FinVec& v);
inline FinVec operator*(const FinVec& v, double s) { return s * v; }
FinVec hadamard(const FinVec& a, const FinVec& b);
FinVec abs(const FinVec& v);

// Choice of signs, one per coordinate. Acting on a vector is involutive.
class SignPattern {
public:
    SignPattern(IndexSet set, std::vector<std::int8_t> signs);
    static SignPattern all_plus(IndexSet set);
    static SignPattern all_minus(IndexSet set);

    const IndexSet& index_set() const { return set_; }
    int sign(std::size_t i) const { return signs_[i]; }
    void flip(std::size_t i) { signs_[i] = static_cast<std::int8_t>(-signs_[i]); }
    FinVec as_vector() const;

private:
    IndexSet set_;
    std::vector<std::int8_t> signs_;
};

// Disjoint nonempty blocks covering the ground set.
class ChunkPartition {
public:
    ChunkPartition(IndexSet set, std::vector<std::vector<std::size_t>> blocks);
    static ChunkPartition discrete(IndexSet set);
    static ChunkPartition grid_rows(IndexSet set);

    const IndexSet& index_set() const { return set_; }
    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }

private:
    IndexSet set_;
    std::vector<std::vector<std::size_t>> blocks_;
};

double pnorm(std::span<const double> values, PNorm p);
double pnorm(const FinVec& v, PNorm p);
double sup_norm(const FinVec& v);

// v restricted to the given block, zero elsewhere. Throws if the block
// reaches outside the ground set.
FinVec chunk_restrict(const FinVec& v, std::span<const std::size_t> block);

FinVec sign_apply(const SignPattern& u, const FinVec& v);

// True iff supports are disjoint and the p-norms agree up to
// tol * max(pnorm(x), 1).
bool disjoint_equal_norm(const FinVec& x, const FinVec& y, PNorm p, double tol = 1e-9);

}  // namespace twistlab
