#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twistlab/core.hpp"

namespace twistlab {

// Node of the dyadic tree, addressed by (level, position); the root is
// (0, 0) and the children of (l, i) are (l+1, 2i) and (l+1, 2i+1).
struct NodeRef {
    int level = 0;
    std::size_t pos = 0;
    bool operator==(const NodeRef&) const = default;
};

class DyadicTree {
public:
    explicit DyadicTree(int height);

    int height() const { return height_; }
    std::size_t node_count() const { return (std::size_t{2} << height_) - 1; }
    std::size_t level_width(int level) const { return std::size_t{1} << level; }

    std::size_t heap_index(NodeRef n) const;
    NodeRef node_at(std::size_t heap) const;
    std::string word(NodeRef n) const;
    NodeRef parse_word(const std::string& word) const;

private:
    int height_;
};

// Nested equal-size blocks of a 2^k ground set, indexed by tree nodes: the
// root carries the full set and each node splits into two halves of equal
// cardinality. Equivalent to a linear order on the ground set.
class AdequatePartition {
public:
    AdequatePartition(DyadicTree tree, std::vector<std::vector<std::size_t>> assign);

    const DyadicTree& tree() const { return tree_; }
    std::size_t ground_size() const { return std::size_t{1} << tree_.height(); }
    std::span<const std::size_t> block(NodeRef n) const { return assign_[tree_.heap_index(n)]; }

private:
    DyadicTree tree_;
    std::vector<std::vector<std::size_t>> assign_;
};

// The unique adequate partition whose blocks are consecutive runs of the
// given order; order must be a permutation of {0, ..., 2^k - 1}.
AdequatePartition from_order(std::span<const std::size_t> order, int k);

// Inverse of from_order: the leaf elements read left to right.
std::vector<std::size_t> to_order(const AdequatePartition& partition);

// Row-major and column-major lexicographic partitions of the 2^r x 2^s
// grid, on 2^(r+s) points.
std::pair<AdequatePartition, AdequatePartition> lex_partitions(int r, int s);

// 0/1 indicator of the node's block as a vector over the given set (the
// set defaults to the partition's plain ground set).
FinVec indicator(const AdequatePartition& partition, NodeRef n);
FinVec indicator(const AdequatePartition& partition, NodeRef n, const IndexSet& set);
std::vector<FinVec> indicator_family(const AdequatePartition& partition);

// True iff the level-n indicators sum exactly to the all-ones vector;
// checked in integer arithmetic.
bool level_sum_check(const AdequatePartition& partition, int level);

// Vector with exact integer coordinates in units of log 2, plus an exact
// rational offset that stays zero throughout this code base.
struct Log2Vec {
    std::vector<std::int64_t> log2_coeffs;
    std::int64_t rational_num = 0;
    std::int64_t rational_den = 1;

    bool operator==(const Log2Vec&) const = default;
    // Euclidean norm of the vector, in actual units (coefficients * log 2).
    double norm2() const;
};

// Exact per-level eigencoefficients of the grid map on the two lexicographic
// families: x blocks scale by (r - level) log 2 below level r and vanish
// from level r on; y blocks scale by r log 2 below level s and by
// (r + s - level) log 2 from level s on.
struct LemmaRsTable {
    int r = 0;
    int s = 0;
    std::int64_t x_coeff(int level) const;
    std::int64_t y_coeff(int level) const;
};

LemmaRsTable lemma_rs_table(int r, int s);

// Exact value of sum over all tree nodes of (grid-map of x_node minus
// grid-map of y_node), computed in the log 2 algebra. Equals -rs on every
// coordinate.
Log2Vec aggregate_sum(int r, int s);

// Generic exact aggregate: sum over nodes of cx(level) * x_node minus
// cy(level) * y_node, coefficients per level.
std::vector<std::int64_t> level_coefficient_aggregate(const AdequatePartition& first,
                                                      const AdequatePartition& second,
                                                      std::span<const std::int64_t> cx,
                                                      std::span<const std::int64_t> cy);

// Exact check that a levelwise-eigenvalue map has vanishing aggregate over
// any two adequate partitions of the same ground set; the shared level sums
// cancel coefficient by coefficient in integer arithmetic.
bool symmetric_aggregate_is_zero(const AdequatePartition& first, const AdequatePartition& second,
                                 std::span<const std::int64_t> level_coeffs);

// Worst relative deviation between the exact table and a floating blockwise
// evaluation over every node of both families. Runs the per-node
// evaluations through the parallel kernels.
double rs_table_max_deviation(int r, int s);

}  // namespace twistlab
