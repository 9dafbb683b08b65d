#include "twistlab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twistlab/maps.hpp"
#include "twistlab/par.hpp"

namespace twistlab {

DyadicTree::DyadicTree(int height) : height_(height) {
    if (height < 0 || height > 62) throw std::domain_error("DyadicTree: height out of range");
}

std::size_t DyadicTree::heap_index(NodeRef n) const {
    if (n.level < 0 || n.level > height_ || n.pos >= level_width(n.level))
        throw std::domain_error("DyadicTree: node out of range");
    return (std::size_t{1} << n.level) - 1 + n.pos;
}

NodeRef DyadicTree::node_at(std::size_t heap) const {
    if (heap >= node_count()) throw std::domain_error("DyadicTree: heap index out of range");
    int level = 0;
    while ((std::size_t{2} << level) - 1 <= heap) ++level;
    return NodeRef{level, heap - ((std::size_t{1} << level) - 1)};
}

std::string DyadicTree::word(NodeRef n) const {
    heap_index(n);  // range check
    std::string w(static_cast<std::size_t>(n.level), '0');
    for (int b = 0; b < n.level; ++b)
        if (n.pos & (std::size_t{1} << (n.level - 1 - b))) w[static_cast<std::size_t>(b)] = '1';
    return w;
}

NodeRef DyadicTree::parse_word(const std::string& word) const {
    if (static_cast<int>(word.size()) > height_) throw std::domain_error("DyadicTree: word too long");
    NodeRef n{static_cast<int>(word.size()), 0};
    for (char c : word) {
        if (c != '0' && c != '1') throw std::domain_error("DyadicTree: word must be binary");
        n.pos = (n.pos << 1) | static_cast<std::size_t>(c - '0');
    }
    return n;
}

AdequatePartition::AdequatePartition(DyadicTree tree, std::vector<std::vector<std::size_t>> assign)
    : tree_(tree), assign_(std::move(assign)) {
    const int k = tree_.height();
    const std::size_t ground = std::size_t{1} << k;
    if (assign_.size() != tree_.node_count())
        throw std::domain_error("AdequatePartition: one block per tree node required");
    for (auto& block : assign_) std::sort(block.begin(), block.end());

    const auto& root = assign_[0];
    if (root.size() != ground) throw std::domain_error("AdequatePartition: root must carry the full set");
    for (std::size_t i = 0; i < ground; ++i)
        if (root[i] != i) throw std::domain_error("AdequatePartition: root must carry the full set");

    for (int level = 0; level < k; ++level) {
        for (std::size_t pos = 0; pos < tree_.level_width(level); ++pos) {
            const auto& parent = assign_[tree_.heap_index({level, pos})];
            const auto& left = assign_[tree_.heap_index({level + 1, 2 * pos})];
            const auto& right = assign_[tree_.heap_index({level + 1, 2 * pos + 1})];
            if (left.empty() || right.empty())
                throw std::domain_error("AdequatePartition: blocks must be nonempty");
            if (left.size() != right.size())
                throw std::domain_error("AdequatePartition: siblings must have equal cardinality");
            std::vector<std::size_t> merged;
            merged.reserve(parent.size());
            std::merge(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(merged));
            if (merged != parent)
                throw std::domain_error("AdequatePartition: children must partition the parent");
        }
    }
}

AdequatePartition from_order(std::span<const std::size_t> order, int k) {
    const std::size_t ground = std::size_t{1} << k;
    if (order.size() != ground)
        throw std::domain_error("from_order: ground set size is not a power of two matching k");
    std::vector<char> seen(ground, 0);
    for (std::size_t v : order) {
        if (v >= ground || seen[v]) throw std::domain_error("from_order: order must be a permutation");
        seen[v] = 1;
    }
    DyadicTree tree(k);
    std::vector<std::vector<std::size_t>> assign(tree.node_count());
    for (int level = 0; level <= k; ++level) {
        const std::size_t run = ground >> level;
        for (std::size_t pos = 0; pos < tree.level_width(level); ++pos) {
            auto& block = assign[tree.heap_index({level, pos})];
            block.assign(order.begin() + static_cast<std::ptrdiff_t>(pos * run),
                         order.begin() + static_cast<std::ptrdiff_t>((pos + 1) * run));
        }
    }
    return AdequatePartition(tree, std::move(assign));
}

std::vector<std::size_t> to_order(const AdequatePartition& partition) {
    const int k = partition.tree().height();
    std::vector<std::size_t> order;
    order.reserve(partition.ground_size());
    for (std::size_t pos = 0; pos < partition.tree().level_width(k); ++pos)
        order.push_back(partition.block({k, pos})[0]);
    return order;
}

std::pair<AdequatePartition, AdequatePartition> lex_partitions(int r, int s) {
    if (r < 0 || s < 0) throw std::domain_error("lex_partitions: exponents must be >= 0");
    const int k = r + s;
    const std::size_t rows = std::size_t{1} << r;
    const std::size_t cols = std::size_t{1} << s;
    const std::size_t ground = rows * cols;

    std::vector<std::size_t> row_major(ground);
    for (std::size_t j = 0; j < ground; ++j) row_major[j] = j;

    std::vector<std::size_t> col_major(ground);
    for (std::size_t j = 0; j < ground; ++j) {
        const std::size_t b = j / rows;  // column index moves slowest
        const std::size_t a = j % rows;
        col_major[j] = a * cols + b;
    }
    return {from_order(row_major, k), from_order(col_major, k)};
}

FinVec indicator(const AdequatePartition& partition, NodeRef n, const IndexSet& set) {
    if (set.size() != partition.ground_size())
        throw std::domain_error("indicator: index set size does not match the partition");
    return FinVec::indicator(set, partition.block(n));
}

FinVec indicator(const AdequatePartition& partition, NodeRef n) {
    return indicator(partition, n, IndexSet(partition.ground_size()));
}

std::vector<FinVec> indicator_family(const AdequatePartition& partition) {
    const IndexSet set(partition.ground_size());
    std::vector<FinVec> family;
    family.reserve(partition.tree().node_count());
    for (std::size_t h = 0; h < partition.tree().node_count(); ++h)
        family.push_back(indicator(partition, partition.tree().node_at(h), set));
    return family;
}

bool level_sum_check(const AdequatePartition& partition, int level) {
    if (level < 0 || level > partition.tree().height())
        throw std::domain_error("level_sum_check: level out of range");
    std::vector<std::uint32_t> counts(partition.ground_size(), 0);
    for (std::size_t pos = 0; pos < partition.tree().level_width(level); ++pos)
        for (std::size_t i : partition.block({level, pos})) ++counts[i];
    return std::all_of(counts.begin(), counts.end(), [](std::uint32_t c) { return c == 1; });
}

double Log2Vec::norm2() const {
    double sq = 0.0;
    for (std::int64_t c : log2_coeffs) sq += static_cast<double>(c) * static_cast<double>(c);
    return std::numbers::ln2 * std::sqrt(sq);
}

std::int64_t LemmaRsTable::x_coeff(int level) const { return level >= r ? 0 : r - level; }

std::int64_t LemmaRsTable::y_coeff(int level) const {
    return level >= s ? (r + s - level) : r;
}

LemmaRsTable lemma_rs_table(int r, int s) {
    if (r < 0 || s < 0) throw std::domain_error("lemma_rs_table: exponents must be >= 0");
    return LemmaRsTable{r, s};
}

std::vector<std::int64_t> level_coefficient_aggregate(const AdequatePartition& first,
                                                      const AdequatePartition& second,
                                                      std::span<const std::int64_t> cx,
                                                      std::span<const std::int64_t> cy) {
    if (first.ground_size() != second.ground_size() ||
        first.tree().height() != second.tree().height())
        throw std::domain_error("level_coefficient_aggregate: partitions do not match");
    const int k = first.tree().height();
    if (cx.size() != static_cast<std::size_t>(k + 1) || cy.size() != cx.size())
        throw std::domain_error("level_coefficient_aggregate: one coefficient per level required");
    std::vector<std::int64_t> acc(first.ground_size(), 0);
    for (int level = 0; level <= k; ++level) {
        for (std::size_t pos = 0; pos < first.tree().level_width(level); ++pos) {
            for (std::size_t i : first.block({level, pos})) acc[i] += cx[static_cast<std::size_t>(level)];
            for (std::size_t i : second.block({level, pos})) acc[i] -= cy[static_cast<std::size_t>(level)];
        }
    }
    return acc;
}

Log2Vec aggregate_sum(int r, int s) {
    auto [first, second] = lex_partitions(r, s);
    const LemmaRsTable table = lemma_rs_table(r, s);
    const int k = r + s;
    std::vector<std::int64_t> cx(static_cast<std::size_t>(k + 1));
    std::vector<std::int64_t> cy(static_cast<std::size_t>(k + 1));
    for (int level = 0; level <= k; ++level) {
        cx[static_cast<std::size_t>(level)] = table.x_coeff(level);
        cy[static_cast<std::size_t>(level)] = table.y_coeff(level);
    }
    return Log2Vec{level_coefficient_aggregate(first, second, cx, cy)};
}

bool symmetric_aggregate_is_zero(const AdequatePartition& first, const AdequatePartition& second,
                                 std::span<const std::int64_t> level_coeffs) {
    const auto acc = level_coefficient_aggregate(first, second, level_coeffs, level_coeffs);
    return std::all_of(acc.begin(), acc.end(), [](std::int64_t c) { return c == 0; });
}

double rs_table_max_deviation(int r, int s) {
    if (r < 1 || s < 1) throw std::domain_error("rs_table_max_deviation: need r, s >= 1");
    auto [first, second] = lex_partitions(r, s);
    const LemmaRsTable table = lemma_rs_table(r, s);
    const ChunkedKPMap map = grid_chunked(std::size_t{1} << r, std::size_t{1} << s);
    const IndexSet set = map.index_set();
    const std::size_t per_family = first.tree().node_count();

    auto deviation = [&](std::size_t item) {
        const bool is_x = item < per_family;
        const AdequatePartition& part = is_x ? first : second;
        const NodeRef node = part.tree().node_at(is_x ? item : item - per_family);
        const FinVec vec = indicator(part, node, set);
        const std::int64_t coeff = is_x ? table.x_coeff(node.level) : table.y_coeff(node.level);
        const FinVec expected = (static_cast<double>(coeff) * std::numbers::ln2) * vec;
        const double err = pnorm(map(vec) - expected, PNorm(2.0));
        return err / std::max(1.0, pnorm(expected, PNorm(2.0)));
    };
    return std::max(par::max_reduce(2 * per_family, deviation).value, 0.0);
}

}  // namespace twistlab
