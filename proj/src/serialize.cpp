#include "twistlab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace twistlab::io {

json to_json(const FinVec& v) {
    json arr = json::array();
    for (double e : v.entries()) arr.push_back(e);
    return arr;
}

FinVec finvec_from_json(const json& j, const IndexSet& set) {
    if (!j.is_array()) throw std::domain_error("finvec_from_json: expected an array");
    std::vector<double> e;
    e.reserve(j.size());
    for (const auto& item : j) e.push_back(item.get<double>());
    return FinVec(set, std::move(e));
}

json to_json(const IndexSet& set) {
    if (set.grid()) return json{{"m", set.grid()->rows}, {"n", set.grid()->cols}};
    return json{{"size", set.size()}};
}

IndexSet index_set_from_json(const json& j) {
    if (j.contains("m")) return IndexSet(j["m"].get<std::size_t>(), j["n"].get<std::size_t>());
    return IndexSet(j["size"].get<std::size_t>());
}

json to_json(const ConstantEstimate& est) {
    return json{{"value", est.value},
                {"trials", est.trials},
                {"seed", est.seed},
                {"witness", json{{"x", to_json(est.witness_x)}, {"y", to_json(est.witness_y)}}}};
}

json to_json(const AdequatePartition& partition) {
    json obj = json::object();
    const DyadicTree& tree = partition.tree();
    for (std::size_t h = 0; h < tree.node_count(); ++h) {
        const NodeRef n = tree.node_at(h);
        json block = json::array();
        for (std::size_t i : partition.block(n)) block.push_back(i);
        obj[tree.word(n)] = std::move(block);
    }
    return obj;
}

AdequatePartition partition_from_json(const json& j) {
    if (!j.is_object() || !j.contains("")) throw std::domain_error("partition_from_json: missing root block");
    const std::size_t ground = j[""].size();
    int k = 0;
    while ((std::size_t{1} << k) < ground) ++k;
    if ((std::size_t{1} << k) != ground)
        throw std::domain_error("partition_from_json: ground size is not a power of two");
    DyadicTree tree(k);
    std::vector<std::vector<std::size_t>> assign(tree.node_count());
    for (const auto& [word, block] : j.items()) {
        const NodeRef n = tree.parse_word(word);
        auto& dst = assign[tree.heap_index(n)];
        for (const auto& item : block) dst.push_back(item.get<std::size_t>());
    }
    return AdequatePartition(tree, std::move(assign));
}

json to_json(const Log2Vec& v) {
    json coeffs = json::array();
    for (std::int64_t c : v.log2_coeffs) coeffs.push_back(c);
    return json{{"log2_coeffs", std::move(coeffs)}};
}

json to_json(const SolveReport& report) {
    return json{{"k", report.r + report.s},
                {"r", report.r},
                {"s", report.s},
                {"map_kind", report.map_kind},
                {"K_star", report.K_star},
                {"lower_bound", report.lower_bound},
                {"iterations", report.iterations},
                {"residual", report.max_constraint_residual},
                {"seed", report.seed},
                {"status", report.status}};
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace twistlab::io
