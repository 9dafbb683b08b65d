#pragma once

#include <string>

#include <json.hpp>

#include "twistlab/core.hpp"
#include "twistlab/dyadic.hpp"
#include "twistlab/qmap.hpp"
#include "twistlab/witness.hpp"

namespace twistlab::io {

using json = nlohmann::ordered_json;

// Vectors serialize as bare arrays of numbers; index sets with grid
// structure as {"m": rows, "n": cols} with row-major index i <-> (i/n, i%n).
json to_json(const FinVec& v);
FinVec finvec_from_json(const json& j, const IndexSet& set);

json to_json(const IndexSet& set);
IndexSet index_set_from_json(const json& j);

json to_json(const ConstantEstimate& est);

// Partition as a map from tree word (root = "") to sorted index array.
json to_json(const AdequatePartition& partition);
AdequatePartition partition_from_json(const json& j);

json to_json(const Log2Vec& v);

json to_json(const SolveReport& report);

// Fixed formatting for diffable text output: '.' decimal separator, 17
// significant digits.
std::string format_double(double value);

}  // namespace twistlab::io
