#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "provcf/errors.hpp"
#include "provcf/record.hpp"
#include "provcf/rng.hpp"
#include "provcf/tape.hpp"
#include "provcf/tensor.hpp"

namespace provcf {

// Dense tensors for one record, plus the support-cell map that ties each
// adjacency cell back to the record edge feeding it. Row order is ascending
// node id. With symmetrize on, an edge also populates its mirror cell unless
// the reverse edge is stored in its own right.
struct GraphView {
    std::size_t n = 0;
    std::vector<NodeId> ids;        // row -> node id
    Tensor adjacency;               // n×n, {0,1} for unperturbed graphs
    Tensor features;                // n×d
    std::vector<ScatterCell> cells; // support cells; src_index = edge index
    std::size_t edge_count = 0;     // mask length

    std::size_t row_of(NodeId id) const {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id) throw ContractError("row_of: id not in view");
        return static_cast<std::size_t>(it - ids.begin());
    }
};

// Structural node features: one-hot kind (4) | log1p(degree) (1) | seeded
// random tail (d-5). The random tail is a pure function of (node id, seed),
// so a node keeps its features across records and runs.
inline Tensor build_features(const SubgraphRecord& rec, std::uint64_t seed,
                             std::size_t feature_dim = 16) {
    if (feature_dim < 6) throw ContractError("build_features: feature_dim must be >= 6");
    const std::size_t n = rec.nodes.size();
    Tensor x(n, feature_dim);
    std::vector<std::size_t> degree(n, 0);
    for (const Edge& e : rec.edges) {
        ++degree[rec.node_index(e.src)];
        ++degree[rec.node_index(e.dst)];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const NodeKind kind = i < rec.kinds.size() ? rec.kinds[i] : derived_kind(rec.nodes[i]);
        x.at(i, static_cast<std::size_t>(kind)) = 1.0;
        x.at(i, 4) = std::log1p(static_cast<double>(degree[i]));
        Rng r(derive_seed(seed, "node-feature", static_cast<std::uint64_t>(rec.nodes[i])));
        for (std::size_t j = 5; j < feature_dim; ++j) x.at(i, j) = r.normal();
    }
    return x;
}

inline GraphView make_view(const SubgraphRecord& rec, std::uint64_t feature_seed,
                           std::size_t feature_dim, bool symmetrize) {
    GraphView v;
    v.n = rec.nodes.size();
    v.ids = rec.nodes;
    v.edge_count = rec.edges.size();
    v.adjacency = Tensor(v.n, v.n);
    v.features = build_features(rec, feature_seed, feature_dim);
    for (std::size_t k = 0; k < rec.edges.size(); ++k) {
        const Edge& e = rec.edges[k];
        const std::size_t r = rec.node_index(e.src);
        const std::size_t c = rec.node_index(e.dst);
        v.cells.push_back({r, c, k});
        if (symmetrize && !rec.has_edge(Edge{e.dst, e.src})) v.cells.push_back({c, r, k});
    }
    for (const auto& cell : v.cells) v.adjacency.at(cell.row, cell.col) = 1.0;
    return v;
}

// Hard-delete the listed record edges from a view: their cells go to exactly
// zero and leave the support. Features are untouched.
inline GraphView zero_edges(const GraphView& v, const SubgraphRecord& rec,
                            const std::vector<Edge>& removed) {
    std::set<std::size_t> gone;
    for (const Edge& e : removed) {
        auto it = std::lower_bound(rec.edges.begin(), rec.edges.end(), e);
        if (it == rec.edges.end() || *it != e)
            throw ContractError("zero_edges: edge not in record");
        gone.insert(static_cast<std::size_t>(it - rec.edges.begin()));
    }
    GraphView out = v;
    out.cells.clear();
    for (const auto& cell : v.cells) {
        if (gone.count(cell.src_index)) {
            out.adjacency.at(cell.row, cell.col) = 0.0;
        } else {
            out.cells.push_back(cell);
        }
    }
    return out;
}

// Resample the random feature slots of the given rows (§ node randomization
// for qualitative counterfactuals). Kind one-hot and degree slots stay.
inline void randomize_node_features(GraphView& v, const std::vector<std::size_t>& rows,
                                    std::uint64_t seed) {
    for (std::size_t i : rows) {
        Rng r(derive_seed(seed, "node-feature-resample", static_cast<std::uint64_t>(v.ids[i])));
        for (std::size_t j = 5; j < v.features.cols; ++j) v.features.at(i, j) = r.normal();
    }
}

} // namespace provcf
