#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "provcf/errors.hpp"
#include "provcf/graph.hpp"
#include "provcf/record.hpp"

namespace provcf {

struct PartitionConfig {
    std::size_t s_max = 100;  // pre-expansion community size cap
    double resolution = 1.0;  // modularity resolution
    std::uint64_t rng_seed = 0;
};

namespace detail {

// Undirected simple-graph view with contiguous indices, the shape Louvain
// wants. Weights are 1 per distinct undirected pair.
struct CompactGraph {
    std::vector<NodeId> ids;                                  // index -> node id
    std::vector<std::vector<std::pair<int, double>>> adj;     // neighbor, weight
    std::vector<double> loop;                                 // self-loop weight
    double total2 = 0.0;                                      // sum of degrees (2m)

    double degree(int u) const {
        double d = 2.0 * loop[u];
        for (const auto& [v, w] : adj[u]) d += w;
        return d;
    }
};

inline CompactGraph compact_undirected(const ProvenanceGraph& g) {
    CompactGraph cg;
    cg.ids.reserve(g.node_count());
    for (const auto& [id, _] : g.nodes()) cg.ids.push_back(id);
    std::map<NodeId, int> index;
    for (int i = 0; i < static_cast<int>(cg.ids.size()); ++i) index[cg.ids[i]] = i;
    cg.adj.resize(cg.ids.size());
    cg.loop.assign(cg.ids.size(), 0.0);
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : g.edges()) {
        int a = index[e.src], b = index[e.dst];
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) continue;
        cg.adj[a].push_back({b, 1.0});
        cg.adj[b].push_back({a, 1.0});
    }
    for (int u = 0; u < static_cast<int>(cg.adj.size()); ++u) cg.total2 += cg.degree(u);
    return cg;
}

// One Louvain level: greedy local moves, ascending index order, strict gain.
// Returns true if any node moved.
inline bool louvain_move_phase(const CompactGraph& g, std::vector<int>& comm, double resolution) {
    const int n = static_cast<int>(g.ids.size());
    std::vector<double> tot(n, 0.0);
    for (int u = 0; u < n; ++u) tot[comm[u]] += g.degree(u);
    bool any_move = false;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int u = 0; u < n; ++u) {
            const int cu = comm[u];
            const double ku = g.degree(u);
            // Link weight from u to each adjacent community.
            std::map<int, double> to_comm;
            to_comm[cu] += 0.0;
            for (const auto& [v, w] : g.adj[u])
                if (v != u) to_comm[comm[v]] += w;
            tot[cu] -= ku;
            const double stay =
                to_comm[cu] - resolution * ku * tot[cu] / g.total2;
            int best_c = cu;
            double best_gain = stay;
            for (const auto& [c, kuc] : to_comm) {
                if (c == cu) continue;
                const double gain = kuc - resolution * ku * tot[c] / g.total2;
                if (gain > best_gain + 1e-12) { // strict improvement only
                    best_gain = gain;
                    best_c = c;
                }
            }
            tot[best_c] += ku;
            if (best_c != cu) {
                comm[u] = best_c;
                improved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

// Collapse communities to supernodes; community order follows the smallest
// original index they contain.
inline CompactGraph aggregate(const CompactGraph& g, const std::vector<int>& comm,
                              std::vector<int>& renumber) {
    const int n = static_cast<int>(g.ids.size());
    renumber.assign(n, -1);
    int next = 0;
    for (int u = 0; u < n; ++u)
        if (renumber[comm[u]] == -1) renumber[comm[u]] = next++;
    CompactGraph out;
    out.ids.resize(next); // synthetic ids; only structure matters past level 0
    for (int c = 0; c < next; ++c) out.ids[c] = c;
    out.adj.resize(next);
    out.loop.assign(next, 0.0);
    std::map<std::pair<int, int>, double> agg;
    for (int u = 0; u < n; ++u) {
        const int cu = renumber[comm[u]];
        out.loop[cu] += g.loop[u];
        for (const auto& [v, w] : g.adj[u]) {
            const int cv = renumber[comm[v]];
            if (cu == cv) {
                if (u < v) out.loop[cu] += w;
            } else {
                int a = cu, b = cv;
                if (a > b) std::swap(a, b);
                agg[{a, b}] += w / 2.0; // each cross edge is visited from both ends
            }
        }
    }
    for (const auto& [key, w] : agg) {
        out.adj[key.first].push_back({key.second, w});
        out.adj[key.second].push_back({key.first, w});
    }
    for (int u = 0; u < next; ++u) out.total2 += out.degree(u);
    return out;
}

} // namespace detail

// Modularity of a node-id partition under the symmetrized simple-graph view.
inline double modularity(const ProvenanceGraph& g, const std::vector<std::vector<NodeId>>& parts,
                         double resolution = 1.0) {
    auto cg = detail::compact_undirected(g);
    std::map<NodeId, int> part_of;
    for (int p = 0; p < static_cast<int>(parts.size()); ++p)
        for (NodeId id : parts[p]) part_of[id] = p;
    std::vector<double> inside(parts.size(), 0.0), tot(parts.size(), 0.0);
    for (int u = 0; u < static_cast<int>(cg.ids.size()); ++u) {
        const int cu = part_of.at(cg.ids[u]);
        tot[cu] += cg.degree(u);
        for (const auto& [v, w] : cg.adj[u])
            if (part_of.at(cg.ids[v]) == cu) inside[cu] += w; // both directions counted
    }
    double q = 0.0;
    const double m2 = cg.total2;
    if (m2 == 0.0) return 0.0;
    for (std::size_t c = 0; c < parts.size(); ++c)
        q += inside[c] / m2 - resolution * (tot[c] / m2) * (tot[c] / m2);
    return q;
}

// Louvain community detection over the symmetrized view. Deterministic:
// nodes visited in ascending id order, moves accepted on strict gain only.
inline std::vector<std::vector<NodeId>> louvain_communities(const ProvenanceGraph& g,
                                                            const PartitionConfig& cfg) {
    if (g.edge_count() == 0)
        throw ContractError("louvain_communities: graph has no edges; use partition_by_size");
    auto level = detail::compact_undirected(g);
    // membership[i]: community of original node i, updated across levels
    std::vector<int> membership(level.ids.size());
    for (std::size_t i = 0; i < membership.size(); ++i) membership[i] = static_cast<int>(i);

    while (true) {
        std::vector<int> comm(level.ids.size());
        for (std::size_t i = 0; i < comm.size(); ++i) comm[i] = static_cast<int>(i);
        const bool moved = detail::louvain_move_phase(level, comm, cfg.resolution);
        if (!moved) break;
        std::vector<int> renumber;
        auto next_level = detail::aggregate(level, comm, renumber);
        for (auto& m : membership) m = renumber[comm[m]];
        level = std::move(next_level);
        if (level.ids.size() <= 1) break;
    }

    auto base = detail::compact_undirected(g);
    std::map<int, std::vector<NodeId>> groups;
    for (std::size_t i = 0; i < membership.size(); ++i)
        groups[membership[i]].push_back(base.ids[i]);
    std::vector<std::vector<NodeId>> out;
    out.reserve(groups.size());
    for (auto& [_, nodes] : groups) {
        std::sort(nodes.begin(), nodes.end());
        out.push_back(std::move(nodes));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

// Sequential chunks of at most s_max nodes; concatenation preserves order.
inline std::vector<std::vector<NodeId>> partition_by_size(const std::vector<NodeId>& nodes,
                                                          std::size_t s_max) {
    if (s_max < 2) throw ContractError("partition_by_size: s_max must be >= 2");
    std::vector<std::vector<NodeId>> out;
    for (std::size_t i = 0; i < nodes.size(); i += s_max) {
        out.emplace_back(nodes.begin() + static_cast<std::ptrdiff_t>(i),
                         nodes.begin() + static_cast<std::ptrdiff_t>(std::min(i + s_max, nodes.size())));
    }
    return out;
}

// Split an oversize community into ≤ s_max pieces by ascending node id.
inline std::vector<std::vector<NodeId>> split_oversize(const std::vector<NodeId>& community,
                                                       std::size_t s_max) {
    if (community.size() <= s_max)
        throw ContractError("split_oversize: community does not exceed s_max");
    std::vector<NodeId> sorted = community;
    std::sort(sorted.begin(), sorted.end());
    return partition_by_size(sorted, s_max);
}

// One-hop contextual expansion for partitions whose induced subgraph has no
// edges: pull in direct neighbors plus every graph edge touching the
// partition.
inline std::pair<std::vector<NodeId>, std::vector<Edge>> expand_context(
    const ProvenanceGraph& g, const std::vector<NodeId>& p) {
    std::set<NodeId> in_p(p.begin(), p.end());
    for (const Edge& e : g.edges())
        if (in_p.count(e.src) && in_p.count(e.dst))
            throw ContractError("expand_context: partition already has internal edges");
    std::set<NodeId> n_out(in_p);
    std::vector<Edge> e_out;
    for (const Edge& e : g.edges()) {
        if (in_p.count(e.src) || in_p.count(e.dst)) {
            n_out.insert(e.src);
            n_out.insert(e.dst);
            e_out.push_back(e);
        }
    }
    std::sort(e_out.begin(), e_out.end());
    return {std::vector<NodeId>(n_out.begin(), n_out.end()), std::move(e_out)};
}

// Full partitioning pass: preprocess, detect communities, cap sizes, expand
// internally disconnected partitions, label by attack-node intersection.
inline std::vector<SubgraphRecord> partition_graph(const ProvenanceGraph& g,
                                                   const PartitionConfig& cfg) {
    const ProvenanceGraph pre = remove_isolated(g);

    std::vector<std::vector<NodeId>> parts;
    if (pre.edge_count() == 0) {
        std::vector<NodeId> all;
        for (const auto& [id, _] : pre.nodes()) all.push_back(id);
        parts = partition_by_size(all, cfg.s_max);
    } else {
        for (auto& c : louvain_communities(pre, cfg)) {
            if (c.size() > cfg.s_max) {
                for (auto& piece : split_oversize(c, cfg.s_max)) parts.push_back(std::move(piece));
            } else {
                parts.push_back(std::move(c));
            }
        }
    }

    const std::set<NodeId>& attack = pre.attack_nodes();
    std::vector<SubgraphRecord> records;
    records.reserve(parts.size());
    int next_id = 0;
    for (const auto& p : parts) {
        std::set<NodeId> in_p(p.begin(), p.end());
        std::vector<Edge> induced;
        for (const Edge& e : pre.edges())
            if (in_p.count(e.src) && in_p.count(e.dst)) induced.push_back(e);

        SubgraphRecord rec;
        rec.id = next_id++;
        if (induced.empty()) {
            auto [n_out, e_out] = expand_context(pre, p);
            rec.nodes = std::move(n_out);
            rec.edges = std::move(e_out);
            rec.expanded = true;
        } else {
            rec.nodes = p;
            rec.edges = std::move(induced);
        }
        rec.normalize();
        for (NodeId n : rec.nodes) {
            rec.kinds.push_back(pre.node(n).kind);
            if (attack.count(n)) rec.attack_nodes.push_back(n);
        }
        rec.label = rec.attack_nodes.empty() ? 0 : 1;
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace provcf
