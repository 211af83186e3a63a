#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "provcf/errors.hpp"
#include "provcf/record.hpp"
#include "provcf/rng.hpp"

namespace provcf {

// Desk-scale stand-in for audit-log corpora: benign host-activity patterns
// with attack motifs planted into a benign background. Edges keep the
// Process-as-source discipline of audit relations.

enum class Motif { ExecChain, C2Beacon, ScanFan };
enum class BenignPattern { Star, Tree, SparseRandom };

inline const char* motif_name(Motif m) {
    switch (m) {
        case Motif::ExecChain: return "ExecChain";
        case Motif::C2Beacon: return "C2Beacon";
        case Motif::ScanFan: return "ScanFan";
    }
    return "ExecChain";
}

inline Motif parse_motif(const std::string& s) {
    if (s == "ExecChain") return Motif::ExecChain;
    if (s == "C2Beacon") return Motif::C2Beacon;
    if (s == "ScanFan") return Motif::ScanFan;
    throw DataError("unknown motif: " + s);
}

inline const char* pattern_name(BenignPattern p) {
    switch (p) {
        case BenignPattern::Star: return "Star";
        case BenignPattern::Tree: return "Tree";
        case BenignPattern::SparseRandom: return "SparseRandom";
    }
    return "Star";
}

inline BenignPattern parse_pattern(const std::string& s) {
    if (s == "Star") return BenignPattern::Star;
    if (s == "Tree") return BenignPattern::Tree;
    if (s == "SparseRandom") return BenignPattern::SparseRandom;
    throw DataError("unknown benign pattern: " + s);
}

struct CorpusSpec {
    std::size_t n_benign = 350;
    std::size_t n_malicious = 150;
    std::pair<std::size_t, std::size_t> node_range{20, 80};
    std::vector<Motif> motif_set{Motif::ExecChain, Motif::C2Beacon, Motif::ScanFan};
    std::vector<BenignPattern> benign_patterns{BenignPattern::Star, BenignPattern::Tree,
                                               BenignPattern::SparseRandom};
    std::uint64_t seed = 1;
};

namespace detail {

struct Builder {
    NodeId next_id;
    std::vector<NodeId> nodes;
    std::vector<NodeKind> kinds;
    std::set<Edge> edges;

    NodeId fresh(NodeKind k) {
        nodes.push_back(next_id);
        kinds.push_back(k);
        return next_id++;
    }

    void link(NodeId src, NodeId dst) {
        if (src != dst) edges.insert(Edge{src, dst});
    }

    std::vector<NodeId> processes() const {
        std::vector<NodeId> out;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (kinds[i] == NodeKind::Process) out.push_back(nodes[i]);
        return out;
    }
};

inline NodeKind leaf_kind(Rng& rng) {
    const double u = rng.uniform();
    if (u < 0.4) return NodeKind::File;
    if (u < 0.7) return NodeKind::Socket;
    if (u < 0.85) return NodeKind::Process;
    return NodeKind::Memory;
}

inline void grow_benign(Builder& b, BenignPattern pattern, std::size_t n, Rng& rng) {
    if (n < 2) n = 2;
    switch (pattern) {
        case BenignPattern::Star: {
            const NodeId hub = b.fresh(NodeKind::Process);
            for (std::size_t i = 1; i < n; ++i) b.link(hub, b.fresh(leaf_kind(rng)));
            break;
        }
        case BenignPattern::Tree: {
            std::vector<NodeId> procs{b.fresh(NodeKind::Process)};
            for (std::size_t i = 1; i < n; ++i) {
                const NodeId parent = procs[rng.below(procs.size())];
                const NodeKind k = leaf_kind(rng);
                const NodeId child = b.fresh(k);
                b.link(parent, child);
                if (k == NodeKind::Process) procs.push_back(child);
            }
            break;
        }
        case BenignPattern::SparseRandom: {
            std::vector<NodeId> procs{b.fresh(NodeKind::Process)};
            std::vector<NodeId> all{procs[0]};
            for (std::size_t i = 1; i < n; ++i) {
                const NodeKind k = leaf_kind(rng);
                const NodeId v = b.fresh(k);
                b.link(procs[rng.below(procs.size())], v); // spanning attachment
                all.push_back(v);
                if (k == NodeKind::Process) procs.push_back(v);
            }
            const std::size_t extra = n / 3;
            for (std::size_t e = 0; e < extra; ++e)
                b.link(procs[rng.below(procs.size())], all[rng.below(all.size())]);
            break;
        }
    }
}

// Plants a motif of roughly `budget` nodes; returns its node set (= attack
// nodes). Every variant is multi-stage — an execution chain reaching a hub
// stage — mirroring foothold -> C2 -> action-on-objective.
inline std::vector<NodeId> plant_motif(Builder& b, Motif motif, std::size_t budget, Rng& rng) {
    if (budget < 8) budget = 8;
    std::vector<NodeId> motif_nodes;
    auto fresh = [&](NodeKind k) {
        const NodeId id = b.fresh(k);
        motif_nodes.push_back(id);
        return id;
    };
    auto chain = [&](std::size_t len) {
        NodeId prev = fresh(NodeKind::Process);
        for (std::size_t i = 1; i < len; ++i) {
            const NodeId p = fresh(NodeKind::Process);
            b.link(prev, p);
            prev = p;
        }
        return prev;
    };
    switch (motif) {
        case Motif::ExecChain: {
            // staged execution; each stage drops a scratch file, the tail
            // opens a small C2 fan
            const std::size_t len = std::max<std::size_t>(4, budget * 2 / 5);
            NodeId prev = fresh(NodeKind::Process);
            for (std::size_t i = 1; i < len; ++i) {
                const NodeId p = fresh(NodeKind::Process);
                b.link(prev, p);
                b.link(p, fresh(NodeKind::File));
                prev = p;
            }
            const std::size_t fan = std::max<std::size_t>(2, budget - (2 * len - 1));
            for (std::size_t i = 0; i < fan; ++i) b.link(prev, fresh(NodeKind::Socket));
            break;
        }
        case Motif::C2Beacon: {
            // dropper chain into an agent beaconing to many endpoints
            const std::size_t pre = static_cast<std::size_t>(rng.range(2, 3));
            const NodeId dropper = chain(pre);
            const NodeId agent = fresh(NodeKind::Process);
            b.link(dropper, agent);
            const std::size_t beacons = std::max<std::size_t>(6, budget - pre - 3);
            for (std::size_t i = 0; i < beacons; ++i) b.link(agent, fresh(NodeKind::Socket));
            const NodeId payload = fresh(NodeKind::File);
            b.link(agent, payload);
            const NodeId loader = fresh(NodeKind::Process);
            b.link(loader, payload);
            b.link(loader, agent);
            break;
        }
        case Motif::ScanFan: {
            const std::size_t pre = static_cast<std::size_t>(rng.range(2, 3));
            const NodeId entry = chain(pre);
            const NodeId scanner = fresh(NodeKind::Process);
            b.link(entry, scanner);
            const std::size_t targets = std::max<std::size_t>(8, budget - pre - 2);
            for (std::size_t i = 0; i < targets; ++i) b.link(scanner, fresh(NodeKind::Socket));
            b.link(scanner, fresh(NodeKind::File));
            break;
        }
    }
    return motif_nodes;
}

} // namespace detail

inline void validate(const CorpusSpec& spec) {
    if (spec.n_benign < 1 || spec.n_malicious < 1)
        throw ContractError("corpus spec: need at least one record per class");
    if (spec.node_range.first < 10 || spec.node_range.second > 500 ||
        spec.node_range.first > spec.node_range.second)
        throw ContractError("corpus spec: node_range must lie within [10, 500]");
    if (spec.motif_set.empty() || spec.benign_patterns.empty())
        throw ContractError("corpus spec: motif and pattern sets must be non-empty");
}

inline std::vector<SubgraphRecord> generate_corpus(const CorpusSpec& spec) {
    validate(spec);
    std::vector<SubgraphRecord> out;
    out.reserve(spec.n_benign + spec.n_malicious);
    NodeId next_id = 1;
    const std::size_t total = spec.n_benign + spec.n_malicious;
    for (std::size_t i = 0; i < total; ++i) {
        Rng rng(derive_seed(spec.seed, "record", i));
        const bool malicious = i >= spec.n_benign;
        const std::size_t n =
            static_cast<std::size_t>(rng.range(static_cast<std::int64_t>(spec.node_range.first),
                                               static_cast<std::int64_t>(spec.node_range.second)));
        detail::Builder b{next_id};
        SubgraphRecord rec;
        rec.id = static_cast<int>(i);
        if (malicious) {
            const Motif motif = spec.motif_set[rng.below(spec.motif_set.size())];
            const auto pattern = spec.benign_patterns[rng.below(spec.benign_patterns.size())];
            // the attack stage occupies 25-45% of the record
            const std::size_t budget =
                static_cast<std::size_t>(rng.uniform(0.25, 0.45) * static_cast<double>(n));
            auto attack = detail::plant_motif(b, motif, budget, rng);
            const std::size_t bg =
                n > b.nodes.size() + 10 ? n - b.nodes.size() : 10;
            const std::size_t before_bg = b.nodes.size();
            detail::grow_benign(b, pattern, bg, rng);
            // bridge the camouflage background into the motif entry
            std::vector<NodeId> bg_procs;
            for (std::size_t k = before_bg; k < b.nodes.size(); ++k)
                if (b.kinds[k] == NodeKind::Process) bg_procs.push_back(b.nodes[k]);
            const std::size_t bridges = 1 + rng.below(2);
            for (std::size_t br = 0; br < bridges && !bg_procs.empty(); ++br)
                b.link(bg_procs[rng.below(bg_procs.size())], attack[rng.below(attack.size())]);
            rec.attack_nodes = std::move(attack);
            rec.label = 1;
        } else {
            const auto pattern = spec.benign_patterns[rng.below(spec.benign_patterns.size())];
            detail::grow_benign(b, pattern, n, rng);
            rec.label = 0;
        }
        next_id = b.next_id;
        rec.nodes = std::move(b.nodes);
        rec.kinds = std::move(b.kinds);
        rec.edges.assign(b.edges.begin(), b.edges.end());
        // builder emits nodes in ascending id order already; normalize() would
        // reorder kinds out from under us, so sort edges/attack only
        std::sort(rec.attack_nodes.begin(), rec.attack_nodes.end());
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace provcf
