#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "provcf/errors.hpp"
#include "provcf/graph.hpp"
#include "provcf/rng.hpp"

namespace provcf {

// A bounded, labeled partition of a provenance graph: the unit of detection
// and explanation. Nodes and edges are kept sorted; node kinds and per-record
// attack nodes travel alongside for feature building and ground-truth
// scoring.
struct SubgraphRecord {
    int id = 0;
    std::vector<NodeId> nodes;        // ascending
    std::vector<Edge> edges;          // ascending (src, dst), deduplicated
    int label = 0;                    // 1 iff nodes ∩ attack_nodes ≠ ∅
    bool expanded = false;            // one-hop context was added
    std::vector<NodeKind> kinds;      // parallel to nodes
    std::vector<NodeId> attack_nodes; // ascending, subset of nodes

    std::size_t node_index(NodeId id_) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), id_);
        if (it == nodes.end() || *it != id_)
            throw ContractError("node_index: id " + std::to_string(id_) + " not in record");
        return static_cast<std::size_t>(it - nodes.begin());
    }

    bool has_edge(const Edge& e) const {
        return std::binary_search(edges.begin(), edges.end(), e);
    }

    void normalize() {
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        std::sort(attack_nodes.begin(), attack_nodes.end());
        attack_nodes.erase(std::unique(attack_nodes.begin(), attack_nodes.end()),
                           attack_nodes.end());
    }
};

inline int label_from_attack(const std::vector<NodeId>& nodes, const std::set<NodeId>& attack) {
    for (NodeId n : nodes)
        if (attack.count(n)) return 1;
    return 0;
}

// Kind lookup for records loaded without a kinds sidecar: derived from the
// node id alone so it is stable across runs and processes.
inline NodeKind derived_kind(NodeId id) {
    Rng r(static_cast<std::uint64_t>(id) * 0x9e3779b97f4a7c15ull + 0x5851f42d4c957f2dull);
    return static_cast<NodeKind>(r.below(4));
}

// --- four-line record format -----------------------------------------------
//
//   line 1: "# <id>"
//   line 2: space-separated node ids
//   line 3: space-separated "src:dst" pairs (may be empty)
//   line 4: "0" or "1"
//
// A corpus file is a sequence of such blocks.

inline void write_record(std::ostream& out, const SubgraphRecord& rec) {
    out << "# " << rec.id << '\n';
    for (std::size_t i = 0; i < rec.nodes.size(); ++i)
        out << (i ? " " : "") << rec.nodes[i];
    out << '\n';
    for (std::size_t i = 0; i < rec.edges.size(); ++i)
        out << (i ? " " : "") << rec.edges[i].src << ':' << rec.edges[i].dst;
    out << '\n';
    out << rec.label << '\n';
}

inline void write_records(const std::vector<SubgraphRecord>& recs,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    for (const auto& r : recs) write_record(out, r);
}

inline std::vector<SubgraphRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open record file: " + path.string());
    std::vector<SubgraphRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.rfind("# ", 0) != 0)
            throw DataError("line " + std::to_string(line_no) + ": expected '# <id>' header");
        SubgraphRecord rec;
        try {
            rec.id = std::stoi(line.substr(2));
        } catch (...) {
            throw DataError("line " + std::to_string(line_no) + ": bad record id");
        }

        if (!std::getline(in, line))
            throw DataError("line " + std::to_string(line_no) + ": truncated record (nodes)");
        ++line_no;
        {
            std::istringstream ss(line);
            NodeId v;
            while (ss >> v) rec.nodes.push_back(v);
            if (!ss.eof())
                throw DataError("line " + std::to_string(line_no) + ": bad node list");
        }

        if (!std::getline(in, line))
            throw DataError("line " + std::to_string(line_no) + ": truncated record (edges)");
        ++line_no;
        {
            std::istringstream ss(line);
            std::string tok;
            while (ss >> tok) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos)
                    throw DataError("line " + std::to_string(line_no) +
                                    ": edge token missing ':' separator: " + tok);
                try {
                    Edge e{std::stoll(tok.substr(0, colon)), std::stoll(tok.substr(colon + 1))};
                    rec.edges.push_back(e);
                } catch (...) {
                    throw DataError("line " + std::to_string(line_no) + ": bad edge token: " + tok);
                }
            }
        }

        if (!std::getline(in, line))
            throw DataError("line " + std::to_string(line_no) + ": truncated record (label)");
        ++line_no;
        if (line != "0" && line != "1")
            throw DataError("line " + std::to_string(line_no) + ": label must be 0 or 1, got '" +
                            line + "'");
        rec.label = line == "1" ? 1 : 0;

        rec.normalize();
        for (const Edge& e : rec.edges)
            if (!std::binary_search(rec.nodes.begin(), rec.nodes.end(), e.src) ||
                !std::binary_search(rec.nodes.begin(), rec.nodes.end(), e.dst))
                throw DataError("record " + std::to_string(rec.id) +
                                ": edge endpoint not in node list");
        rec.kinds.reserve(rec.nodes.size());
        for (NodeId nid : rec.nodes) rec.kinds.push_back(derived_kind(nid));
        out.push_back(std::move(rec));
    }
    return out;
}

// --- sidecars ---------------------------------------------------------------

// Attack-node sidecar: one id per line (same format ingest_attack_nodes reads).
inline void write_attack_sidecar(const std::set<NodeId>& attack,
                                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    for (NodeId a : attack) out << a << '\n';
}

inline std::set<NodeId> read_attack_sidecar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open attack-node file: " + path.string());
    std::set<NodeId> attack;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        attack.insert(detail::parse_id(line, line_no));
    }
    return attack;
}

// Node-kind sidecar: "<id>\t<Kind>" per line. Optional; absent kinds fall
// back to derived_kind.
inline void write_kinds_sidecar(const std::vector<SubgraphRecord>& recs,
                                const std::filesystem::path& path) {
    std::map<NodeId, NodeKind> kinds;
    for (const auto& r : recs)
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            if (i < r.kinds.size()) kinds[r.nodes[i]] = r.kinds[i];
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    for (const auto& [id, k] : kinds) out << id << '\t' << kind_name(k) << '\n';
}

inline std::map<NodeId, NodeKind> read_kinds_sidecar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open kinds file: " + path.string());
    std::map<NodeId, NodeKind> kinds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = detail::split_tabs(line);
        if (fields.size() != 2)
            throw DataError("line " + std::to_string(line_no) + ": expected '<id>\\t<Kind>'");
        kinds[detail::parse_id(fields[0], line_no)] = parse_kind(fields[1], line_no);
    }
    return kinds;
}

// Apply sidecar data to records loaded from a bare corpus file: attack nodes
// relabel consistency is enforced, kinds override the derived fallback.
inline void apply_sidecars(std::vector<SubgraphRecord>& recs,
                           const std::set<NodeId>* attack,
                           const std::map<NodeId, NodeKind>* kinds) {
    for (auto& r : recs) {
        if (attack) {
            r.attack_nodes.clear();
            for (NodeId n : r.nodes)
                if (attack->count(n)) r.attack_nodes.push_back(n);
            const int expect = r.attack_nodes.empty() ? 0 : 1;
            if (expect != r.label)
                throw DataError("record " + std::to_string(r.id) +
                                ": stored label disagrees with attack-node intersection");
        }
        if (kinds) {
            for (std::size_t i = 0; i < r.nodes.size(); ++i) {
                auto it = kinds->find(r.nodes[i]);
                if (it != kinds->end()) r.kinds[i] = it->second;
            }
        }
    }
}

// Loads "<base>.sub" plus optional "<base>.attack" / "<base>.kinds" sidecars.
inline std::vector<SubgraphRecord> read_corpus(const std::filesystem::path& base) {
    auto recs = read_records(base.string() + ".sub");
    std::optional<std::set<NodeId>> attack;
    std::optional<std::map<NodeId, NodeKind>> kinds;
    if (std::filesystem::exists(base.string() + ".attack"))
        attack = read_attack_sidecar(base.string() + ".attack");
    if (std::filesystem::exists(base.string() + ".kinds"))
        kinds = read_kinds_sidecar(base.string() + ".kinds");
    apply_sidecars(recs, attack ? &*attack : nullptr, kinds ? &*kinds : nullptr);
    return recs;
}

inline void write_corpus(const std::vector<SubgraphRecord>& recs,
                         const std::filesystem::path& base) {
    write_records(recs, base.string() + ".sub");
    std::set<NodeId> attack;
    for (const auto& r : recs) attack.insert(r.attack_nodes.begin(), r.attack_nodes.end());
    write_attack_sidecar(attack, base.string() + ".attack");
    write_kinds_sidecar(recs, base.string() + ".kinds");
}

} // namespace provcf
