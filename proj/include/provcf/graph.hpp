#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "provcf/errors.hpp"

namespace provcf {

using NodeId = std::int64_t;

enum class NodeKind : std::uint8_t { Process = 0, File = 1, Socket = 2, Memory = 3 };

inline const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Process: return "Process";
        case NodeKind::File: return "File";
        case NodeKind::Socket: return "Socket";
        case NodeKind::Memory: return "Memory";
    }
    return "Process";
}

inline NodeKind parse_kind(std::string_view s, std::size_t line_no) {
    if (s == "Process") return NodeKind::Process;
    if (s == "File") return NodeKind::File;
    if (s == "Socket") return NodeKind::Socket;
    if (s == "Memory") return NodeKind::Memory;
    throw DataError("line " + std::to_string(line_no) + ": unknown node kind '" + std::string(s) +
                    "'");
}

struct NodeRef {
    NodeId id = 0;
    NodeKind kind = NodeKind::Process;
    std::string name; // report-only label; never enters features
};

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Directed provenance graph. Duplicate audit events collapse to one edge;
// self-loops are rejected. Treat as immutable once built.
class ProvenanceGraph {
public:
    void add_node(NodeId id, NodeKind kind, std::string name = {}) {
        auto [it, inserted] = nodes_.try_emplace(id, NodeRef{id, kind, std::move(name)});
        if (!inserted && it->second.kind != kind)
            throw DataError("node " + std::to_string(id) + ": kind redeclared as " +
                            kind_name(kind) + ", was " + kind_name(it->second.kind));
    }

    void add_edge(NodeId src, NodeId dst) {
        if (src == dst)
            throw DataError("rejected edge: self-loop on node " + std::to_string(src));
        if (!nodes_.count(src) || !nodes_.count(dst))
            throw ContractError("add_edge: endpoint not declared");
        edges_.insert(Edge{src, dst});
    }

    bool has_node(NodeId id) const { return nodes_.count(id) > 0; }

    const NodeRef& node(NodeId id) const {
        auto it = nodes_.find(id);
        if (it == nodes_.end()) throw ContractError("node: unknown id " + std::to_string(id));
        return it->second;
    }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::map<NodeId, NodeRef>& nodes() const { return nodes_; }
    const std::set<Edge>& edges() const { return edges_; }

    const std::set<NodeId>& attack_nodes() const { return attack_; }
    void set_attack_nodes(std::set<NodeId> a) { attack_ = std::move(a); }

    // in + out degree, parallel directions counted separately
    std::size_t degree(NodeId id) const {
        std::size_t d = 0;
        for (const Edge& e : edges_)
            if (e.src == id || e.dst == id) ++d;
        return d;
    }

    // Undirected neighbor sets (symmetrized view), keyed by node id.
    std::map<NodeId, std::set<NodeId>> neighbor_index() const {
        std::map<NodeId, std::set<NodeId>> idx;
        for (const auto& [id, _] : nodes_) idx[id];
        for (const Edge& e : edges_) {
            idx[e.src].insert(e.dst);
            idx[e.dst].insert(e.src);
        }
        return idx;
    }

private:
    std::map<NodeId, NodeRef> nodes_;
    std::set<Edge> edges_;
    std::set<NodeId> attack_;
};

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline NodeId parse_id(std::string_view s, std::size_t line_no) {
    if (s.empty()) throw DataError("line " + std::to_string(line_no) + ": empty node id");
    NodeId v = 0;
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-') {
        neg = true;
        i = 1;
        if (s.size() == 1) throw DataError("line " + std::to_string(line_no) + ": bad node id");
    }
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw DataError("line " + std::to_string(line_no) + ": non-integer node id '" +
                            std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
}

} // namespace detail

// Edge-list wire format, one event per line:
//   src_id<TAB>dst_id<TAB>src_kind<TAB>dst_kind[<TAB>src_name<TAB>dst_name]
// UTF-8, LF line endings. Duplicate (src,dst) pairs collapse to one edge.
inline ProvenanceGraph ingest_edges(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge file: " + path.string());
    ProvenanceGraph g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = detail::split_tabs(line);
        if (fields.size() != 4 && fields.size() != 6)
            throw DataError("line " + std::to_string(line_no) + ": expected 4 or 6 tab-separated fields, got " +
                            std::to_string(fields.size()));
        const NodeId src = detail::parse_id(fields[0], line_no);
        const NodeId dst = detail::parse_id(fields[1], line_no);
        const NodeKind sk = parse_kind(fields[2], line_no);
        const NodeKind dk = parse_kind(fields[3], line_no);
        if (src == dst)
            throw DataError("line " + std::to_string(line_no) + ": rejected edge: self-loop on node " +
                            std::to_string(src));
        try {
            g.add_node(src, sk, fields.size() == 6 ? std::string(fields[4]) : std::string());
            g.add_node(dst, dk, fields.size() == 6 ? std::string(fields[5]) : std::string());
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        g.add_edge(src, dst);
    }
    return g;
}

// Attack-node ground truth: one integer id per line. Ids that do not exist
// in the graph are returned as warnings, not errors — ground-truth files may
// cover nodes pruned earlier.
inline std::vector<NodeId> ingest_attack_nodes(const std::filesystem::path& path,
                                               ProvenanceGraph& g) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open attack-node file: " + path.string());
    std::set<NodeId> attack;
    std::vector<NodeId> unknown;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const NodeId id = detail::parse_id(line, line_no);
        if (g.has_node(id))
            attack.insert(id);
        else
            unknown.push_back(id);
    }
    g.set_attack_nodes(std::move(attack));
    return unknown;
}

// Drop nodes with total degree 0. Edges are untouched.
inline ProvenanceGraph remove_isolated(const ProvenanceGraph& g) {
    std::set<NodeId> keep;
    for (const Edge& e : g.edges()) {
        keep.insert(e.src);
        keep.insert(e.dst);
    }
    ProvenanceGraph out;
    for (const auto& [id, ref] : g.nodes())
        if (keep.count(id)) out.add_node(id, ref.kind, ref.name);
    for (const Edge& e : g.edges()) out.add_edge(e.src, e.dst);
    std::set<NodeId> attack;
    for (NodeId a : g.attack_nodes())
        if (keep.count(a)) attack.insert(a);
    out.set_attack_nodes(std::move(attack));
    return out;
}

// Canonical serialization: edges sorted by (src,dst); name fields emitted
// only when a node on the line has one. write -> read -> write is
// byte-stable.
inline void write_edges(const ProvenanceGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    for (const Edge& e : g.edges()) {
        const NodeRef& s = g.node(e.src);
        const NodeRef& d = g.node(e.dst);
        out << e.src << '\t' << e.dst << '\t' << kind_name(s.kind) << '\t' << kind_name(d.kind);
        if (!s.name.empty() || !d.name.empty()) out << '\t' << s.name << '\t' << d.name;
        out << '\n';
    }
}

} // namespace provcf
