#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "provcf/graph.hpp"
#include "provcf/rng.hpp"

using namespace provcf;
namespace fs = std::filesystem;

namespace {

fs::path write_tmp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("ingest deduplicates identical edges") {
    auto p = write_tmp("pg_dup.tsv", "1\t2\tProcess\tFile\n1\t2\tProcess\tFile\n");
    auto g = ingest_edges(p);
    REQUIRE(g.node_count() == 2);
    REQUIRE(g.edge_count() == 1);
}

TEST_CASE("ingest of an empty file yields an empty graph") {
    auto p = write_tmp("pg_empty.tsv", "");
    auto g = ingest_edges(p);
    REQUIRE(g.node_count() == 0);
    REQUIRE(g.edge_count() == 0);
}

TEST_CASE("ingest matches a sort|uniq pair oracle") {
    // 10 event lines over 3 distinct pairs
    std::string content;
    const char* lines[] = {"1\t2\tProcess\tFile\n", "2\t3\tFile\tSocket\n", "1\t3\tProcess\tSocket\n"};
    for (int i = 0; i < 10; ++i) content += lines[i % 3];
    content += lines[0];

    // oracle: unique (src,dst) pairs counted independently of the parser
    std::set<std::pair<long long, long long>> uniq;
    std::istringstream ss(content);
    std::string line;
    while (std::getline(ss, line)) {
        std::istringstream ls(line);
        long long a, b;
        ls >> a >> b;
        uniq.insert({a, b});
    }

    auto g = ingest_edges(write_tmp("pg_uniq.tsv", content));
    REQUIRE(g.edge_count() == uniq.size());
    REQUIRE(uniq.size() == 3);
}

TEST_CASE("ingest rejects malformed input with line numbers") {
    SECTION("bad field count") {
        auto p = write_tmp("pg_bad1.tsv", "1\t2\tProcess\tFile\n1\t2\n");
        try {
            ingest_edges(p);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SECTION("self-loop") {
        auto p = write_tmp("pg_bad2.tsv", "5\t5\tProcess\tProcess\n");
        REQUIRE_THROWS_AS(ingest_edges(p), DataError);
    }
    SECTION("kind conflict") {
        auto p = write_tmp("pg_bad3.tsv", "1\t2\tProcess\tFile\n1\t3\tFile\tSocket\n");
        REQUIRE_THROWS_AS(ingest_edges(p), DataError);
    }
    SECTION("unknown kind") {
        auto p = write_tmp("pg_bad4.tsv", "1\t2\tProcess\tDirectory\n");
        REQUIRE_THROWS_AS(ingest_edges(p), DataError);
    }
}

TEST_CASE("attack-node ingestion") {
    auto edges = write_tmp("pg_att.tsv", "1\t2\tProcess\tFile\n");
    SECTION("known id lands in attack set") {
        auto g = ingest_edges(edges);
        auto unknown = ingest_attack_nodes(write_tmp("att1.txt", "2\n"), g);
        REQUIRE(g.attack_nodes() == std::set<NodeId>{2});
        REQUIRE(unknown.empty());
    }
    SECTION("unknown id becomes a warning, not an error") {
        auto g = ingest_edges(edges);
        auto unknown = ingest_attack_nodes(write_tmp("att2.txt", "99\n"), g);
        REQUIRE(g.attack_nodes().empty());
        REQUIRE(unknown == std::vector<NodeId>{99});
    }
    SECTION("non-integer line is a parse error") {
        auto g = ingest_edges(edges);
        REQUIRE_THROWS_AS(ingest_attack_nodes(write_tmp("att3.txt", "zork\n"), g), DataError);
    }
    SECTION("intersection size matches an independent set oracle") {
        std::string body;
        for (int i = 1; i <= 20; ++i)
            body += std::to_string(i) + "\t" + std::to_string(i + 100) + "\tProcess\tFile\n";
        auto g = ingest_edges(write_tmp("pg_att_many.tsv", body));
        std::string att = "3\n7\n15\n500\n600\n";
        auto unknown = ingest_attack_nodes(write_tmp("att4.txt", att), g);

        std::set<NodeId> requested{3, 7, 15, 500, 600};
        std::set<NodeId> graph_ids;
        for (const auto& [id, _] : g.nodes()) graph_ids.insert(id);
        std::set<NodeId> expect;
        for (NodeId a : requested)
            if (graph_ids.count(a)) expect.insert(a);
        REQUIRE(g.attack_nodes() == expect);
        REQUIRE(unknown.size() == requested.size() - expect.size());
    }
}

TEST_CASE("remove_isolated drops exactly the degree-0 nodes") {
    SECTION("single isolate") {
        ProvenanceGraph g;
        g.add_node(1, NodeKind::Process);
        g.add_node(2, NodeKind::File);
        g.add_node(3, NodeKind::Socket);
        g.add_edge(1, 2);
        auto out = remove_isolated(g);
        REQUIRE(out.node_count() == 2);
        REQUIRE(out.has_node(1));
        REQUIRE(out.has_node(2));
        REQUIRE_FALSE(out.has_node(3));
        REQUIRE(out.edge_count() == 1);
    }
    SECTION("no isolates is an identity") {
        ProvenanceGraph g;
        g.add_node(1, NodeKind::Process);
        g.add_node(2, NodeKind::File);
        g.add_edge(1, 2);
        auto out = remove_isolated(g);
        REQUIRE(out.node_count() == g.node_count());
        REQUIRE(out.edges() == g.edges());
    }
    SECTION("random graph with planted isolates, degree-scan oracle") {
        Rng rng(99);
        ProvenanceGraph g;
        for (NodeId i = 0; i < 50; ++i) g.add_node(i, NodeKind::Process);
        // wire nodes 0..39 into a ring so none of them is isolated
        for (NodeId i = 0; i < 40; ++i) g.add_edge(i, (i + 1) % 40);
        for (int extra = 0; extra < 30; ++extra) {
            NodeId a = static_cast<NodeId>(rng.below(40));
            NodeId b = static_cast<NodeId>(rng.below(40));
            if (a != b) g.add_edge(a, b);
        }
        auto out = remove_isolated(g);
        REQUIRE(out.node_count() == 40);

        // oracle: degree scan over the original graph
        std::size_t with_degree = 0;
        for (const auto& [id, _] : g.nodes())
            if (g.degree(id) > 0) ++with_degree;
        REQUIRE(out.node_count() == with_degree);
    }
}

TEST_CASE("remove_isolated is idempotent") {
    ProvenanceGraph g;
    for (NodeId i = 0; i < 10; ++i) g.add_node(i, NodeKind::File);
    g.add_edge(0, 1);
    g.add_edge(2, 3);
    auto once = remove_isolated(g);
    auto twice = remove_isolated(once);
    REQUIRE(once.node_count() == twice.node_count());
    REQUIRE(once.edges() == twice.edges());
}

TEST_CASE("serialization round-trip is byte-stable") {
    Rng rng(5);
    ProvenanceGraph g;
    for (NodeId i = 0; i < 20; ++i)
        g.add_node(i, static_cast<NodeKind>(rng.below(4)), i % 3 == 0 ? "name" + std::to_string(i) : "");
    for (int e = 0; e < 40; ++e) {
        NodeId a = static_cast<NodeId>(rng.below(20));
        NodeId b = static_cast<NodeId>(rng.below(20));
        if (a != b) g.add_edge(a, b);
    }
    auto pruned = remove_isolated(g);
    fs::path f1 = fs::temp_directory_path() / "roundtrip1.tsv";
    fs::path f2 = fs::temp_directory_path() / "roundtrip2.tsv";
    write_edges(pruned, f1);
    auto re = ingest_edges(f1);
    write_edges(re, f2);
    REQUIRE(slurp(f1) == slurp(f2));
}

TEST_CASE("edge count never increases under graph operations") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        ProvenanceGraph g;
        const int n = 5 + static_cast<int>(rng.below(20));
        for (NodeId i = 0; i < n; ++i) g.add_node(i, NodeKind::Process);
        int added = 0;
        for (int e = 0; e < n * 2; ++e) {
            NodeId a = static_cast<NodeId>(rng.below(n));
            NodeId b = static_cast<NodeId>(rng.below(n));
            if (a == b) continue;
            g.add_edge(a, b);
            ++added;
        }
        REQUIRE(g.edge_count() <= static_cast<std::size_t>(added));
        auto pruned = remove_isolated(g);
        REQUIRE(pruned.edge_count() <= g.edge_count());
    }
}
