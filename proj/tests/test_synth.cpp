#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <map>
#include <set>

#include "provcf/synth.hpp"

using namespace provcf;
namespace fs = std::filesystem;

namespace {

// degree histogram over undirected incidence, bucketed 1..19 with overflow
std::vector<double> degree_histogram(const SubgraphRecord& rec) {
    std::map<NodeId, int> deg;
    for (NodeId n : rec.nodes) deg[n] = 0;
    for (const Edge& e : rec.edges) {
        deg[e.src]++;
        deg[e.dst]++;
    }
    std::vector<double> h(21, 0.0);
    for (const auto& [_, d] : deg) h[std::min(d, 20)] += 1.0;
    for (auto& x : h) x /= static_cast<double>(rec.nodes.size());
    return h;
}

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (b[i] - a[i]) * -1.0;
    return s;
}

bool gt_edges_connected(const SubgraphRecord& rec) {
    std::set<NodeId> attack(rec.attack_nodes.begin(), rec.attack_nodes.end());
    std::vector<Edge> gt;
    for (const Edge& e : rec.edges)
        if (attack.count(e.src) || attack.count(e.dst)) gt.push_back(e);
    if (gt.empty()) return false;
    std::map<NodeId, std::set<NodeId>> adj;
    std::set<NodeId> verts;
    for (const Edge& e : gt) {
        adj[e.src].insert(e.dst);
        adj[e.dst].insert(e.src);
        verts.insert(e.src);
        verts.insert(e.dst);
    }
    std::set<NodeId> seen{*verts.begin()};
    std::vector<NodeId> stack{*verts.begin()};
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : adj[u])
            if (seen.insert(v).second) stack.push_back(v);
    }
    return seen.size() == verts.size();
}

} // namespace

TEST_CASE("generation is deterministic per seed") {
    CorpusSpec spec;
    spec.n_benign = 1;
    spec.n_malicious = 1;
    spec.seed = 7;
    auto a = generate_corpus(spec);
    auto b = generate_corpus(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].nodes == b[i].nodes);
        REQUIRE(a[i].edges == b[i].edges);
        REQUIRE(a[i].kinds == b[i].kinds);
        REQUIRE(a[i].attack_nodes == b[i].attack_nodes);
    }
}

TEST_CASE("corpus structure invariants") {
    CorpusSpec spec;
    spec.n_benign = 40;
    spec.n_malicious = 30;
    spec.seed = 11;
    auto corpus = generate_corpus(spec);
    REQUIRE(corpus.size() == 70);

    std::size_t benign = 0, malicious = 0;
    std::set<NodeId> all_ids;
    for (const auto& rec : corpus) {
        (rec.label == 1 ? malicious : benign)++;
        REQUIRE(rec.nodes.size() == rec.kinds.size());
        REQUIRE(std::is_sorted(rec.nodes.begin(), rec.nodes.end()));
        for (NodeId id : rec.nodes) REQUIRE(all_ids.insert(id).second); // ids globally unique

        // no isolated nodes
        std::set<NodeId> touched;
        for (const Edge& e : rec.edges) {
            touched.insert(e.src);
            touched.insert(e.dst);
            REQUIRE(e.src != e.dst);
        }
        REQUIRE(touched.size() == rec.nodes.size());

        if (rec.label == 1) {
            REQUIRE(rec.attack_nodes.size() >= 4); // motif minimum
            REQUIRE(gt_edges_connected(rec));
        } else {
            REQUIRE(rec.attack_nodes.empty());
        }
    }
    REQUIRE(benign == spec.n_benign); // label balance is exact
    REQUIRE(malicious == spec.n_malicious);
}

TEST_CASE("benign and malicious separate under a degree-histogram 1-NN") {
    CorpusSpec spec;
    spec.n_benign = 100;
    spec.n_malicious = 100;
    spec.seed = 3;
    auto corpus = generate_corpus(spec);

    std::vector<std::vector<double>> feats;
    feats.reserve(corpus.size());
    for (const auto& rec : corpus) feats.push_back(degree_histogram(rec));

    std::size_t correct = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        double best = 1e300;
        int vote = -1;
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            if (i == j) continue;
            double d = 0;
            for (std::size_t k = 0; k < feats[i].size(); ++k) {
                const double diff = feats[i][k] - feats[j][k];
                d += diff * diff;
            }
            if (d < best) {
                best = d;
                vote = corpus[j].label;
            }
        }
        if (vote == corpus[i].label) ++correct;
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(corpus.size());
    INFO("1-NN degree-histogram accuracy " << acc);
    REQUIRE(acc >= 0.85);
}

TEST_CASE("corpus survives disk round-trip with sidecars") {
    CorpusSpec spec;
    spec.n_benign = 6;
    spec.n_malicious = 5;
    spec.seed = 21;
    auto corpus = generate_corpus(spec);
    fs::path base = fs::temp_directory_path() / "synth_corpus";
    write_corpus(corpus, base);
    auto re = read_corpus(base);
    REQUIRE(re.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        REQUIRE(re[i].nodes == corpus[i].nodes);
        REQUIRE(re[i].edges == corpus[i].edges);
        REQUIRE(re[i].label == corpus[i].label);
        REQUIRE(re[i].attack_nodes == corpus[i].attack_nodes);
        std::vector<NodeKind> k1 = corpus[i].kinds, k2 = re[i].kinds;
        REQUIRE(k1 == k2);
    }
}

TEST_CASE("spec validation") {
    CorpusSpec bad;
    bad.n_benign = 0;
    REQUIRE_THROWS_AS(generate_corpus(bad), ContractError);
    CorpusSpec range;
    range.node_range = {5, 40};
    REQUIRE_THROWS_AS(generate_corpus(range), ContractError);
}
