#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "provcf/adam.hpp"
#include "provcf/digest.hpp"
#include "provcf/errors.hpp"
#include "provcf/graphview.hpp"
#include "provcf/record.hpp"
#include "provcf/rng.hpp"
#include "provcf/tape.hpp"

namespace provcf {

enum class Arch { GCN, GAT, GraphSAGE };

inline const char* arch_name(Arch a) {
    switch (a) {
        case Arch::GCN: return "GCN";
        case Arch::GAT: return "GAT";
        case Arch::GraphSAGE: return "GraphSAGE";
    }
    return "GCN";
}

inline Arch parse_arch(const std::string& s) {
    if (s == "GCN" || s == "gcn") return Arch::GCN;
    if (s == "GAT" || s == "gat") return Arch::GAT;
    if (s == "GraphSAGE" || s == "graphsage" || s == "sage") return Arch::GraphSAGE;
    throw DataError("unknown architecture: " + s);
}

struct GatHead {
    Tensor w;     // in×dh
    Tensor a_src; // dh×1
    Tensor a_dst; // dh×1
};

struct Prediction {
    std::array<double, 2> probs{}; // (benign, malicious); sums to 1
    int label = 0;                 // argmax class
};

// Two GNN layers (ReLU + dropout each) -> mean pooling -> 2-layer MLP ->
// softmax over {benign, malicious}. Feature construction parameters ride
// with the model so every consumer rebuilds identical inputs.
struct GnnModel {
    Arch arch = Arch::GCN;
    std::size_t in_dim = 16;
    std::size_t hidden_dim = 64;
    std::size_t mlp_hidden = 32;
    double dropout_p = 0.5;
    bool frozen = false;
    bool symmetrize = true;
    std::uint64_t feature_seed = 0;
    std::uint64_t init_seed = 0;

    // GCN: w1/w2 full layers. GraphSAGE: w1/w2 self, w1n/w2n neighbor.
    Tensor w1, b1, w2, b2;
    Tensor w1n, w2n;
    // GAT: per-head weights; b1/b2 reused as the post-concat biases.
    std::vector<GatHead> heads1, heads2;
    // classifier head
    Tensor mlp_w1, mlp_b1, mlp_w2, mlp_b2;

    std::vector<Tensor*> params() {
        std::vector<Tensor*> out;
        auto push = [&out](Tensor& t) {
            if (t.size() > 0) out.push_back(&t);
        };
        push(w1);
        push(w1n);
        push(b1);
        push(w2);
        push(w2n);
        push(b2);
        for (auto& h : heads1) {
            push(h.w);
            push(h.a_src);
            push(h.a_dst);
        }
        for (auto& h : heads2) {
            push(h.w);
            push(h.a_src);
            push(h.a_dst);
        }
        push(mlp_w1);
        push(mlp_b1);
        push(mlp_w2);
        push(mlp_b2);
        return out;
    }

    std::vector<const Tensor*> params() const {
        auto* self = const_cast<GnnModel*>(this);
        std::vector<const Tensor*> out;
        for (Tensor* t : self->params()) out.push_back(t);
        return out;
    }

    GraphView view_of(const SubgraphRecord& rec) const {
        return make_view(rec, feature_seed, in_dim, symmetrize);
    }
};

namespace detail {

inline Tensor glorot(std::size_t rows, std::size_t cols, Rng& rng) {
    Tensor t(rows, cols);
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (auto& x : t.data) x = rng.uniform(-limit, limit);
    t.set_requires_grad();
    return t;
}

inline Tensor zero_param(std::size_t rows, std::size_t cols) {
    Tensor t(rows, cols);
    t.set_requires_grad();
    return t;
}

} // namespace detail

inline GnnModel init_model(Arch arch, std::uint64_t seed, std::size_t in_dim = 16,
                           std::size_t hidden_dim = 64, std::size_t mlp_hidden = 32,
                           double dropout_p = 0.5, bool symmetrize = true,
                           std::uint64_t feature_seed = 0) {
    GnnModel m;
    m.arch = arch;
    m.in_dim = in_dim;
    m.hidden_dim = hidden_dim;
    m.mlp_hidden = mlp_hidden;
    m.dropout_p = dropout_p;
    m.symmetrize = symmetrize;
    m.feature_seed = feature_seed;
    m.init_seed = seed;
    Rng rng(derive_seed(seed, "model-init"));
    switch (arch) {
        case Arch::GCN:
            m.w1 = detail::glorot(in_dim, hidden_dim, rng);
            m.b1 = detail::zero_param(1, hidden_dim);
            m.w2 = detail::glorot(hidden_dim, hidden_dim, rng);
            m.b2 = detail::zero_param(1, hidden_dim);
            break;
        case Arch::GraphSAGE:
            m.w1 = detail::glorot(in_dim, hidden_dim, rng);
            m.w1n = detail::glorot(in_dim, hidden_dim, rng);
            m.b1 = detail::zero_param(1, hidden_dim);
            m.w2 = detail::glorot(hidden_dim, hidden_dim, rng);
            m.w2n = detail::glorot(hidden_dim, hidden_dim, rng);
            m.b2 = detail::zero_param(1, hidden_dim);
            break;
        case Arch::GAT: {
            const std::size_t n_heads = 4;
            if (hidden_dim % n_heads != 0)
                throw ContractError("init_model: hidden_dim must be divisible by GAT head count");
            const std::size_t dh = hidden_dim / n_heads;
            for (std::size_t h = 0; h < n_heads; ++h) {
                GatHead head;
                head.w = detail::glorot(in_dim, dh, rng);
                head.a_src = detail::glorot(dh, 1, rng);
                head.a_dst = detail::glorot(dh, 1, rng);
                m.heads1.push_back(std::move(head));
            }
            GatHead head2;
            head2.w = detail::glorot(hidden_dim, hidden_dim, rng);
            head2.a_src = detail::glorot(hidden_dim, 1, rng);
            head2.a_dst = detail::glorot(hidden_dim, 1, rng);
            m.heads2.push_back(std::move(head2));
            m.b1 = detail::zero_param(1, hidden_dim);
            m.b2 = detail::zero_param(1, hidden_dim);
            break;
        }
    }
    m.mlp_w1 = detail::glorot(hidden_dim, mlp_hidden, rng);
    m.mlp_b1 = detail::zero_param(1, mlp_hidden);
    m.mlp_w2 = detail::glorot(mlp_hidden, 2, rng);
    m.mlp_b2 = detail::zero_param(1, 2);
    return m;
}

struct ForwardOpts {
    bool training = false;
    Rng* rng = nullptr; // dropout source; required when training and p > 0
};

namespace detail {

// Support set for attention: cells where the *original* adjacency is
// nonzero, plus the diagonal. Fixed data — the mask only rescales logits.
inline Tensor attention_support(const GraphView& v) {
    Tensor sup(v.n, v.n);
    for (const auto& c : v.cells) sup.at(c.row, c.col) = 1.0;
    for (std::size_t i = 0; i < v.n; ++i) sup.at(i, i) = 1.0;
    return sup;
}

template <class Heads, class Bind>
Var gat_layer(Tape& t, Var adj, Var h, Heads& heads, const Tensor& support, std::size_t n,
              Bind bind) {
    Var ones_col = t.constant(Tensor::full(n, 1, 1.0));
    Var ones_row = t.constant(Tensor::full(1, n, 1.0));
    Var eye = t.constant(Tensor::identity(n));
    Var scalemat = t.add(adj, eye); // soft edge weight off-diagonal, 1 on self
    Var out{};
    bool first = true;
    for (auto& head : heads) {
        Var hw = t.matmul(h, bind(t, head.w));
        Var src_score = t.matmul(hw, bind(t, head.a_src));
        Var dst_score = t.matmul(hw, bind(t, head.a_dst));
        // logits[i][j] = leaky_relu(src_i + dst_j), rescaled by soft adjacency
        Var logits = t.add(t.matmul(src_score, ones_row), t.matmul(ones_col, t.transpose(dst_score)));
        logits = t.leaky_relu(logits, 0.2);
        logits = t.mul(logits, scalemat);
        Var alpha = t.masked_row_softmax(logits, support);
        Var hh = t.matmul(alpha, hw);
        out = first ? hh : t.concat_cols(out, hh);
        first = false;
    }
    return out;
}

template <class ModelT, class Bind>
Var gnn_forward_impl(Tape& t, ModelT& m, const GraphView& v, Var adj, const ForwardOpts& o,
                     Bind bind) {
    if (v.features.cols != m.in_dim)
        throw shape_error("gnn_forward", "feature dim " + std::to_string(v.features.cols) +
                                             " does not match model input " +
                                             std::to_string(m.in_dim));
    if (o.training && m.dropout_p > 0.0 && o.rng == nullptr)
        throw ContractError("gnn_forward: training mode needs an rng for dropout");

    Var x = t.constant(v.features);
    const std::size_t n = v.n;
    Tensor support; // GAT only
    if (m.arch == Arch::GAT) support = attention_support(v);

    auto layer = [&](Var h, int which) -> Var {
        Var z{};
        switch (m.arch) {
            case Arch::GCN: {
                Var ahat = t.add(adj, t.constant(Tensor::identity(n)));
                Var deg = t.row_sum(ahat);
                Var dinv = t.pow_(deg, -0.5);
                Var norm = t.scale_cols(t.scale_rows(ahat, dinv), dinv);
                auto& w = which == 1 ? m.w1 : m.w2;
                auto& b = which == 1 ? m.b1 : m.b2;
                z = t.add(t.matmul(norm, t.matmul(h, bind(t, w))), bind(t, b));
                break;
            }
            case Arch::GraphSAGE: {
                Var denom = t.pow_(t.add_scalar(t.row_sum(adj), 1e-9), -1.0);
                Var neigh = t.scale_rows(t.matmul(adj, h), denom);
                auto& ws = which == 1 ? m.w1 : m.w2;
                auto& wn = which == 1 ? m.w1n : m.w2n;
                auto& b = which == 1 ? m.b1 : m.b2;
                z = t.add(t.add(t.matmul(h, bind(t, ws)), t.matmul(neigh, bind(t, wn))),
                          bind(t, b));
                break;
            }
            case Arch::GAT: {
                auto& heads = which == 1 ? m.heads1 : m.heads2;
                auto& b = which == 1 ? m.b1 : m.b2;
                z = t.add(gat_layer(t, adj, h, heads, support, n, bind), bind(t, b));
                break;
            }
        }
        Var act = t.relu(z);
        if (o.training && m.dropout_p > 0.0) act = t.dropout(act, m.dropout_p, *o.rng);
        return act;
    };

    Var h1 = layer(x, 1);
    Var h2 = layer(h1, 2);
    Var pooled = t.mean_rows(h2);
    Var hidden = t.relu(t.add(t.matmul(pooled, bind(t, m.mlp_w1)), bind(t, m.mlp_b1)));
    Var logits = t.add(t.matmul(hidden, bind(t, m.mlp_w2)), bind(t, m.mlp_b2));
    return t.row_softmax(logits);
}

} // namespace detail

// Weights enter the tape as constants: safe for frozen models, no weight
// gradients. `adj` may be the view's own adjacency or a perturbed variant
// with the same support.
inline Var gnn_forward(Tape& t, const GnnModel& m, const GraphView& v, Var adj,
                       const ForwardOpts& o = {}) {
    return detail::gnn_forward_impl(
        t, m, v, adj, o, [](Tape& tape, const Tensor& w) { return tape.constant(w); });
}

// Weights enter as differentiable leaves; gradients accumulate into the
// model tensors. Rejected for frozen models.
inline Var gnn_forward_train(Tape& t, GnnModel& m, const GraphView& v, Var adj,
                             const ForwardOpts& o = {}) {
    if (m.frozen) throw ContractError("gnn_forward_train: model is frozen");
    return detail::gnn_forward_impl(
        t, m, v, adj, o, [](Tape& tape, Tensor& w) -> Var { return tape.leaf(w); });
}

inline Prediction prediction_from(const Tensor& probs) {
    if (probs.rows != 1 || probs.cols != 2) throw shape_error("prediction", "expected 1x2 probs");
    Prediction p;
    p.probs = {probs.at(0, 0), probs.at(0, 1)};
    p.label = p.probs[1] > p.probs[0] ? 1 : 0;
    return p;
}

inline Prediction predict(const GnnModel& m, const GraphView& v) {
    Tape t;
    Var adj = t.constant(v.adjacency);
    Var probs = gnn_forward(t, m, v, adj);
    return prediction_from(t.val(probs));
}

inline Prediction predict(const GnnModel& m, const SubgraphRecord& rec) {
    return predict(m, m.view_of(rec));
}

// --- metrics -----------------------------------------------------------------

struct DetectionMetrics {
    double acc = 0, pr = 0, rec = 0, f1 = 0, auc = 0, fpr = 0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline double rank_auc(const std::vector<std::pair<double, int>>& scored) {
    // Mann–Whitney with 0.5 per tie; malicious is the positive class.
    std::size_t pos = 0, neg = 0;
    for (const auto& [s, y] : scored) (y == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0) return 0.5;
    double concordant = 0.0;
    for (const auto& [sp, yp] : scored) {
        if (yp != 1) continue;
        for (const auto& [sn, yn] : scored) {
            if (yn != 0) continue;
            if (sp > sn)
                concordant += 1.0;
            else if (sp == sn)
                concordant += 0.5;
        }
    }
    return concordant / (static_cast<double>(pos) * static_cast<double>(neg));
}

inline DetectionMetrics evaluate_detector(const GnnModel& m,
                                          const std::vector<SubgraphRecord>& test) {
    if (test.empty()) throw DataError("evaluate_detector: empty test set");
    DetectionMetrics out;
    std::vector<std::pair<double, int>> scored;
    scored.reserve(test.size());
    for (const auto& rec : test) {
        const Prediction p = predict(m, rec);
        scored.push_back({p.probs[1], rec.label});
        if (rec.label == 1 && p.label == 1) ++out.tp;
        if (rec.label == 0 && p.label == 1) ++out.fp;
        if (rec.label == 0 && p.label == 0) ++out.tn;
        if (rec.label == 1 && p.label == 0) ++out.fn;
    }
    const double tp = static_cast<double>(out.tp), fp = static_cast<double>(out.fp);
    const double tn = static_cast<double>(out.tn), fn = static_cast<double>(out.fn);
    out.acc = (tp + tn) / static_cast<double>(test.size());
    out.pr = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    out.rec = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    out.f1 = out.pr + out.rec > 0 ? 2.0 * out.pr * out.rec / (out.pr + out.rec) : 0.0;
    out.fpr = fp + tn > 0 ? fp / (fp + tn) : 0.0;
    out.auc = rank_auc(scored);
    return out;
}

// --- training -----------------------------------------------------------------

struct TrainConfig {
    double lr = 0.001;
    std::size_t epochs = 50;
    std::uint64_t seed = 1;
    std::size_t feature_dim = 16;
    std::size_t hidden_dim = 64;
    std::size_t mlp_hidden = 32;
    double dropout_p = 0.5;
    bool symmetrize = true;
    bool balance = true; // downsample the majority class each epoch
};

// 7:1:2 split stratified by label.
inline std::array<std::vector<SubgraphRecord>, 3> split_stratified(
    const std::vector<SubgraphRecord>& recs, std::uint64_t seed,
    double train_frac = 0.7, double val_frac = 0.1) {
    std::vector<SubgraphRecord> by_class[2];
    for (const auto& r : recs) by_class[r.label == 1 ? 1 : 0].push_back(r);
    Rng rng(derive_seed(seed, "split"));
    std::array<std::vector<SubgraphRecord>, 3> out;
    for (auto& cls : by_class) {
        rng.shuffle(cls);
        const std::size_t n = cls.size();
        const std::size_t n_train = static_cast<std::size_t>(std::floor(train_frac * n));
        const std::size_t n_val = static_cast<std::size_t>(std::floor(val_frac * n));
        for (std::size_t i = 0; i < n; ++i) {
            if (i < n_train)
                out[0].push_back(cls[i]);
            else if (i < n_train + n_val)
                out[1].push_back(cls[i]);
            else
                out[2].push_back(cls[i]);
        }
    }
    auto by_id = [](const SubgraphRecord& a, const SubgraphRecord& b) { return a.id < b.id; };
    for (auto& s : out) std::sort(s.begin(), s.end(), by_id);
    return out;
}

inline GnnModel train_detector(Arch arch, const std::vector<SubgraphRecord>& train,
                               const std::vector<SubgraphRecord>& val, const TrainConfig& cfg) {
    std::size_t n_pos = 0, n_neg = 0;
    for (const auto& r : train) (r.label == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw DataError("train_detector: training set must contain both classes");

    GnnModel model = init_model(arch, derive_seed(cfg.seed, "init"), cfg.feature_dim,
                                cfg.hidden_dim, cfg.mlp_hidden, cfg.dropout_p, cfg.symmetrize,
                                derive_seed(cfg.seed, "features"));
    AdamOptimizer opt({cfg.lr, 0.9, 0.999, 1e-8}, model.params());

    std::vector<GraphView> train_views;
    train_views.reserve(train.size());
    for (const auto& r : train) train_views.push_back(model.view_of(r));

    std::vector<std::size_t> pos_idx, neg_idx;
    for (std::size_t i = 0; i < train.size(); ++i)
        (train[i].label == 1 ? pos_idx : neg_idx).push_back(i);

    GnnModel best = model;
    double best_f1 = -1.0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng erng(derive_seed(cfg.seed, "epoch", epoch));
        std::vector<std::size_t> order;
        if (cfg.balance) {
            auto minority = pos_idx.size() <= neg_idx.size() ? pos_idx : neg_idx;
            auto majority = pos_idx.size() <= neg_idx.size() ? neg_idx : pos_idx;
            erng.shuffle(majority);
            majority.resize(minority.size());
            order = minority;
            order.insert(order.end(), majority.begin(), majority.end());
        } else {
            for (std::size_t i = 0; i < train.size(); ++i) order.push_back(i);
        }
        erng.shuffle(order);

        for (std::size_t step = 0; step < order.size(); ++step) {
            const std::size_t i = order[step];
            Rng drng(derive_seed(cfg.seed, "dropout", epoch * 1000003ull + step));
            Tape t;
            Var adj = t.constant(train_views[i].adjacency);
            ForwardOpts o;
            o.training = true;
            o.rng = &drng;
            Var probs = gnn_forward_train(t, model, train_views[i], adj, o);
            Var p_true = t.pick(probs, 0, static_cast<std::size_t>(train[i].label));
            Var loss = t.scale(t.log_(p_true), -1.0);
            opt.zero_grad();
            t.backward(loss);
            opt.step();
        }

        if (!val.empty()) {
            const DetectionMetrics vm = evaluate_detector(model, val);
            if (vm.f1 > best_f1) {
                best_f1 = vm.f1;
                best = model;
            }
        }
    }
    return val.empty() ? model : best;
}

// --- serialization -------------------------------------------------------------

inline std::string weights_hash(const GnnModel& m) {
    std::vector<double> all;
    for (const Tensor* t : m.params()) all.insert(all.end(), t->data.begin(), t->data.end());
    return sha256_hex(all);
}

namespace detail {

inline nlohmann::json tensor_to_json(const Tensor& t) {
    return {{"rows", t.rows}, {"cols", t.cols}, {"data", t.data}};
}

inline Tensor tensor_from_json(const nlohmann::json& j, bool param) {
    Tensor t = Tensor::from(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                            j.at("data").get<std::vector<double>>());
    if (param) t.set_requires_grad();
    return t;
}

} // namespace detail

inline nlohmann::json model_to_json(const GnnModel& m) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["arch"] = arch_name(m.arch);
    j["in_dim"] = m.in_dim;
    j["hidden_dim"] = m.hidden_dim;
    j["mlp_hidden"] = m.mlp_hidden;
    j["dropout_p"] = m.dropout_p;
    j["frozen"] = m.frozen;
    j["symmetrize"] = m.symmetrize;
    j["feature_seed"] = m.feature_seed;
    j["init_seed"] = m.init_seed;
    auto dump = [](const Tensor& t) { return detail::tensor_to_json(t); };
    nlohmann::json w;
    if (m.w1.size()) w["w1"] = dump(m.w1);
    if (m.w1n.size()) w["w1n"] = dump(m.w1n);
    if (m.b1.size()) w["b1"] = dump(m.b1);
    if (m.w2.size()) w["w2"] = dump(m.w2);
    if (m.w2n.size()) w["w2n"] = dump(m.w2n);
    if (m.b2.size()) w["b2"] = dump(m.b2);
    for (std::size_t h = 0; h < m.heads1.size(); ++h) {
        w["heads1"][h] = {{"w", dump(m.heads1[h].w)},
                          {"a_src", dump(m.heads1[h].a_src)},
                          {"a_dst", dump(m.heads1[h].a_dst)}};
    }
    for (std::size_t h = 0; h < m.heads2.size(); ++h) {
        w["heads2"][h] = {{"w", dump(m.heads2[h].w)},
                          {"a_src", dump(m.heads2[h].a_src)},
                          {"a_dst", dump(m.heads2[h].a_dst)}};
    }
    w["mlp_w1"] = dump(m.mlp_w1);
    w["mlp_b1"] = dump(m.mlp_b1);
    w["mlp_w2"] = dump(m.mlp_w2);
    w["mlp_b2"] = dump(m.mlp_b2);
    j["weights"] = std::move(w);
    return j;
}

inline GnnModel model_from_json(const nlohmann::json& j) {
    if (j.at("format_version").get<int>() != 1)
        throw DataError("checkpoint: unsupported format version");
    GnnModel m;
    m.arch = parse_arch(j.at("arch").get<std::string>());
    m.in_dim = j.at("in_dim").get<std::size_t>();
    m.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    m.mlp_hidden = j.at("mlp_hidden").get<std::size_t>();
    m.dropout_p = j.at("dropout_p").get<double>();
    m.frozen = j.at("frozen").get<bool>();
    m.symmetrize = j.at("symmetrize").get<bool>();
    m.feature_seed = j.at("feature_seed").get<std::uint64_t>();
    m.init_seed = j.at("init_seed").get<std::uint64_t>();
    const auto& w = j.at("weights");
    auto load = [&w](const char* key, Tensor& into) {
        if (w.contains(key)) into = detail::tensor_from_json(w.at(key), true);
    };
    load("w1", m.w1);
    load("w1n", m.w1n);
    load("b1", m.b1);
    load("w2", m.w2);
    load("w2n", m.w2n);
    load("b2", m.b2);
    if (w.contains("heads1"))
        for (const auto& hj : w.at("heads1"))
            m.heads1.push_back({detail::tensor_from_json(hj.at("w"), true),
                                detail::tensor_from_json(hj.at("a_src"), true),
                                detail::tensor_from_json(hj.at("a_dst"), true)});
    if (w.contains("heads2"))
        for (const auto& hj : w.at("heads2"))
            m.heads2.push_back({detail::tensor_from_json(hj.at("w"), true),
                                detail::tensor_from_json(hj.at("a_src"), true),
                                detail::tensor_from_json(hj.at("a_dst"), true)});
    m.mlp_w1 = detail::tensor_from_json(w.at("mlp_w1"), true);
    m.mlp_b1 = detail::tensor_from_json(w.at("mlp_b1"), true);
    m.mlp_w2 = detail::tensor_from_json(w.at("mlp_w2"), true);
    m.mlp_b2 = detail::tensor_from_json(w.at("mlp_b2"), true);
    return m;
}

inline void save_checkpoint(const GnnModel& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open checkpoint for writing: " + path.string());
    out << model_to_json(m).dump(2) << '\n';
}

inline GnnModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open checkpoint: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("checkpoint parse error: " + std::string(e.what()));
    }
    return model_from_json(j);
}

} // namespace provcf
