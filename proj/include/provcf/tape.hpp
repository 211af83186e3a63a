#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "provcf/errors.hpp"
#include "provcf/rng.hpp"
#include "provcf/tensor.hpp"

namespace provcf {

// Handle into a Tape. Only valid for the tape that produced it.
struct Var {
    std::size_t id = static_cast<std::size_t>(-1);
};

// One (row, col) cell of an n×n matrix fed from entry `src_index` of a value
// vector. Several cells may share a source (symmetrized edges).
struct ScatterCell {
    std::size_t row = 0;
    std::size_t col = 0;
    std::size_t src_index = 0;
};

// Reverse-mode tape over dense matrices. Nodes are appended in topological
// order, so backward() is a single reverse sweep. Leaf gradients accumulate
// into the bound tensors: backward() twice without zeroing doubles them.
class Tape {
public:
    Var constant(Tensor t) { return push(std::move(t), nullptr, false, {}); }

    // Binds external parameter storage; gradients accumulate into t.grad.
    Var leaf(Tensor& t) {
        if (!t.requires_grad) throw ContractError("leaf: tensor does not require grad");
        if (t.grad.size() != t.size()) throw ContractError("leaf: grad storage shape mismatch");
        Tensor copy = t;
        return push(std::move(copy), &t, true, {});
    }

    const Tensor& val(Var v) const { return nodes_[v.id].value; }

    // Internal gradient buffer of a node after backward().
    const std::vector<double>& grad(Var v) const { return nodes_[v.id].g; }

    std::size_t size() const { return nodes_.size(); }

    // --- primitives ---------------------------------------------------

    Var matmul(Var av, Var bv) {
        const Tensor& a = val(av);
        const Tensor& b = val(bv);
        if (a.cols != b.rows) throw shape_error("matmul", dims(a) + " x " + dims(b));
        Tensor out(a.rows, b.cols);
        mm(a.data.data(), b.data.data(), out.data.data(), a.rows, a.cols, b.cols);
        return push(std::move(out), nullptr, needs(av) || needs(bv), {av, bv},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        const Tensor& a = t.val(n.parents[0]);
                        const Tensor& b = t.val(n.parents[1]);
                        const std::size_t m = a.rows, k = a.cols, p = b.cols;
                        if (t.needs(n.parents[0])) {
                            std::vector<double>& da = t.gbuf(n.parents[0]); // dA += g B^T
                            for (std::size_t i = 0; i < m; ++i)
                                for (std::size_t j = 0; j < p; ++j) {
                                    const double gij = n.g[i * p + j];
                                    if (gij == 0.0) continue;
                                    for (std::size_t q = 0; q < k; ++q)
                                        da[i * k + q] += gij * b.data[q * p + j];
                                }
                        }
                        if (t.needs(n.parents[1])) {
                            std::vector<double>& db = t.gbuf(n.parents[1]); // dB += A^T g
                            for (std::size_t i = 0; i < m; ++i)
                                for (std::size_t q = 0; q < k; ++q) {
                                    const double aiq = a.data[i * k + q];
                                    if (aiq == 0.0) continue;
                                    for (std::size_t j = 0; j < p; ++j)
                                        db[q * p + j] += aiq * n.g[i * p + j];
                                }
                        }
                    });
    }

    // Same shape, or b a 1×n row vector broadcast over a's rows (bias add).
    Var add(Var av, Var bv) {
        const Tensor& a = val(av);
        const Tensor& b = val(bv);
        const bool bias = (b.rows == 1 && a.cols == b.cols && a.rows != 1);
        if (!a.same_shape(b) && !bias) throw shape_error("add", dims(a) + " vs " + dims(b));
        Tensor out = a;
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j)
                out.at(i, j) += bias ? b.at(0, j) : b.at(i, j);
        return push(std::move(out), nullptr, needs(av) || needs(bv), {av, bv},
                    [bias](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (t.needs(n.parents[0])) {
                            std::vector<double>& da = t.gbuf(n.parents[0]);
                            for (std::size_t k = 0; k < n.g.size(); ++k) da[k] += n.g[k];
                        }
                        if (t.needs(n.parents[1])) {
                            std::vector<double>& db = t.gbuf(n.parents[1]);
                            const std::size_t cols = t.val(n.parents[0]).cols;
                            for (std::size_t k = 0; k < n.g.size(); ++k)
                                db[bias ? k % cols : k] += n.g[k];
                        }
                    });
    }

    Var sub(Var av, Var bv) {
        const Tensor& a = val(av);
        const Tensor& b = val(bv);
        if (!a.same_shape(b)) throw shape_error("sub", dims(a) + " vs " + dims(b));
        Tensor out = a;
        for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] -= b.data[k];
        return push(std::move(out), nullptr, needs(av) || needs(bv), {av, bv},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (t.needs(n.parents[0])) {
                            std::vector<double>& da = t.gbuf(n.parents[0]);
                            for (std::size_t k = 0; k < n.g.size(); ++k) da[k] += n.g[k];
                        }
                        if (t.needs(n.parents[1])) {
                            std::vector<double>& db = t.gbuf(n.parents[1]);
                            for (std::size_t k = 0; k < n.g.size(); ++k) db[k] -= n.g[k];
                        }
                    });
    }

    // Hadamard product.
    Var mul(Var av, Var bv) {
        const Tensor& a = val(av);
        const Tensor& b = val(bv);
        if (!a.same_shape(b)) throw shape_error("mul", dims(a) + " vs " + dims(b));
        Tensor out = a;
        for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] *= b.data[k];
        return push(std::move(out), nullptr, needs(av) || needs(bv), {av, bv},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        const Tensor& a = t.val(n.parents[0]);
                        const Tensor& b = t.val(n.parents[1]);
                        if (t.needs(n.parents[0])) {
                            std::vector<double>& da = t.gbuf(n.parents[0]);
                            for (std::size_t k = 0; k < n.g.size(); ++k) da[k] += n.g[k] * b.data[k];
                        }
                        if (t.needs(n.parents[1])) {
                            std::vector<double>& db = t.gbuf(n.parents[1]);
                            for (std::size_t k = 0; k < n.g.size(); ++k) db[k] += n.g[k] * a.data[k];
                        }
                    });
    }

    Var scale(Var av, double c) {
        Tensor out = val(av);
        for (auto& x : out.data) x *= c;
        return unary(av, std::move(out), [c](double g, double, double) { return g * c; });
    }

    Var add_scalar(Var av, double c) {
        Tensor out = val(av);
        for (auto& x : out.data) x += c;
        return unary(av, std::move(out), [](double g, double, double) { return g; });
    }

    // σ with input clamped to ±30 against overflow; the clamped region has
    // derivative ~1e-13 anyway.
    Var sigmoid(Var av) {
        Tensor out = val(av);
        for (auto& x : out.data) {
            const double c = std::clamp(x, -30.0, 30.0);
            x = 1.0 / (1.0 + std::exp(-c));
        }
        return unary(av, std::move(out),
                     [](double g, double, double y) { return g * y * (1.0 - y); });
    }

    Var relu(Var av) {
        Tensor out = val(av);
        for (auto& x : out.data) x = x > 0.0 ? x : 0.0;
        return unary(av, std::move(out), [](double g, double x, double) { return x > 0.0 ? g : 0.0; });
    }

    Var leaky_relu(Var av, double slope = 0.2) {
        Tensor out = val(av);
        for (auto& x : out.data) x = x > 0.0 ? x : slope * x;
        return unary(av, std::move(out),
                     [slope](double g, double x, double) { return x > 0.0 ? g : slope * g; });
    }

    Var exp_(Var av) {
        Tensor out = val(av);
        for (auto& x : out.data) x = std::exp(x);
        return unary(av, std::move(out), [](double g, double, double y) { return g * y; });
    }

    Var log_(Var av) {
        Tensor out = val(av);
        for (auto& x : out.data) x = std::log(std::max(x, 1e-300));
        return unary(av, std::move(out),
                     [](double g, double x, double) { return g / std::max(x, 1e-300); });
    }

    Var pow_(Var av, double p) {
        Tensor out = val(av);
        for (auto& x : out.data) x = std::pow(x, p);
        return unary(av, std::move(out),
                     [p](double g, double x, double) { return g * p * std::pow(x, p - 1.0); });
    }

    Var transpose(Var av) {
        const Tensor& a = val(av);
        Tensor out(a.cols, a.rows);
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j) out.at(j, i) = a.at(i, j);
        return push(std::move(out), nullptr, needs(av), {av},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        const Tensor& a = t.val(n.parents[0]);
                        std::vector<double>& da = t.gbuf(n.parents[0]);
                        for (std::size_t i = 0; i < a.rows; ++i)
                            for (std::size_t j = 0; j < a.cols; ++j)
                                da[i * a.cols + j] += n.g[j * a.rows + i];
                    });
    }

    Var row_softmax(Var av) {
        const Tensor& a = val(av);
        Tensor out = a;
        for (std::size_t i = 0; i < a.rows; ++i) {
            double mx = -1e308;
            for (std::size_t j = 0; j < a.cols; ++j) mx = std::max(mx, a.at(i, j));
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols; ++j) s += (out.at(i, j) = std::exp(a.at(i, j) - mx));
            for (std::size_t j = 0; j < a.cols; ++j) out.at(i, j) /= s;
        }
        return push(std::move(out), nullptr, needs(av), {av},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        const Tensor& y = n.value;
                        std::vector<double>& da = t.gbuf(n.parents[0]);
                        for (std::size_t i = 0; i < y.rows; ++i) {
                            double dot = 0.0;
                            for (std::size_t j = 0; j < y.cols; ++j)
                                dot += n.g[i * y.cols + j] * y.at(i, j);
                            for (std::size_t j = 0; j < y.cols; ++j)
                                da[i * y.cols + j] += y.at(i, j) * (n.g[i * y.cols + j] - dot);
                        }
                    });
    }

    // Row softmax restricted to entries where support > 0; other entries are
    // exactly 0, rows with empty support come out all-zero. The support set
    // is fixed data, not a tape node.
    Var masked_row_softmax(Var av, const Tensor& support) {
        const Tensor& a = val(av);
        if (!a.same_shape(support))
            throw shape_error("masked_row_softmax", dims(a) + " vs support " + dims(support));
        Tensor out(a.rows, a.cols);
        for (std::size_t i = 0; i < a.rows; ++i) {
            double mx = -1e308;
            bool any = false;
            for (std::size_t j = 0; j < a.cols; ++j)
                if (support.at(i, j) > 0.0) {
                    mx = std::max(mx, a.at(i, j));
                    any = true;
                }
            if (!any) continue;
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols; ++j)
                if (support.at(i, j) > 0.0) s += (out.at(i, j) = std::exp(a.at(i, j) - mx));
            for (std::size_t j = 0; j < a.cols; ++j)
                if (support.at(i, j) > 0.0) out.at(i, j) /= s;
        }
        return push(std::move(out), nullptr, needs(av), {av},
                    [sup = support](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        const Tensor& y = n.value;
                        std::vector<double>& da = t.gbuf(n.parents[0]);
                        for (std::size_t i = 0; i < y.rows; ++i) {
                            double dot = 0.0;
                            for (std::size_t j = 0; j < y.cols; ++j)
                                if (sup.at(i, j) > 0.0) dot += n.g[i * y.cols + j] * y.at(i, j);
                            for (std::size_t j = 0; j < y.cols; ++j)
                                if (sup.at(i, j) > 0.0)
                                    da[i * y.cols + j] += y.at(i, j) * (n.g[i * y.cols + j] - dot);
                        }
                    });
    }

    // m×n -> 1×n column means (mean pooling over rows).
    Var mean_rows(Var av) {
        const Tensor& a = val(av);
        if (a.rows == 0) throw shape_error("mean_rows", "empty input");
        Tensor out(1, a.cols);
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j) out.at(0, j) += a.at(i, j);
        for (auto& x : out.data) x /= static_cast<double>(a.rows);
        return push(std::move(out), nullptr, needs(av), {av},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        const Tensor& a = t.val(n.parents[0]);
                        std::vector<double>& da = t.gbuf(n.parents[0]);
                        const double inv = 1.0 / static_cast<double>(a.rows);
                        for (std::size_t i = 0; i < a.rows; ++i)
                            for (std::size_t j = 0; j < a.cols; ++j)
                                da[i * a.cols + j] += n.g[j] * inv;
                    });
    }

    // m×n -> m×1 row sums.
    Var row_sum(Var av) {
        const Tensor& a = val(av);
        Tensor out(a.rows, 1);
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j) out.at(i, 0) += a.at(i, j);
        return push(std::move(out), nullptr, needs(av), {av},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        const Tensor& a = t.val(n.parents[0]);
                        std::vector<double>& da = t.gbuf(n.parents[0]);
                        for (std::size_t i = 0; i < a.rows; ++i)
                            for (std::size_t j = 0; j < a.cols; ++j) da[i * a.cols + j] += n.g[i];
                    });
    }

    // y[i,j] = a[i,j] * s[i], s an m×1 vector.
    Var scale_rows(Var av, Var sv) {
        const Tensor& a = val(av);
        const Tensor& s = val(sv);
        if (s.cols != 1 || s.rows != a.rows)
            throw shape_error("scale_rows", dims(a) + " with scale " + dims(s));
        Tensor out = a;
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j) out.at(i, j) *= s.at(i, 0);
        return push(std::move(out), nullptr, needs(av) || needs(sv), {av, sv},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        const Tensor& a = t.val(n.parents[0]);
                        const Tensor& s = t.val(n.parents[1]);
                        if (t.needs(n.parents[0])) {
                            std::vector<double>& da = t.gbuf(n.parents[0]);
                            for (std::size_t i = 0; i < a.rows; ++i)
                                for (std::size_t j = 0; j < a.cols; ++j)
                                    da[i * a.cols + j] += n.g[i * a.cols + j] * s.at(i, 0);
                        }
                        if (t.needs(n.parents[1])) {
                            std::vector<double>& ds = t.gbuf(n.parents[1]);
                            for (std::size_t i = 0; i < a.rows; ++i)
                                for (std::size_t j = 0; j < a.cols; ++j)
                                    ds[i] += n.g[i * a.cols + j] * a.at(i, j);
                        }
                    });
    }

    // y[i,j] = a[i,j] * s[j], s an n×1 vector.
    Var scale_cols(Var av, Var sv) {
        const Tensor& a = val(av);
        const Tensor& s = val(sv);
        if (s.cols != 1 || s.rows != a.cols)
            throw shape_error("scale_cols", dims(a) + " with scale " + dims(s));
        Tensor out = a;
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < a.cols; ++j) out.at(i, j) *= s.at(j, 0);
        return push(std::move(out), nullptr, needs(av) || needs(sv), {av, sv},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        const Tensor& a = t.val(n.parents[0]);
                        const Tensor& s = t.val(n.parents[1]);
                        if (t.needs(n.parents[0])) {
                            std::vector<double>& da = t.gbuf(n.parents[0]);
                            for (std::size_t i = 0; i < a.rows; ++i)
                                for (std::size_t j = 0; j < a.cols; ++j)
                                    da[i * a.cols + j] += n.g[i * a.cols + j] * s.at(j, 0);
                        }
                        if (t.needs(n.parents[1])) {
                            std::vector<double>& ds = t.gbuf(n.parents[1]);
                            for (std::size_t i = 0; i < a.rows; ++i)
                                for (std::size_t j = 0; j < a.cols; ++j)
                                    ds[j] += n.g[i * a.cols + j] * a.at(i, j);
                        }
                    });
    }

    Var concat_cols(Var av, Var bv) {
        const Tensor& a = val(av);
        const Tensor& b = val(bv);
        if (a.rows != b.rows) throw shape_error("concat_cols", dims(a) + " vs " + dims(b));
        Tensor out(a.rows, a.cols + b.cols);
        for (std::size_t i = 0; i < a.rows; ++i) {
            for (std::size_t j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
            for (std::size_t j = 0; j < b.cols; ++j) out.at(i, a.cols + j) = b.at(i, j);
        }
        return push(std::move(out), nullptr, needs(av) || needs(bv), {av, bv},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        const Tensor& a = t.val(n.parents[0]);
                        const Tensor& b = t.val(n.parents[1]);
                        const std::size_t w = a.cols + b.cols;
                        if (t.needs(n.parents[0])) {
                            std::vector<double>& da = t.gbuf(n.parents[0]);
                            for (std::size_t i = 0; i < a.rows; ++i)
                                for (std::size_t j = 0; j < a.cols; ++j)
                                    da[i * a.cols + j] += n.g[i * w + j];
                        }
                        if (t.needs(n.parents[1])) {
                            std::vector<double>& db = t.gbuf(n.parents[1]);
                            for (std::size_t i = 0; i < b.rows; ++i)
                                for (std::size_t j = 0; j < b.cols; ++j)
                                    db[i * b.cols + j] += n.g[i * w + a.cols + j];
                        }
                    });
    }

    Var sum(Var av) {
        const Tensor& a = val(av);
        Tensor out(1, 1);
        double s = 0.0;
        for (double x : a.data) s += x;
        out.at(0, 0) = s;
        return push(std::move(out), nullptr, needs(av), {av},
                    [](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        std::vector<double>& da = t.gbuf(n.parents[0]);
                        for (auto& x : da) x += n.g[0];
                    });
    }

    Var pick(Var av, std::size_t r, std::size_t c) {
        const Tensor& a = val(av);
        if (r >= a.rows || c >= a.cols) throw shape_error("pick", "index out of range");
        Tensor out(1, 1);
        out.at(0, 0) = a.at(r, c);
        return push(std::move(out), nullptr, needs(av), {av},
                    [r, c](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        const Tensor& a = t.val(n.parents[0]);
                        t.gbuf(n.parents[0])[r * a.cols + c] += n.g[0];
                    });
    }

    // Mean-reduced binary cross-entropy against a fixed target, predictions
    // clamped into [1e-7, 1-1e-7]. Gradient is zero in the clamped region.
    Var bce(Var pv, const Tensor& target) {
        const Tensor& p = val(pv);
        if (!p.same_shape(target)) throw shape_error("bce", dims(p) + " vs target " + dims(target));
        const double lo = 1e-7, hi = 1.0 - 1e-7;
        Tensor out(1, 1);
        double s = 0.0;
        for (std::size_t k = 0; k < p.data.size(); ++k) {
            const double ph = std::clamp(p.data[k], lo, hi);
            const double tk = target.data[k];
            s += -(tk * std::log(ph) + (1.0 - tk) * std::log(1.0 - ph));
        }
        out.at(0, 0) = s / static_cast<double>(p.data.size());
        return push(std::move(out), nullptr, needs(pv), {pv},
                    [tgt = target](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        const double lo = 1e-7, hi = 1.0 - 1e-7;
                        const Tensor& p = t.val(n.parents[0]);
                        std::vector<double>& dp = t.gbuf(n.parents[0]);
                        const double inv = 1.0 / static_cast<double>(p.data.size());
                        for (std::size_t k = 0; k < p.data.size(); ++k) {
                            const double x = p.data[k];
                            if (x < lo || x > hi) continue;
                            dp[k] += n.g[0] * inv * (x - tgt.data[k]) / (x * (1.0 - x));
                        }
                    });
    }

    // Inverted dropout; mask drawn once at op creation from rng.
    Var dropout(Var av, double p, Rng& rng) {
        if (p <= 0.0) return av;
        if (p >= 1.0) throw ContractError("dropout: p must be < 1");
        const Tensor& a = val(av);
        std::vector<double> mask(a.data.size());
        const double keep = 1.0 / (1.0 - p);
        for (auto& m : mask) m = rng.uniform() < p ? 0.0 : keep;
        Tensor out = a;
        for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] *= mask[k];
        return push(std::move(out), nullptr, needs(av), {av},
                    [mask = std::move(mask)](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        std::vector<double>& da = t.gbuf(n.parents[0]);
                        for (std::size_t k = 0; k < mask.size(); ++k) da[k] += n.g[k] * mask[k];
                    });
    }

    // Scatter an m×1 value vector into an n×n matrix; everything off the
    // listed cells is exactly 0. Cells may share a source entry, e.g. the
    // (i,j) and (j,i) images of one undirected edge.
    Var scatter_edges(Var valsv, const std::vector<ScatterCell>& cells, std::size_t n) {
        const Tensor& vals = val(valsv);
        if (vals.cols != 1) throw shape_error("scatter_edges", "values must be m x 1");
        Tensor out(n, n);
        for (const auto& c : cells) {
            if (c.row >= n || c.col >= n || c.src_index >= vals.rows)
                throw shape_error("scatter_edges", "cell out of range");
            out.at(c.row, c.col) = vals.at(c.src_index, 0);
        }
        return push(std::move(out), nullptr, needs(valsv), {valsv},
                    [cc = cells, n](Tape& t, std::size_t self) {
                        const Node& nd = t.nodes_[self];
                        if (!t.needs(nd.parents[0])) return;
                        std::vector<double>& dv = t.gbuf(nd.parents[0]);
                        for (const auto& c : cc) dv[c.src_index] += nd.g[c.row * n + c.col];
                    });
    }

    // --- backward -------------------------------------------------------

    void backward(Var loss) {
        const Tensor& l = val(loss);
        if (l.rows != 1 || l.cols != 1) throw ContractError("backward: loss must be a 1x1 scalar");
        for (auto& n : nodes_) n.g.assign(n.value.size(), 0.0);
        nodes_[loss.id].g[0] = 1.0;
        for (std::size_t i = nodes_.size(); i-- > 0;) {
            Node& n = nodes_[i];
            if (n.back && n.needs_grad) n.back(*this, i);
        }
        for (auto& n : nodes_) {
            if (!n.bound) continue;
            for (std::size_t k = 0; k < n.g.size(); ++k) n.bound->grad[k] += n.g[k];
        }
    }

private:
    struct Node {
        Tensor value;
        std::vector<double> g;
        Tensor* bound = nullptr;
        bool needs_grad = false;
        std::vector<Var> parents;
        std::function<void(Tape&, std::size_t)> back;
    };

    static std::string dims(const Tensor& t) {
        return std::to_string(t.rows) + "x" + std::to_string(t.cols);
    }

    bool needs(Var v) const { return nodes_[v.id].needs_grad; }

    std::vector<double>& gbuf(Var v) { return nodes_[v.id].g; }

    template <class F>
    Var unary(Var av, Tensor out, F df) {
        return push(std::move(out), nullptr, needs(av), {av},
                    [df](Tape& t, std::size_t self) {
                        const Node& n = t.nodes_[self];
                        if (!t.needs(n.parents[0])) return;
                        const Tensor& x = t.val(n.parents[0]);
                        std::vector<double>& da = t.gbuf(n.parents[0]);
                        for (std::size_t k = 0; k < n.g.size(); ++k)
                            da[k] += df(n.g[k], x.data[k], n.value.data[k]);
                    });
    }

    Var push(Tensor value, Tensor* bound, bool needs_grad, std::vector<Var> parents,
             std::function<void(Tape&, std::size_t)> back = nullptr) {
        Node n;
        n.value = std::move(value);
        n.bound = bound;
        n.needs_grad = needs_grad || bound != nullptr;
        n.parents = std::move(parents);
        n.back = std::move(back);
        nodes_.push_back(std::move(n));
        return Var{nodes_.size() - 1};
    }

    static void mm(const double* a, const double* b, double* out, std::size_t m, std::size_t k,
                   std::size_t p) {
        for (std::size_t i = 0; i < m; ++i) {
            double* orow = out + i * p;
            for (std::size_t q = 0; q < k; ++q) {
                const double aiq = a[i * k + q];
                if (aiq == 0.0) continue;
                const double* brow = b + q * p;
                for (std::size_t j = 0; j < p; ++j) orow[j] += aiq * brow[j];
            }
        }
    }

    std::vector<Node> nodes_;
};

} // namespace provcf
