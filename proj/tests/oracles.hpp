#pragma once

// Test-side oracles. These stay independent of the library paths they check:
// gradients come from central differences, Adam from a scalar transcription,
// metrics from direct counting.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "provcf/tape.hpp"
#include "provcf/tensor.hpp"

namespace oracles {

struct GradCheck {
    double max_rel_err = 0.0;
    std::size_t checked = 0;
    std::size_t failures = 0;
};

// Central-difference check of d(loss)/d(param) for every entry of every
// parameter. `build` must assemble the loss from the parameters' *current*
// values on the given tape.
template <class BuildLoss>
GradCheck finite_diff_check(std::vector<provcf::Tensor*> params, BuildLoss build,
                            double h = 1e-5, double rel_tol = 1e-3, double abs_tol = 1e-6) {
    using provcf::Tape;
    using provcf::Var;

    auto eval = [&]() {
        Tape t;
        Var loss = build(t);
        return t.val(loss).at(0, 0);
    };

    for (auto* p : params) p->zero_grad();
    std::vector<std::vector<double>> analytic;
    {
        Tape t;
        Var loss = build(t);
        t.backward(loss);
        for (auto* p : params) analytic.push_back(p->grad);
    }

    GradCheck out;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        provcf::Tensor& p = *params[pi];
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double saved = p.data[k];
            p.data[k] = saved + h;
            const double lp = eval();
            p.data[k] = saved - h;
            const double lm = eval();
            p.data[k] = saved;
            const double fd = (lp - lm) / (2.0 * h);
            const double an = analytic[pi][k];
            const double abs_err = std::fabs(an - fd);
            const double denom = std::max(std::fabs(an), std::fabs(fd));
            ++out.checked;
            if (abs_err <= abs_tol) continue;
            const double rel = abs_err / denom;
            out.max_rel_err = std::max(out.max_rel_err, rel);
            if (rel > rel_tol) ++out.failures;
        }
    }
    return out;
}

// Independent scalar Adam, transcribed from the standard update rule.
struct ScalarAdam {
    double lr, b1, b2, eps;
    double m = 0.0, v = 0.0;
    long t = 0;

    double step(double x, double g) {
        ++t;
        m = b1 * m + (1 - b1) * g;
        v = b2 * v + (1 - b2) * g * g;
        const double mhat = m / (1 - std::pow(b1, t));
        const double vhat = v / (1 - std::pow(b2, t));
        return x - lr * mhat / (std::sqrt(vhat) + eps);
    }
};

} // namespace oracles
