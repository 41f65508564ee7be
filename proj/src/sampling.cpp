#include "rmh/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rmh/estimation.hpp"

namespace rmh {

namespace {

double clip(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

constexpr double kDrawLo = 0.01, kDrawHi = 0.99;       // parameter draws
constexpr double kEffLo = 0.001, kEffHi = 0.999;       // perturbed effective probs

} // namespace

FlatModel draw_model_parameters(const ParameterGroups& groups,
                                std::vector<long long> block_sizes, double shape_a,
                                double shape_b, Seed seed) {
    if (shape_a <= 0 || shape_b <= 0)
        throw std::invalid_argument("draw_model_parameters: shapes must be positive");
    if (static_cast<int>(block_sizes.size()) != groups.k_star)
        throw std::invalid_argument("draw_model_parameters: block_sizes/K* mismatch");
    Rng rng(seed);
    FlatModel model;
    model.k_star = groups.k_star;
    model.block_sizes = std::move(block_sizes);
    model.probs.assign(cell_count(groups.k_star), 0.0);
    for (const auto& g : groups.groups) {
        const double p = clip(rng.beta(shape_a, shape_b), kDrawLo, kDrawHi);
        for (int c : g.cells) model.probs[static_cast<std::size_t>(c)] = p;
    }
    return model;
}

FlatModel corrupt_parameters(const FlatModel& model, const ParameterGroups& groups,
                             int count, double shape_a, double shape_b, Seed seed) {
    if (count < 0) throw std::invalid_argument("corrupt_parameters: count must be >= 0");
    std::vector<int> eligible;
    for (const auto& g : groups.groups)
        if (g.cells.size() >= 2) eligible.insert(eligible.end(), g.cells.begin(), g.cells.end());
    if (count > static_cast<int>(eligible.size()))
        throw std::invalid_argument("corrupt_parameters: count " + std::to_string(count) +
                                    " exceeds the " + std::to_string(eligible.size()) +
                                    " cells in tied groups");
    FlatModel out = model;
    Rng rng(seed);
    // Partial Fisher-Yates selects the cells without replacement.
    for (int i = 0; i < count; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) +
            static_cast<std::size_t>(rng.uniform_int(eligible.size() - static_cast<std::size_t>(i)));
        std::swap(eligible[static_cast<std::size_t>(i)], eligible[j]);
        out.probs[static_cast<std::size_t>(eligible[static_cast<std::size_t>(i)])] =
            clip(rng.beta(shape_a, shape_b), kDrawLo, kDrawHi);
    }
    return out;
}

namespace {

std::vector<double> draw_deviations(const FlatModel& base, double relative_sd, Seed seed) {
    Rng rng(seed);
    std::vector<double> devs(base.probs.size(), 0.0);
    for (std::size_t c = 0; c < devs.size(); ++c) {
        const double s = rng.normal() * relative_sd * base.probs[c];
        devs[c] = clip(base.probs[c] + s, kEffLo, kEffHi) - base.probs[c];
    }
    return devs;
}

} // namespace

PerturbedModel perturb_parameters(const FlatModel& model, double relative_sd,
                                  PerturbMode mode, Seed seed) {
    if (relative_sd < 0)
        throw std::invalid_argument("perturb_parameters: relative_sd must be >= 0");
    PerturbedModel out;
    out.base = model;
    out.relative_sd = relative_sd;
    out.mode = mode;
    out.seed = seed;
    if (mode == PerturbMode::population)
        out.population_deviations = draw_deviations(model, relative_sd, seed.stream("dev"));
    return out;
}

FlatModel PerturbedModel::effective(std::uint64_t graph_index) const {
    FlatModel out = base;
    if (mode == PerturbMode::population) {
        for (std::size_t c = 0; c < out.probs.size(); ++c)
            out.probs[c] += population_deviations[c];
    } else {
        const std::vector<double> devs =
            draw_deviations(base, relative_sd, seed.stream("dev").index(graph_index));
        for (std::size_t c = 0; c < out.probs.size(); ++c) out.probs[c] += devs[c];
    }
    return out;
}

const std::vector<double>& PerturbedModel::deviations() const {
    if (mode != PerturbMode::population)
        throw std::invalid_argument(
            "PerturbedModel::deviations: only population mode has fixed deviations");
    return population_deviations;
}

GraphSample sample_conditional_sbm(const FlatModel& model, const Membership& tau,
                                   Seed seed) {
    const int k_star = model.k_star;
    for (int b : tau)
        if (b < 0 || b >= k_star)
            throw std::invalid_argument("sample_conditional_sbm: membership block " +
                                        std::to_string(b) + " outside [0," +
                                        std::to_string(k_star) + ")");
    GraphSample g;
    g.vertex_count = static_cast<long long>(tau.size());
    g.membership = tau;
    Rng rng(seed);
    const int n = static_cast<int>(tau.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double p = model.prob(tau[static_cast<std::size_t>(i)],
                                        tau[static_cast<std::size_t>(j)]);
            if (rng.uniform() < p) g.edges.emplace_back(i, j);
        }
    }
    return g;
}

GraphSample sample_conditional_sbm(const PerturbedModel& model, const Membership& tau,
                                   std::uint64_t graph_index, Seed seed) {
    return sample_conditional_sbm(model.effective(graph_index), tau, seed);
}

BlockSummary sample_block_summary(const FlatModel& model, Seed seed) {
    const int k_star = model.k_star;
    if (static_cast<int>(model.block_sizes.size()) != k_star)
        throw std::invalid_argument("sample_block_summary: model has no block sizes");
    BlockSummary s;
    s.k_star = k_star;
    for (long long b : model.block_sizes) s.vertex_count += b;
    s.dyads.assign(cell_count(k_star), 0);
    s.edges.assign(cell_count(k_star), 0);
    Rng rng(seed);
    for (int l = 0; l < k_star; ++l) {
        for (int k = l; k < k_star; ++k) {
            const std::size_t c = static_cast<std::size_t>(cell_id(l, k, k_star));
            const long long n = (l == k)
                ? model.block_sizes[l] * (model.block_sizes[l] - 1) / 2
                : model.block_sizes[l] * model.block_sizes[k];
            s.dyads[c] = n;
            s.edges[c] = rng.binomial(n, model.probs[c]);
        }
    }
    return s;
}

double signal_to_noise(const PerturbedModel& model, const ParameterGroups& groups) {
    const FlatModel eff = model.effective(0);
    const int k_star = eff.k_star;
    double best = 0.0;
    for (const auto& g : groups.groups) {
        double n_gamma = 0.0, sum = 0.0;
        for (int c : g.cells) {
            const auto [l, k] = cell_pair(c, k_star);
            const double n = (l == k)
                ? static_cast<double>(eff.block_sizes[l]) * (eff.block_sizes[l] - 1) / 2.0
                : static_cast<double>(eff.block_sizes[l]) * static_cast<double>(eff.block_sizes[k]);
            n_gamma += n;
            sum += n * eff.probs[static_cast<std::size_t>(c)];
        }
        if (n_gamma == 0.0) continue;
        const double mean = sum / n_gamma;
        double denom = 0.0;
        for (int c : g.cells) {
            const auto [l, k] = cell_pair(c, k_star);
            const double n = (l == k)
                ? static_cast<double>(eff.block_sizes[l]) * (eff.block_sizes[l] - 1) / 2.0
                : static_cast<double>(eff.block_sizes[l]) * static_cast<double>(eff.block_sizes[k]);
            const double d = eff.probs[static_cast<std::size_t>(c)] - mean;
            denom += n * d * d;
        }
        if (denom == 0.0) {
            if (mean > 0.0) return std::numeric_limits<double>::infinity();
            continue;  // no signal, no noise
        }
        best = std::max(best, mean / denom);
    }
    return best;
}

} // namespace rmh
