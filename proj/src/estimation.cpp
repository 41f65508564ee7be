#include "rmh/estimation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rmh/sampling.hpp"

namespace rmh {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

BlockSummary summarize(const GraphSample& graph, int k_star) {
    if (k_star < 1) throw std::invalid_argument("summarize: k_star must be >= 1");
    BlockSummary s;
    s.k_star = k_star;
    s.vertex_count = graph.vertex_count;
    s.dyads.assign(cell_count(k_star), 0);
    s.edges.assign(cell_count(k_star), 0);

    std::vector<long long> block_sizes(k_star, 0);
    if (static_cast<long long>(graph.membership.size()) != graph.vertex_count)
        throw std::invalid_argument("summarize: membership does not cover all vertices");
    for (int b : graph.membership) {
        if (b < 0 || b >= k_star)
            throw std::invalid_argument("summarize: membership block " + std::to_string(b) +
                                        " outside [0," + std::to_string(k_star) + ")");
        ++block_sizes[b];
    }
    for (int l = 0; l < k_star; ++l) {
        s.dyads[cell_id(l, l, k_star)] = block_sizes[l] * (block_sizes[l] - 1) / 2;
        for (int k = l + 1; k < k_star; ++k)
            s.dyads[cell_id(l, k, k_star)] = block_sizes[l] * block_sizes[k];
    }
    for (const auto& [u, v] : graph.edges) {
        if (u < 0 || v < 0 || u >= graph.vertex_count || v >= graph.vertex_count)
            throw std::invalid_argument("summarize: edge endpoint without membership");
        int l = graph.membership[static_cast<std::size_t>(u)];
        int k = graph.membership[static_cast<std::size_t>(v)];
        if (l > k) std::swap(l, k);
        ++s.edges[cell_id(l, k, k_star)];
    }
    return s;
}

BlockSummary aggregate_summaries(std::span<const BlockSummary> summaries) {
    if (summaries.empty())
        throw std::invalid_argument("aggregate_summaries: empty population");
    BlockSummary out = summaries[0];
    for (std::size_t i = 1; i < summaries.size(); ++i) {
        const BlockSummary& s = summaries[i];
        if (s.k_star != out.k_star)
            throw std::invalid_argument("aggregate_summaries: K* mismatch (" +
                                        std::to_string(s.k_star) + " vs " +
                                        std::to_string(out.k_star) + ")");
        out.vertex_count += s.vertex_count;
        for (std::size_t c = 0; c < out.dyads.size(); ++c) {
            out.dyads[c] += s.dyads[c];
            out.edges[c] += s.edges[c];
        }
    }
    return out;
}

std::vector<double> mle_alt(const BlockSummary& summary) {
    std::vector<double> est(summary.dyads.size(), kNaN);
    for (std::size_t c = 0; c < est.size(); ++c)
        if (summary.dyads[c] > 0)
            est[c] = static_cast<double>(summary.edges[c]) /
                     static_cast<double>(summary.dyads[c]);
    return est;
}

std::vector<double> mle_null(const BlockSummary& summary, const ParameterGroups& groups) {
    std::vector<double> est(groups.size(), kNaN);
    for (const auto& g : groups.groups) {
        long long n = 0, e = 0;
        for (int c : g.cells) {
            n += summary.dyads[static_cast<std::size_t>(c)];
            e += summary.edges[static_cast<std::size_t>(c)];
        }
        if (n > 0) est[static_cast<std::size_t>(g.id)] =
            static_cast<double>(e) / static_cast<double>(n);
    }
    return est;
}

double kl_bernoulli(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("kl_bernoulli: arguments must be in [0,1]");
    double out = 0.0;
    if (p > 0.0) {
        if (q == 0.0) return kInf;
        out += p * std::log(p / q);
    }
    if (p < 1.0) {
        if (q == 1.0) return kInf;
        out += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    }
    return out < 0.0 ? 0.0 : out;  // round tiny negatives from cancellation up to 0
}

LocalLlr llr_local(const BlockSummary& summary, const ParameterGroup& group,
                   std::span<const double> alt, double null_estimate) {
    LocalLlr out;
    out.null_estimate = null_estimate;
    if (std::isnan(null_estimate)) {
        out.degenerate = true;
        out.df = 0;
        return out;
    }
    out.degenerate = (null_estimate == 0.0 || null_estimate == 1.0);
    int defined = 0;
    double stat = 0.0;
    for (int c : group.cells) {
        const long long n = summary.dyads[static_cast<std::size_t>(c)];
        if (n == 0) continue;  // empty cells contribute nothing
        ++defined;
        stat += 2.0 * static_cast<double>(n) *
                kl_bernoulli(alt[static_cast<std::size_t>(c)], null_estimate);
    }
    out.df = defined > 0 ? defined - 1 : 0;
    out.stat = out.degenerate ? 0.0 : stat;
    return out;
}

LlrReport llr_report(const BlockSummary& summary, const ParameterGroups& groups) {
    const std::vector<double> null = mle_null(summary, groups);
    LlrReport report;
    report.alt_estimates = mle_alt(summary);
    report.locals.reserve(groups.size());
    double total = 0.0;
    for (const auto& g : groups.groups) {
        report.locals.push_back(llr_local(summary, g, report.alt_estimates,
                                          null[static_cast<std::size_t>(g.id)]));
        total += report.locals.back().stat;
    }
    report.global = total;
    return report;
}

double llr_global(const BlockSummary& summary, const ParameterGroups& groups) {
    return llr_report(summary, groups).global;
}

BicReport bic_delta(const BlockSummary& summary, const ParameterGroups& groups) {
    if (summary.vertex_count < 3)
        throw std::invalid_argument("bic_delta: need at least 3 vertices");
    BicReport report;
    report.llr = llr_global(summary, groups);
    for (const auto& g : groups.groups)
        report.penalty_df += static_cast<long long>(g.cells.size()) - 1;
    const double n = static_cast<double>(summary.vertex_count);
    report.penalty = static_cast<double>(report.penalty_df) * std::log(n * (n - 1.0) / 2.0);
    report.delta = report.llr - report.penalty;
    report.prefers_rmhsbm = report.delta < 0.0;
    return report;
}

} // namespace rmh
