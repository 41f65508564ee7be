#ifndef RMH_ESTIMATION_HPP
#define RMH_ESTIMATION_HPP

#include <span>
#include <vector>

#include "rmh/hierarchy.hpp"

namespace rmh {

struct GraphSample;

/// Per-cell dyad and edge counts; the sufficient statistic for everything
/// downstream.  dyads = |B_l| * |B_k| off-diagonal, C(|B_l|, 2) on it.
struct BlockSummary {
    int k_star = 0;
    long long vertex_count = 0;
    std::vector<long long> dyads;
    std::vector<long long> edges;
};

BlockSummary summarize(const GraphSample& graph, int k_star);

/// Cell-wise sums; the pooled estimate of a cell is the dyad-count-weighted
/// mean of the per-graph estimates.
BlockSummary aggregate_summaries(std::span<const BlockSummary> summaries);

/// Per-cell MLE e/n under the free SBM; NaN where a cell has no dyads.
std::vector<double> mle_alt(const BlockSummary& summary);

/// Per-group pooled MLE under the tied model; NaN where a group has no dyads.
std::vector<double> mle_null(const BlockSummary& summary, const ParameterGroups& groups);

/// KL divergence between Bernoulli(p) and Bernoulli(q), with the 0*log(0)
/// conventions; +inf only when q in {0,1} and p disagrees.
double kl_bernoulli(double p, double q);

struct LocalLlr {
    double stat = 0.0;       // -2 lambda_gamma = 2 * sum n_cell KL(alt, null)
    int df = 0;              // defined member cells - 1
    bool degenerate = false; // pooled estimate in {0,1} or no dyads at all
    double null_estimate = 0.0;
};

LocalLlr llr_local(const BlockSummary& summary, const ParameterGroup& group,
                   std::span<const double> alt, double null_estimate);

struct LlrReport {
    std::vector<LocalLlr> locals;       // one per group, in group order
    std::vector<double> alt_estimates;  // per-cell MLEs under the free model
    double global = 0.0;                // exact sum of the locals
};

LlrReport llr_report(const BlockSummary& summary, const ParameterGroups& groups);

double llr_global(const BlockSummary& summary, const ParameterGroups& groups);

struct BicReport {
    double delta = 0.0;    // llr - penalty, negative prefers the tied model
    double llr = 0.0;
    double penalty = 0.0;  // (sum over groups of |cells|-1) * log C(n,2)
    long long penalty_df = 0;
    bool prefers_rmhsbm = false;
};

/// BIC difference between the tied model and the free SBM; requires n >= 3.
BicReport bic_delta(const BlockSummary& summary, const ParameterGroups& groups);

} // namespace rmh

#endif
