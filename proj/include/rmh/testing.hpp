#ifndef RMH_TESTING_HPP
#define RMH_TESTING_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmh/estimation.hpp"
#include "rmh/hierarchy.hpp"

namespace rmh {

enum class TestMethod { wilks_individual, wilks_aggregated, anova, friedman, wilks_global };

std::string method_name(TestMethod method);
TestMethod parse_method(const std::string& name);

enum class Decision { fail = 0, reject = 1, trivial_zero = 2, not_testable = 3 };

std::string decision_name(Decision d);

struct TestOutcome {
    int group_id = -1;  // -1 for the global test
    TestMethod method = TestMethod::wilks_global;
    double statistic = 0.0;
    int df1 = 0;
    int df2 = 0;                 // denominator df, ANOVA only
    double p_value = 1.0;
    Decision decision = Decision::fail;
    double rejection_rate = -1.0;  // fraction of graphs rejecting, individual method only
};

/// Per-graph per-cell estimates for one group's cells, with dyad weights.
struct PopulationEstimates {
    std::vector<int> cells;
    std::vector<std::vector<double>> estimates;   // [graph][cell position]
    std::vector<std::vector<long long>> weights;  // matching dyad counts
};

PopulationEstimates population_estimates(std::span<const BlockSummary> population,
                                         const ParameterGroup& group);

/// Wilks chi-square test of one group's tie on a single summary.
TestOutcome wilks_local(const BlockSummary& summary, const ParameterGroups& groups,
                        int group_id);

/// Global Wilks test pooling every testable, non-degenerate group.
TestOutcome wilks_global(const BlockSummary& summary, const ParameterGroups& groups);

/// Per-graph local Wilks tests with BH within each graph; returns the
/// fraction of graphs rejecting each group (NaN for groups not tested).
std::vector<double> individual_rejection_rates(std::span<const BlockSummary> population,
                                               const ParameterGroups& groups, double alpha);

/// Balanced one-way fixed-effects ANOVA with the group's cells as levels and
/// the per-graph estimates as observations.
TestOutcome anova_local(const PopulationEstimates& estimates, int group_id);

/// Friedman rank test: graphs are rows, cells are columns, average ranks on
/// ties, standard tie-correction divisor.
TestOutcome friedman_local(const PopulationEstimates& estimates, int group_id);

/// Benjamini-Hochberg step-up decisions at level alpha, in input order.
std::vector<bool> bh_correct(std::span<const double> p_values, double alpha);

struct TestReport {
    TestMethod method = TestMethod::wilks_aggregated;
    double alpha = 0.05;
    int k_star = 0;
    int m = 0;  // hypotheses entering BH
    std::vector<TestOutcome> groups;
    std::vector<std::pair<double, double>> p_profile;  // sorted (p, i*alpha/m)
    std::vector<int> rejection_matrix;                 // K* x K* codes, row-major
};

/// Dispatches one method over the population, applies BH across the
/// testable, non-trivial groups, and assembles the profile and the coded
/// rejection matrix (0 fail, 1 reject, 2 trivial-zero, 3 not-testable).
TestReport run_tests(std::span<const BlockSummary> population,
                     const ParameterGroups& groups, TestMethod method, double alpha);

/// Pools the population, runs the local Wilks test per group on the pooled
/// summary, then BH across groups.
TestReport aggregated_test(std::span<const BlockSummary> population,
                           const ParameterGroups& groups, double alpha);

} // namespace rmh

#endif
