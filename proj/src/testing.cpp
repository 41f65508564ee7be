#include "rmh/testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rmh/special_functions.hpp"

namespace rmh {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

std::string method_name(TestMethod method) {
    switch (method) {
        case TestMethod::wilks_individual: return "wilks-individual";
        case TestMethod::wilks_aggregated: return "wilks-aggregated";
        case TestMethod::anova: return "anova";
        case TestMethod::friedman: return "friedman";
        case TestMethod::wilks_global: return "wilks-global";
    }
    return "?";
}

TestMethod parse_method(const std::string& name) {
    if (name == "wilks-individual") return TestMethod::wilks_individual;
    if (name == "wilks-aggregated") return TestMethod::wilks_aggregated;
    if (name == "anova") return TestMethod::anova;
    if (name == "friedman") return TestMethod::friedman;
    if (name == "wilks-global") return TestMethod::wilks_global;
    throw std::invalid_argument("unknown test method \"" + name + "\"");
}

std::string decision_name(Decision d) {
    switch (d) {
        case Decision::fail: return "fail";
        case Decision::reject: return "reject";
        case Decision::trivial_zero: return "trivial-zero";
        case Decision::not_testable: return "not-testable";
    }
    return "?";
}

PopulationEstimates population_estimates(std::span<const BlockSummary> population,
                                         const ParameterGroup& group) {
    PopulationEstimates out;
    out.cells = group.cells;
    out.estimates.reserve(population.size());
    out.weights.reserve(population.size());
    for (const BlockSummary& s : population) {
        std::vector<double> est;
        std::vector<long long> w;
        est.reserve(group.cells.size());
        w.reserve(group.cells.size());
        for (int c : group.cells) {
            const long long n = s.dyads[static_cast<std::size_t>(c)];
            w.push_back(n);
            est.push_back(n > 0 ? static_cast<double>(s.edges[static_cast<std::size_t>(c)]) /
                                      static_cast<double>(n)
                                : kNaN);
        }
        out.estimates.push_back(std::move(est));
        out.weights.push_back(std::move(w));
    }
    return out;
}

namespace {

// Shared core: the per-cell estimates are computed once per summary by the
// callers that sweep many groups.
TestOutcome wilks_outcome(const BlockSummary& summary, const ParameterGroup& group,
                          std::span<const double> alt) {
    TestOutcome out;
    out.group_id = group.id;
    out.method = TestMethod::wilks_individual;
    long long n = 0, e = 0;
    for (int c : group.cells) {
        n += summary.dyads[static_cast<std::size_t>(c)];
        e += summary.edges[static_cast<std::size_t>(c)];
    }
    const double null_est = n > 0 ? static_cast<double>(e) / static_cast<double>(n) : kNaN;
    const LocalLlr local = llr_local(summary, group, alt, null_est);
    out.statistic = local.stat;
    out.df1 = local.df;
    if (local.df < 1) {
        out.decision = Decision::not_testable;
        out.p_value = kNaN;
        return out;
    }
    out.p_value = chi2_sf(local.stat, local.df).value;
    return out;
}

} // namespace

TestOutcome wilks_local(const BlockSummary& summary, const ParameterGroups& groups,
                        int group_id) {
    if (group_id < 0 || group_id >= static_cast<int>(groups.size()))
        throw std::invalid_argument("wilks_local: unknown group id");
    return wilks_outcome(summary, groups.groups[static_cast<std::size_t>(group_id)],
                         mle_alt(summary));
}

TestOutcome wilks_global(const BlockSummary& summary, const ParameterGroups& groups) {
    const LlrReport report = llr_report(summary, groups);
    TestOutcome out;
    out.method = TestMethod::wilks_global;
    double stat = 0.0;
    int df = 0;
    for (const LocalLlr& local : report.locals) {
        if (local.df < 1 || local.degenerate) continue;
        stat += local.stat;
        df += local.df;
    }
    out.statistic = stat;
    out.df1 = df;
    if (df < 1) throw std::invalid_argument("wilks_global: no testable groups");
    out.p_value = chi2_sf(stat, df).value;
    return out;
}

TestOutcome anova_local(const PopulationEstimates& estimates, int group_id) {
    const std::size_t big_s = estimates.estimates.size();
    const std::size_t k = estimates.cells.size();
    if (big_s < 2) throw std::invalid_argument("anova_local: need at least 2 graphs");
    if (k < 2) throw std::invalid_argument("anova_local: need at least 2 cells");
    for (const auto& row : estimates.estimates)
        for (double v : row)
            if (std::isnan(v)) throw std::invalid_argument("anova_local: undefined estimate");

    TestOutcome out;
    out.group_id = group_id;
    out.method = TestMethod::anova;
    out.df1 = static_cast<int>(k) - 1;
    out.df2 = static_cast<int>(k) * (static_cast<int>(big_s) - 1);

    std::vector<double> level_mean(k, 0.0);
    double grand = 0.0;
    for (const auto& row : estimates.estimates)
        for (std::size_t j = 0; j < k; ++j) level_mean[j] += row[j];
    for (std::size_t j = 0; j < k; ++j) {
        level_mean[j] /= static_cast<double>(big_s);
        grand += level_mean[j];
    }
    grand /= static_cast<double>(k);

    double ssb = 0.0, ssw = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double d = level_mean[j] - grand;
        ssb += d * d;
    }
    ssb *= static_cast<double>(big_s);
    for (const auto& row : estimates.estimates)
        for (std::size_t j = 0; j < k; ++j) {
            const double d = row[j] - level_mean[j];
            ssw += d * d;
        }

    if (ssw == 0.0) {
        if (ssb == 0.0) {
            out.statistic = 0.0;
            out.p_value = 1.0;
        } else {
            out.statistic = kInf;
            out.p_value = 0.0;
        }
        return out;
    }
    out.statistic = (ssb / out.df1) / (ssw / out.df2);
    out.p_value = f_sf(out.statistic, out.df1, out.df2).value;
    return out;
}

TestOutcome friedman_local(const PopulationEstimates& estimates, int group_id) {
    const std::size_t big_s = estimates.estimates.size();
    const std::size_t k = estimates.cells.size();
    if (big_s < 2) throw std::invalid_argument("friedman_local: need at least 2 graphs");
    if (k < 2) throw std::invalid_argument("friedman_local: need at least 2 cells");

    TestOutcome out;
    out.group_id = group_id;
    out.method = TestMethod::friedman;
    out.df1 = static_cast<int>(k) - 1;

    std::vector<double> rank_sum(k, 0.0);
    double tie_sum = 0.0;  // sum over rows of sum over tie runs of t^3 - t
    std::vector<std::size_t> order(k);
    for (const auto& row : estimates.estimates) {
        for (double v : row)
            if (std::isnan(v))
                throw std::invalid_argument("friedman_local: undefined estimate");
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
        std::size_t i = 0;
        while (i < k) {
            std::size_t j = i;
            while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
            const double t = static_cast<double>(j - i + 1);
            const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
            for (std::size_t q = i; q <= j; ++q) rank_sum[order[q]] += avg_rank;
            tie_sum += t * t * t - t;
            i = j + 1;
        }
    }

    const double kd = static_cast<double>(k);
    const double sd = static_cast<double>(big_s);
    double q_raw = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double d = rank_sum[j] / sd - 0.5 * (kd + 1.0);
        q_raw += d * d;
    }
    q_raw *= 12.0 * sd / (kd * (kd + 1.0));
    const double correction = 1.0 - tie_sum / (sd * kd * (kd * kd - 1.0));
    if (correction <= 0.0) {
        out.statistic = 0.0;  // every row fully tied
        out.p_value = 1.0;
        return out;
    }
    out.statistic = q_raw / correction;
    out.p_value = chi2_sf(out.statistic, out.df1).value;
    return out;
}

std::vector<bool> bh_correct(std::span<const double> p_values, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("bh_correct: alpha must be in (0,1)");
    const std::size_t m = p_values.size();
    std::vector<bool> reject(m, false);
    if (m == 0) return reject;
    for (double p : p_values)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("bh_correct: p-values must be in [0,1]");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p_values[a] < p_values[b];
    });
    std::size_t cut = 0;
    for (std::size_t i = 1; i <= m; ++i)
        if (p_values[order[i - 1]] <=
            static_cast<double>(i) * alpha / static_cast<double>(m))
            cut = i;
    for (std::size_t i = 0; i < cut; ++i) reject[order[i]] = true;
    return reject;
}

std::vector<double> individual_rejection_rates(std::span<const BlockSummary> population,
                                               const ParameterGroups& groups, double alpha) {
    if (population.empty())
        throw std::invalid_argument("individual_rejection_rates: empty population");
    const std::size_t n_groups = groups.size();

    // Groups enter every graph's BH round only if testable in all of them.
    std::vector<char> eligible(n_groups, 1);
    for (const BlockSummary& s : population) {
        for (const auto& g : groups.groups) {
            int defined = 0;
            for (int c : g.cells)
                if (s.dyads[static_cast<std::size_t>(c)] > 0) ++defined;
            if (defined < 2) eligible[static_cast<std::size_t>(g.id)] = 0;
        }
    }

    std::vector<double> rates(n_groups, kNaN);
    std::vector<int> reject_count(n_groups, 0);
    std::vector<int> tested_ids;
    for (const auto& g : groups.groups)
        if (eligible[static_cast<std::size_t>(g.id)]) tested_ids.push_back(g.id);
    if (tested_ids.empty()) return rates;

    std::vector<double> pvals;
    for (const BlockSummary& s : population) {
        const std::vector<double> alt = mle_alt(s);
        pvals.clear();
        for (int gid : tested_ids)
            pvals.push_back(
                wilks_outcome(s, groups.groups[static_cast<std::size_t>(gid)], alt).p_value);
        const std::vector<bool> rej = bh_correct(pvals, alpha);
        for (std::size_t i = 0; i < tested_ids.size(); ++i)
            if (rej[i]) ++reject_count[static_cast<std::size_t>(tested_ids[i])];
    }
    for (int gid : tested_ids)
        rates[static_cast<std::size_t>(gid)] =
            static_cast<double>(reject_count[static_cast<std::size_t>(gid)]) /
            static_cast<double>(population.size());
    return rates;
}

namespace {

void assemble_report(TestReport& report, const ParameterGroups& groups,
                     const std::vector<int>& tested_ids) {
    // Profile over the BH'd hypotheses.
    std::vector<double> ps;
    for (int gid : tested_ids)
        ps.push_back(report.groups[static_cast<std::size_t>(gid)].p_value);
    std::sort(ps.begin(), ps.end());
    report.m = static_cast<int>(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i)
        report.p_profile.emplace_back(
            ps[i], static_cast<double>(i + 1) * report.alpha / static_cast<double>(ps.size()));

    const int k = report.k_star;
    report.rejection_matrix.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0);
    for (int l = 0; l < k; ++l) {
        for (int c = l; c < k; ++c) {
            const int gid = groups.group_of_cell[static_cast<std::size_t>(cell_id(l, c, k))];
            const int code =
                static_cast<int>(report.groups[static_cast<std::size_t>(gid)].decision);
            report.rejection_matrix[static_cast<std::size_t>(l * k + c)] = code;
            report.rejection_matrix[static_cast<std::size_t>(c * k + l)] = code;
        }
    }
}

} // namespace

TestReport run_tests(std::span<const BlockSummary> population,
                     const ParameterGroups& groups, TestMethod method, double alpha) {
    if (population.empty()) throw std::invalid_argument("run_tests: empty population");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("run_tests: alpha must be in (0,1)");
    if (method == TestMethod::wilks_global)
        throw std::invalid_argument("run_tests: use wilks_global() for the global test");
    for (const BlockSummary& s : population)
        if (s.k_star != groups.k_star)
            throw std::invalid_argument("run_tests: population K* does not match groups");

    const std::size_t n_groups = groups.size();
    const std::size_t big_s = population.size();

    TestReport report;
    report.method = method;
    report.alpha = alpha;
    report.k_star = groups.k_star;
    report.groups.assign(n_groups, {});

    // Classification shared by all methods.
    std::vector<char> zero_everywhere(n_groups, 1);
    std::vector<char> defined_everywhere(n_groups, 1);
    std::vector<char> testable_everywhere(n_groups, 1);
    for (const auto& g : groups.groups) {
        for (const BlockSummary& s : population) {
            int defined = 0;
            for (int c : g.cells) {
                if (s.edges[static_cast<std::size_t>(c)] != 0)
                    zero_everywhere[static_cast<std::size_t>(g.id)] = 0;
                if (s.dyads[static_cast<std::size_t>(c)] > 0) ++defined;
                else defined_everywhere[static_cast<std::size_t>(g.id)] = 0;
            }
            if (defined < 2) testable_everywhere[static_cast<std::size_t>(g.id)] = 0;
        }
    }

    std::vector<int> tested_ids;
    auto classify = [&](const ParameterGroup& g, bool needs_all_cells) -> Decision {
        const auto id = static_cast<std::size_t>(g.id);
        const bool testable = needs_all_cells
            ? (g.cells.size() >= 2 && defined_everywhere[id] && big_s >= 2)
            : static_cast<bool>(testable_everywhere[id]);
        if (!testable) return Decision::not_testable;
        if (zero_everywhere[id]) return Decision::trivial_zero;
        return Decision::fail;
    };

    switch (method) {
        case TestMethod::wilks_individual: {
            for (const auto& g : groups.groups) {
                TestOutcome& out = report.groups[static_cast<std::size_t>(g.id)];
                out.group_id = g.id;
                out.method = method;
                out.df1 = g.df();
                out.decision = classify(g, false);
                if (out.decision == Decision::fail) {
                    out.statistic = 0.0;
                    out.p_value = 0.0;  // accumulates the mean over graphs below
                    tested_ids.push_back(g.id);
                }
            }
            std::vector<int> reject_count(n_groups, 0);
            std::vector<double> pvals;
            for (std::size_t s = 0; s < big_s; ++s) {
                const std::vector<double> alt = mle_alt(population[s]);
                pvals.clear();
                for (int gid : tested_ids) {
                    const TestOutcome o = wilks_outcome(
                        population[s], groups.groups[static_cast<std::size_t>(gid)], alt);
                    TestOutcome& acc = report.groups[static_cast<std::size_t>(gid)];
                    acc.statistic += o.statistic / static_cast<double>(big_s);
                    acc.p_value += o.p_value / static_cast<double>(big_s);
                    pvals.push_back(o.p_value);
                }
                const std::vector<bool> rej = bh_correct(pvals, alpha);
                for (std::size_t i = 0; i < tested_ids.size(); ++i)
                    if (rej[i]) ++reject_count[static_cast<std::size_t>(tested_ids[i])];
            }
            for (int gid : tested_ids) {
                TestOutcome& out = report.groups[static_cast<std::size_t>(gid)];
                out.rejection_rate =
                    static_cast<double>(reject_count[static_cast<std::size_t>(gid)]) /
                    static_cast<double>(big_s);
                // Display threshold of 0.5 on the rate; the raw rate is kept.
                out.decision =
                    out.rejection_rate >= 0.5 ? Decision::reject : Decision::fail;
            }
            break;
        }
        case TestMethod::wilks_aggregated: {
            const BlockSummary pooled = aggregate_summaries(population);
            const std::vector<double> pooled_alt = mle_alt(pooled);
            std::vector<double> pvals;
            for (const auto& g : groups.groups) {
                TestOutcome& out = report.groups[static_cast<std::size_t>(g.id)];
                out.group_id = g.id;
                out.method = method;
                out.df1 = g.df();
                // Testability is judged on the pooled counts: a cell empty in
                // one graph may still carry dyads after pooling.
                int defined = 0;
                for (int c : g.cells)
                    if (pooled.dyads[static_cast<std::size_t>(c)] > 0) ++defined;
                out.decision = defined < 2 ? Decision::not_testable
                               : zero_everywhere[static_cast<std::size_t>(g.id)]
                                   ? Decision::trivial_zero
                                   : Decision::fail;
                if (out.decision != Decision::fail) continue;
                const TestOutcome o = wilks_outcome(pooled, g, pooled_alt);
                out.statistic = o.statistic;
                out.df1 = o.df1;
                out.p_value = o.p_value;
                tested_ids.push_back(g.id);
                pvals.push_back(o.p_value);
            }
            const std::vector<bool> rej = bh_correct(pvals, alpha);
            for (std::size_t i = 0; i < tested_ids.size(); ++i)
                if (rej[i])
                    report.groups[static_cast<std::size_t>(tested_ids[i])].decision =
                        Decision::reject;
            break;
        }
        case TestMethod::anova:
        case TestMethod::friedman: {
            if (big_s < 2)
                throw std::invalid_argument("run_tests: " + method_name(method) +
                                            " needs at least 2 graphs");
            std::vector<double> pvals;
            for (const auto& g : groups.groups) {
                TestOutcome& out = report.groups[static_cast<std::size_t>(g.id)];
                out.group_id = g.id;
                out.method = method;
                out.df1 = g.df();
                out.decision = classify(g, true);
                if (out.decision != Decision::fail) continue;
                const PopulationEstimates est = population_estimates(population, g);
                out = method == TestMethod::anova ? anova_local(est, g.id)
                                                  : friedman_local(est, g.id);
                tested_ids.push_back(g.id);
                pvals.push_back(out.p_value);
            }
            const std::vector<bool> rej = bh_correct(pvals, alpha);
            for (std::size_t i = 0; i < tested_ids.size(); ++i)
                if (rej[i])
                    report.groups[static_cast<std::size_t>(tested_ids[i])].decision =
                        Decision::reject;
            break;
        }
        case TestMethod::wilks_global:
            break;  // rejected above
    }

    assemble_report(report, groups, tested_ids);
    return report;
}

TestReport aggregated_test(std::span<const BlockSummary> population,
                           const ParameterGroups& groups, double alpha) {
    return run_tests(population, groups, TestMethod::wilks_aggregated, alpha);
}

} // namespace rmh
