#include "rmh/harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "rmh/errors.hpp"
#include "rmh/io.hpp"

namespace rmh {

StudyConfig parse_study_config(const nlohmann::json& doc, const std::string& context) {
    if (!doc.is_object()) throw input_error(context + ": expected a JSON object");
    StudyConfig config;
    if (!doc.contains("spec")) throw input_error(context + ": missing key \"spec\"");
    config.spec_path = doc["spec"].get<std::string>();
    config.block_size = doc.value("block_size", config.block_size);
    config.shape_a = doc.value("shape_a", config.shape_a);
    config.shape_b = doc.value("shape_b", config.shape_b);
    config.n_params = doc.value("n_params", config.n_params);
    config.n_reps = doc.value("n_reps", config.n_reps);
    if (doc.contains("corruption_counts")) {
        config.corruption_counts.clear();
        const auto& counts = doc["corruption_counts"];
        if (!counts.is_array())
            throw input_error(context + ": \"corruption_counts\" must be an array");
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (!counts[i].is_number_integer() || counts[i].get<int>() < 0)
                throw input_error(context + ": corruption_counts[" + std::to_string(i) +
                                  "] must be a nonnegative integer");
            config.corruption_counts.push_back(counts[i].get<int>());
        }
    }
    if (doc.contains("perturbation")) {
        const auto& p = doc["perturbation"];
        config.relative_sd = p.value("relative_sd", config.relative_sd);
        if (p.contains("mode")) {
            const std::string mode = p["mode"].get<std::string>();
            if (mode == "population") config.perturb_mode = PerturbMode::population;
            else if (mode == "per-individual") config.perturb_mode = PerturbMode::per_individual;
            else
                throw input_error(context + ": perturbation.mode must be \"population\" or "
                                  "\"per-individual\", got \"" + mode + "\"");
        }
    }
    config.population_size = doc.value("population_size", config.population_size);
    config.alpha = doc.value("alpha", config.alpha);
    config.master_seed = doc.value("master_seed", config.master_seed);
    config.run_methods = doc.value("run_methods", config.run_methods);
    config.threads = doc.value("threads", config.threads);

    if (config.n_params < 1 || config.n_reps < 1)
        throw input_error(context + ": n_params and n_reps must be >= 1");
    if (config.population_size < 1)
        throw input_error(context + ": population_size must be >= 1");
    if (!(config.alpha > 0 && config.alpha < 1))
        throw input_error(context + ": alpha must be in (0,1)");
    if (config.relative_sd < 0) throw input_error(context + ": relative_sd must be >= 0");
    if (config.corruption_counts.empty())
        throw input_error(context + ": corruption_counts must not be empty");
    return config;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("study config: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("study config: " + path.string() + ": " + e.what());
    }
    StudyConfig config = parse_study_config(doc, "study config " + path.string());
    // Spec paths resolve against the config file's directory.
    if (!config.spec_path.is_absolute())
        config.spec_path = path.parent_path() / config.spec_path;
    return config;
}

namespace {

struct ReplicateOutput {
    bool global_reject = false;
    double delta_bic = 0.0;
    std::vector<std::vector<char>> cell_rejected;  // per method, per cell
    std::vector<std::vector<double>> p_profile;    // per method, sorted
};

} // namespace

StudyResult run_study(const StudyConfig& config) {
    HierarchySpec spec = load_hierarchy_spec(config.spec_path);
    if (config.block_size > 0)
        spec.block_sizes.assign(static_cast<std::size_t>(spec.k_star()), config.block_size);
    const ParameterGroups groups = build_parameter_groups(spec);
    const int k_star = spec.k_star();
    const Seed master{config.master_seed};

    StudyResult result;
    result.k_star = k_star;
    result.alpha = config.alpha;
    if (config.run_methods) {
        result.methods = {TestMethod::wilks_individual, TestMethod::wilks_aggregated};
        if (config.population_size >= 2) {
            result.methods.push_back(TestMethod::anova);
            result.methods.push_back(TestMethod::friedman);
        }
    }

    std::vector<int> arms{0};
    if (config.relative_sd > 0) arms.push_back(1);

    const int reps_per_point = config.n_params * config.n_reps;
    const std::size_t n_points = arms.size() * config.corruption_counts.size();
    const std::size_t n_jobs = n_points * static_cast<std::size_t>(reps_per_point);
    std::vector<ReplicateOutput> outputs(n_jobs);

    auto run_job = [&](std::size_t job) {
        const std::size_t point = job / static_cast<std::size_t>(reps_per_point);
        const int rep_index = static_cast<int>(job % static_cast<std::size_t>(reps_per_point));
        const int param_index = rep_index / config.n_reps;
        const bool perturbed = arms[point / config.corruption_counts.size()] == 1;
        const int corruption =
            config.corruption_counts[point % config.corruption_counts.size()];

        FlatModel model =
            draw_model_parameters(groups, spec.block_sizes, config.shape_a, config.shape_b,
                                  master.stream("params").index(static_cast<std::uint64_t>(param_index)));
        if (corruption > 0)
            model = corrupt_parameters(
                model, groups, corruption, config.shape_a, config.shape_b,
                master.stream("corrupt")
                    .index(static_cast<std::uint64_t>(param_index))
                    .index(static_cast<std::uint64_t>(corruption)));

        PerturbedModel perturbed_model;
        if (perturbed)
            perturbed_model = perturb_parameters(
                model, config.relative_sd, config.perturb_mode,
                master.stream("perturb").index(static_cast<std::uint64_t>(job)));

        const Seed graph_seed = master.stream("graphs").index(static_cast<std::uint64_t>(job));
        std::vector<BlockSummary> population;
        population.reserve(static_cast<std::size_t>(config.population_size));
        for (int s = 0; s < config.population_size; ++s) {
            const FlatModel eff =
                perturbed ? perturbed_model.effective(static_cast<std::uint64_t>(s)) : model;
            population.push_back(
                sample_block_summary(eff, graph_seed.index(static_cast<std::uint64_t>(s))));
        }

        ReplicateOutput& out = outputs[job];
        out.global_reject =
            wilks_global(population[0], groups).p_value <= config.alpha;
        out.delta_bic = bic_delta(population[0], groups).delta;
        if (!result.methods.empty()) {
            out.cell_rejected.resize(result.methods.size());
            out.p_profile.resize(result.methods.size());
            for (std::size_t m = 0; m < result.methods.size(); ++m) {
                const TestReport report =
                    run_tests(population, groups, result.methods[m], config.alpha);
                std::vector<char> rejected(report.rejection_matrix.size(), 0);
                for (std::size_t c = 0; c < rejected.size(); ++c)
                    rejected[c] = report.rejection_matrix[c] == 1 ? 1 : 0;
                out.cell_rejected[m] = std::move(rejected);
                out.p_profile[m].reserve(report.p_profile.size());
                for (const auto& [p, line] : report.p_profile) out.p_profile[m].push_back(p);
            }
        }
    };

    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    if (n_threads > 1 && n_jobs > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t job = next.fetch_add(1); job < n_jobs;
                     job = next.fetch_add(1))
                    run_job(job);
            });
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t job = 0; job < n_jobs; ++job) run_job(job);
    }

    // Deterministic reduction in (arm, corruption, replicate) order.
    for (std::size_t point = 0; point < n_points; ++point) {
        SweepPoint sp;
        sp.perturbed = arms[point / config.corruption_counts.size()] == 1;
        sp.corruption = config.corruption_counts[point % config.corruption_counts.size()];
        sp.replicates = reps_per_point;
        double delta_sum = 0.0, delta_sq = 0.0;
        int rejects = 0;
        sp.reject_fraction.assign(result.methods.size(),
                                  std::vector<double>(static_cast<std::size_t>(k_star) *
                                                          static_cast<std::size_t>(k_star),
                                                      0.0));
        std::vector<std::vector<double>> profile_sum(result.methods.size());
        std::vector<std::vector<int>> profile_count(result.methods.size());
        for (int r = 0; r < reps_per_point; ++r) {
            const ReplicateOutput& out =
                outputs[point * static_cast<std::size_t>(reps_per_point) +
                        static_cast<std::size_t>(r)];
            rejects += out.global_reject ? 1 : 0;
            delta_sum += out.delta_bic;
            delta_sq += out.delta_bic * out.delta_bic;
            for (std::size_t m = 0; m < result.methods.size(); ++m) {
                for (std::size_t c = 0; c < out.cell_rejected[m].size(); ++c)
                    sp.reject_fraction[m][c] += out.cell_rejected[m][c];
                auto& sums = profile_sum[m];
                auto& counts = profile_count[m];
                if (sums.size() < out.p_profile[m].size()) {
                    sums.resize(out.p_profile[m].size(), 0.0);
                    counts.resize(out.p_profile[m].size(), 0);
                }
                for (std::size_t i = 0; i < out.p_profile[m].size(); ++i) {
                    sums[i] += out.p_profile[m][i];
                    ++counts[i];
                }
            }
        }
        sp.global_rejection_rate = static_cast<double>(rejects) / sp.replicates;
        sp.mean_delta_bic = delta_sum / sp.replicates;
        const double var =
            delta_sq / sp.replicates - sp.mean_delta_bic * sp.mean_delta_bic;
        sp.delta_bic_sd = var > 0 ? std::sqrt(var) : 0.0;
        for (std::size_t m = 0; m < result.methods.size(); ++m) {
            for (double& f : sp.reject_fraction[m]) f /= sp.replicates;
            std::vector<double> profile(profile_sum[m].size());
            for (std::size_t i = 0; i < profile.size(); ++i)
                profile[i] = profile_sum[m][i] / profile_count[m][i];
            sp.mean_p_profile.push_back(std::move(profile));
        }
        result.points.push_back(std::move(sp));
    }
    return result;
}

void emit_figures(const StudyResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "rejection_curve.csv");
        if (!out) throw input_error("cannot write " + (out_dir / "rejection_curve.csv").string());
        out << "mode,corruption_count,global_rejection_rate,mean_delta_bic,delta_bic_sd,"
               "replicates\n";
        for (const SweepPoint& sp : result.points)
            out << (sp.perturbed ? "perturbed" : "novar") << ',' << sp.corruption << ','
                << format_double(sp.global_rejection_rate) << ','
                << format_double(sp.mean_delta_bic) << ',' << format_double(sp.delta_bic_sd)
                << ',' << sp.replicates << '\n';
    }
    const int k = result.k_star;
    for (const SweepPoint& sp : result.points) {
        const std::string arm = sp.perturbed ? "perturbed" : "novar";
        for (std::size_t m = 0; m < result.methods.size(); ++m) {
            const std::string tag =
                method_name(result.methods[m]) + "_" + arm + "_c" + std::to_string(sp.corruption);
            {
                std::ofstream out(out_dir / ("rejection_matrix_" + tag + ".csv"));
                for (int i = 0; i < k; ++i) {
                    for (int j = 0; j < k; ++j) {
                        if (j) out << ',';
                        out << format_double(
                            sp.reject_fraction[m][static_cast<std::size_t>(i * k + j)]);
                    }
                    out << '\n';
                }
            }
            {
                std::ofstream out(out_dir / ("p_profile_" + tag + ".csv"));
                out << "rank,mean_p,bh_line\n";
                const std::size_t len = sp.mean_p_profile[m].size();
                for (std::size_t i = 0; i < len; ++i)
                    out << (i + 1) << ',' << format_double(sp.mean_p_profile[m][i]) << ','
                        << format_double(static_cast<double>(i + 1) * result.alpha /
                                         static_cast<double>(len))
                        << '\n';
            }
        }
    }
}

} // namespace rmh
