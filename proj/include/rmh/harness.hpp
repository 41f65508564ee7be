#ifndef RMH_HARNESS_HPP
#define RMH_HARNESS_HPP

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "rmh/hierarchy.hpp"
#include "rmh/sampling.hpp"
#include "rmh/testing.hpp"

namespace rmh {

/// One simulation study: a corruption sweep run with and without parameter
/// perturbation, n_params independent parameterizations times n_reps
/// replicates each, S graphs per replicate.
struct StudyConfig {
    std::filesystem::path spec_path;
    long long block_size = 0;  // > 0 overrides every block size in the spec
    double shape_a = 1.0;
    double shape_b = 1.0;
    int n_params = 20;
    int n_reps = 10;
    std::vector<int> corruption_counts{0};
    double relative_sd = 0.01;
    PerturbMode perturb_mode = PerturbMode::population;
    int population_size = 10;  // S
    double alpha = 0.05;
    std::uint64_t master_seed = 0;
    bool run_methods = true;
    int threads = 0;  // 0 = hardware concurrency
};

StudyConfig parse_study_config(const nlohmann::json& doc, const std::string& context);
StudyConfig load_study_config(const std::filesystem::path& path);

struct SweepPoint {
    bool perturbed = false;
    int corruption = 0;
    int replicates = 0;
    double global_rejection_rate = 0.0;
    double mean_delta_bic = 0.0;
    double delta_bic_sd = 0.0;
    // Per method: fraction of replicates rejecting each cell (K* x K*,
    // row-major) and the mean sorted p-value per profile rank.
    std::vector<std::vector<double>> reject_fraction;
    std::vector<std::vector<double>> mean_p_profile;
};

struct StudyResult {
    int k_star = 0;
    double alpha = 0.05;
    std::vector<TestMethod> methods;
    std::vector<SweepPoint> points;
};

/// Fully deterministic given the config (including thread count changes).
StudyResult run_study(const StudyConfig& config);

/// Writes rejection_curve.csv plus per-method rejection-matrix and p-profile
/// CSVs, one per (arm, corruption count).
void emit_figures(const StudyResult& result, const std::filesystem::path& out_dir);

} // namespace rmh

#endif
