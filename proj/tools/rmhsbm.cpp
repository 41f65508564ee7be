// Command-line front end: simulate studies, test populations against a
// hierarchy spec, compute BIC reports, list parameter groups, and convert
// test reports to CSV.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmh/errors.hpp"
#include "rmh/harness.hpp"
#include "rmh/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

void write_population(const rmh::StudyConfig& config, const std::filesystem::path& out_dir) {
    const rmh::HierarchySpec spec = rmh::load_hierarchy_spec(config.spec_path);
    const rmh::ParameterGroups groups = rmh::build_parameter_groups(spec);
    const rmh::Seed master{config.master_seed};
    const rmh::FlatModel model =
        rmh::draw_model_parameters(groups, spec.block_sizes, config.shape_a, config.shape_b,
                                   master.stream("params").index(0));
    const rmh::Membership tau = rmh::membership_from_block_sizes(spec.block_sizes);
    rmh::PopulationManifest manifest;
    manifest.master_seed = config.master_seed;
    for (int s = 0; s < config.population_size; ++s) {
        const rmh::GraphSample graph = rmh::sample_conditional_sbm(
            model, tau, master.stream("emit").index(static_cast<std::uint64_t>(s)));
        const std::string edges = "graph_" + std::to_string(s) + "_edges.csv";
        const std::string memb = "graph_" + std::to_string(s) + "_membership.csv";
        rmh::write_edge_csv(out_dir / edges, graph);
        rmh::write_membership_csv(out_dir / memb, tau);
        manifest.members.push_back({edges, memb});
    }
    rmh::write_manifest(out_dir / "population.json", manifest);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Repeated-motif hierarchical SBM toolkit"};
    app.require_subcommand(1);

    std::string config_path, spec_path, out_path, method_name = "wilks-aggregated";
    std::string manifest_path, edges_path, membership_path, report_path;
    double alpha = 0.05;
    std::optional<std::uint64_t> seed_override;
    bool emit_graphs = false;

    auto* simulate = app.add_subcommand(
        "simulate", "Run a study config and write the figure CSVs");
    simulate->add_option("--config", config_path, "StudyConfig JSON")->required();
    simulate->add_option("--out", out_path, "output directory")->required();
    simulate->add_option("--seed", seed_override, "override the master seed");
    simulate->add_flag("--emit-population", emit_graphs,
                       "also write one sampled population (edge lists + manifest)");

    auto* test = app.add_subcommand(
        "test", "Test a graph population against a hierarchy spec");
    test->add_option("--manifest", manifest_path, "population manifest JSON")->required();
    test->add_option("--spec", spec_path, "hierarchy spec JSON")->required();
    test->add_option("--method", method_name,
                     "wilks-individual | wilks-aggregated | anova | friedman");
    test->add_option("--alpha", alpha, "BH level");
    test->add_option("--out", out_path, "report JSON path (default stdout)");

    auto* bic = app.add_subcommand("bic", "BIC report for one graph");
    bic->add_option("--edges", edges_path, "edge list CSV")->required();
    bic->add_option("--membership", membership_path, "membership CSV")->required();
    bic->add_option("--spec", spec_path, "hierarchy spec JSON")->required();
    bic->add_option("--out", out_path, "report JSON path (default stdout)");

    auto* groups_cmd = app.add_subcommand("groups", "List the tied parameter groups");
    groups_cmd->add_option("--spec", spec_path, "hierarchy spec JSON")->required();
    groups_cmd->add_option("--out", out_path, "CSV path (default stdout)");

    auto* report_cmd =
        app.add_subcommand("report", "Convert a test report JSON to CSV matrices");
    report_cmd->add_option("--report", report_path, "TestReport JSON")->required();
    report_cmd->add_option("--out", out_path, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            rmh::StudyConfig config = rmh::load_study_config(config_path);
            if (seed_override) config.master_seed = *seed_override;
            std::filesystem::create_directories(out_path);
            const rmh::StudyResult result = rmh::run_study(config);
            rmh::emit_figures(result, out_path);
            if (emit_graphs) write_population(config, out_path);
            std::cout << "wrote " << out_path << "\n";
        } else if (test->parsed()) {
            const rmh::HierarchySpec spec = rmh::load_hierarchy_spec(spec_path);
            const rmh::ParameterGroups groups = rmh::build_parameter_groups(spec);
            const std::vector<rmh::GraphSample> graphs = rmh::load_population(manifest_path);
            std::vector<rmh::BlockSummary> population;
            population.reserve(graphs.size());
            for (const auto& g : graphs) population.push_back(rmh::summarize(g, spec.k_star()));
            const rmh::TestReport report = rmh::run_tests(
                population, groups, rmh::parse_method(method_name), alpha);
            const nlohmann::json doc = rmh::report_to_json(report);
            if (out_path.empty()) {
                std::cout << doc.dump(2) << "\n";
            } else {
                std::ofstream out(out_path);
                if (!out) throw rmh::input_error("cannot write " + out_path);
                out << doc.dump(2) << "\n";
            }
        } else if (bic->parsed()) {
            const rmh::HierarchySpec spec = rmh::load_hierarchy_spec(spec_path);
            const rmh::ParameterGroups groups = rmh::build_parameter_groups(spec);
            const rmh::GraphSample graph = rmh::read_graph(edges_path, membership_path);
            const rmh::BlockSummary summary = rmh::summarize(graph, spec.k_star());
            const nlohmann::json doc = rmh::bic_to_json(rmh::bic_delta(summary, groups));
            if (out_path.empty()) {
                std::cout << doc.dump(2) << "\n";
            } else {
                std::ofstream out(out_path);
                if (!out) throw rmh::input_error("cannot write " + out_path);
                out << doc.dump(2) << "\n";
            }
        } else if (groups_cmd->parsed()) {
            const rmh::HierarchySpec spec = rmh::load_hierarchy_spec(spec_path);
            const rmh::ParameterGroups groups = rmh::build_parameter_groups(spec);
            std::ostream* out = &std::cout;
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw rmh::input_error("cannot write " + out_path);
                out = &file;
            }
            (*out) << "group_id,df,size,cells\n";
            for (const auto& g : groups.groups) {
                (*out) << g.id << ',' << g.df() << ',' << g.cells.size() << ',';
                for (std::size_t i = 0; i < g.cells.size(); ++i) {
                    const auto [l, k] = rmh::cell_pair(g.cells[i], groups.k_star);
                    (*out) << (i ? " " : "") << l << ':' << k;
                }
                (*out) << '\n';
            }
        } else if (report_cmd->parsed()) {
            const rmh::TestReport report = rmh::load_report(report_path);
            std::filesystem::create_directories(out_path);
            rmh::write_rejection_matrix_csv(
                std::filesystem::path(out_path) / "rejection_matrix.csv", report);
            rmh::write_p_profile_csv(std::filesystem::path(out_path) / "p_profile.csv",
                                     report);
            std::cout << "wrote " << out_path << "\n";
        }
    } catch (const rmh::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const rmh::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
