#ifndef RMH_IO_HPP
#define RMH_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmh/estimation.hpp"
#include "rmh/hierarchy.hpp"
#include "rmh/sampling.hpp"
#include "rmh/testing.hpp"

namespace rmh {

/// Hierarchy spec file: keys `nodes` (parent array, -1 for root, root must be
/// node 0), `motif_level`, `motifs` (objects with `label` and `leaf_count`),
/// `motif_map` (node id -> motif label), `block_sizes`.  Parse errors name
/// the offending key and index.
HierarchySpec parse_hierarchy_spec(const nlohmann::json& doc, const std::string& context);
HierarchySpec load_hierarchy_spec(const std::filesystem::path& path);

/// Edge list CSV, one "u,v" line per edge with u < v, 0-indexed, no header.
void write_edge_csv(const std::filesystem::path& path, const GraphSample& graph);

/// Membership CSV, one "vertex_id,block_id" line per vertex.
void write_membership_csv(const std::filesystem::path& path, const Membership& tau);

GraphSample read_graph(const std::filesystem::path& edges,
                       const std::filesystem::path& membership);

struct PopulationManifest {
    std::uint64_t master_seed = 0;
    struct Member {
        std::string edges;
        std::string membership;
    };
    std::vector<Member> members;
};

void write_manifest(const std::filesystem::path& path, const PopulationManifest& manifest);
PopulationManifest load_manifest(const std::filesystem::path& path);

/// Loads every member graph of a manifest; relative member paths resolve
/// against the manifest's directory.
std::vector<GraphSample> load_population(const std::filesystem::path& manifest_path);

nlohmann::json report_to_json(const TestReport& report);
nlohmann::json bic_to_json(const BicReport& report);
nlohmann::json llr_to_json(const LlrReport& report);

/// Per-group CSV: group_id,df,stat,degenerate.
void write_llr_csv(const std::filesystem::path& path, const LlrReport& report);

/// Integer code matrix (0 fail, 1 reject, 2 trivial-zero, 3 not-testable).
void write_rejection_matrix_csv(const std::filesystem::path& path, const TestReport& report);
std::vector<int> read_rejection_matrix_csv(const std::filesystem::path& path);

/// Sorted rows: rank,p_value,bh_line.
void write_p_profile_csv(const std::filesystem::path& path, const TestReport& report);

TestReport report_from_json(const nlohmann::json& doc, const std::string& context);
TestReport load_report(const std::filesystem::path& path);

/// Shortest decimal round-trip formatting, used by every CSV writer so that
/// identical inputs give byte-identical files.
std::string format_double(double v);

} // namespace rmh

#endif
