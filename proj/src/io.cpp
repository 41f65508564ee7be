#include "rmh/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rmh/errors.hpp"

namespace rmh {

namespace {

nlohmann::json load_json(const std::filesystem::path& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw input_error(what + ": cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(what + ": " + path.string() + ": " + e.what());
    }
    return doc;
}

const nlohmann::json& require_key(const nlohmann::json& doc, const std::string& key,
                                  const std::string& context) {
    auto it = doc.find(key);
    if (it == doc.end()) throw input_error(context + ": missing key \"" + key + "\"");
    return *it;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

HierarchySpec parse_hierarchy_spec(const nlohmann::json& doc, const std::string& context) {
    if (!doc.is_object()) throw input_error(context + ": expected a JSON object");

    const auto& nodes = require_key(doc, "nodes", context);
    if (!nodes.is_array()) throw input_error(context + ": \"nodes\" must be an array");
    std::vector<int> parents;
    parents.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].is_number_integer())
            throw input_error(context + ": nodes[" + std::to_string(i) +
                              "] is not an integer");
        parents.push_back(nodes[i].get<int>());
    }
    RootedTree tree;
    try {
        tree = RootedTree::from_parents(parents);
    } catch (const std::invalid_argument& e) {
        throw input_error(context + ": \"nodes\": " + e.what());
    }
    if (tree.root != 0) throw input_error(context + ": \"nodes\": root must be node 0");

    const auto& level = require_key(doc, "motif_level", context);
    if (!level.is_number_integer() || level.get<int>() < 1)
        throw input_error(context + ": \"motif_level\" must be an integer >= 1");

    const auto& motifs_doc = require_key(doc, "motifs", context);
    if (!motifs_doc.is_array()) throw input_error(context + ": \"motifs\" must be an array");
    std::vector<Motif> motifs;
    for (std::size_t i = 0; i < motifs_doc.size(); ++i) {
        const auto& m = motifs_doc[i];
        const std::string where = context + ": motifs[" + std::to_string(i) + "]";
        if (!m.is_object() || !m.contains("label") || !m.contains("leaf_count"))
            throw input_error(where + " needs \"label\" and \"leaf_count\"");
        if (!m["label"].is_string()) throw input_error(where + ".label must be a string");
        if (!m["leaf_count"].is_number_integer())
            throw input_error(where + ".leaf_count must be an integer");
        motifs.push_back({m["label"].get<std::string>(), m["leaf_count"].get<int>()});
    }

    const auto& map_doc = require_key(doc, "motif_map", context);
    if (!map_doc.is_object()) throw input_error(context + ": \"motif_map\" must be an object");
    std::map<int, int> motif_map;
    for (const auto& [key, value] : map_doc.items()) {
        int node = 0;
        const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), node);
        if (ec != std::errc{} || ptr != key.data() + key.size())
            throw input_error(context + ": motif_map key \"" + key +
                              "\" is not a node id");
        if (!value.is_string())
            throw input_error(context + ": motif_map[\"" + key + "\"] must be a motif label");
        const std::string label = value.get<std::string>();
        int idx = -1;
        for (std::size_t i = 0; i < motifs.size(); ++i)
            if (motifs[i].label == label) idx = static_cast<int>(i);
        if (idx < 0)
            throw input_error(context + ": motif_map[\"" + key +
                              "\"] references unknown motif \"" + label + "\"");
        motif_map[node] = idx;
    }

    const auto& sizes_doc = require_key(doc, "block_sizes", context);
    if (!sizes_doc.is_array())
        throw input_error(context + ": \"block_sizes\" must be an array");
    std::vector<long long> sizes;
    for (std::size_t i = 0; i < sizes_doc.size(); ++i) {
        if (!sizes_doc[i].is_number_integer())
            throw input_error(context + ": block_sizes[" + std::to_string(i) +
                              "] is not an integer");
        sizes.push_back(sizes_doc[i].get<long long>());
    }

    return make_hierarchy_spec(std::move(tree), level.get<int>(), std::move(motifs),
                               motif_map, std::move(sizes));
}

HierarchySpec load_hierarchy_spec(const std::filesystem::path& path) {
    return parse_hierarchy_spec(load_json(path, "hierarchy spec"),
                                "hierarchy spec " + path.string());
}

void write_edge_csv(const std::filesystem::path& path, const GraphSample& graph) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path.string());
    for (const auto& [u, v] : graph.edges) out << u << ',' << v << '\n';
}

void write_membership_csv(const std::filesystem::path& path, const Membership& tau) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path.string());
    for (std::size_t i = 0; i < tau.size(); ++i) out << i << ',' << tau[i] << '\n';
}

namespace {

std::pair<long long, long long> parse_int_pair(const std::string& line,
                                               const std::string& where) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw input_error(where + ": expected \"a,b\"");
    long long a = 0, b = 0;
    const char* s1 = line.data();
    const char* e1 = line.data() + comma;
    const char* s2 = line.data() + comma + 1;
    const char* e2 = line.data() + line.size();
    auto r1 = std::from_chars(s1, e1, a);
    auto r2 = std::from_chars(s2, e2, b);
    if (r1.ec != std::errc{} || r2.ec != std::errc{} || r1.ptr != e1 || r2.ptr != e2)
        throw input_error(where + ": not an integer pair: \"" + line + "\"");
    return {a, b};
}

} // namespace

GraphSample read_graph(const std::filesystem::path& edges,
                       const std::filesystem::path& membership) {
    GraphSample g;
    {
        std::ifstream in(membership);
        if (!in) throw input_error("cannot open " + membership.string());
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (lineno == 1 && line.find_first_not_of("0123456789,-") != std::string::npos)
                continue;  // tolerate a header line
            const auto [vid, block] = parse_int_pair(
                line, membership.string() + ":" + std::to_string(lineno));
            if (vid != static_cast<long long>(g.membership.size()))
                throw input_error(membership.string() + ":" + std::to_string(lineno) +
                                  ": vertex ids must be consecutive from 0");
            g.membership.push_back(static_cast<int>(block));
        }
    }
    g.vertex_count = static_cast<long long>(g.membership.size());
    {
        std::ifstream in(edges);
        if (!in) throw input_error("cannot open " + edges.string());
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (lineno == 1 && line.find_first_not_of("0123456789,-") != std::string::npos)
                continue;
            const auto [u, v] =
                parse_int_pair(line, edges.string() + ":" + std::to_string(lineno));
            if (u < 0 || v < 0 || u >= g.vertex_count || v >= g.vertex_count || u >= v)
                throw input_error(edges.string() + ":" + std::to_string(lineno) +
                                  ": edge must satisfy 0 <= u < v < vertex count");
            g.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        }
    }
    return g;
}

void write_manifest(const std::filesystem::path& path, const PopulationManifest& manifest) {
    nlohmann::json doc;
    doc["master_seed"] = manifest.master_seed;
    doc["graphs"] = nlohmann::json::array();
    for (const auto& m : manifest.members)
        doc["graphs"].push_back({{"edges", m.edges}, {"membership", m.membership}});
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

PopulationManifest load_manifest(const std::filesystem::path& path) {
    const nlohmann::json doc = load_json(path, "population manifest");
    const std::string context = "population manifest " + path.string();
    PopulationManifest manifest;
    manifest.master_seed = require_key(doc, "master_seed", context).get<std::uint64_t>();
    const auto& graphs = require_key(doc, "graphs", context);
    if (!graphs.is_array()) throw input_error(context + ": \"graphs\" must be an array");
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto& g = graphs[i];
        const std::string where = context + ": graphs[" + std::to_string(i) + "]";
        if (!g.is_object() || !g.contains("edges") || !g.contains("membership"))
            throw input_error(where + " needs \"edges\" and \"membership\"");
        manifest.members.push_back(
            {g["edges"].get<std::string>(), g["membership"].get<std::string>()});
    }
    return manifest;
}

std::vector<GraphSample> load_population(const std::filesystem::path& manifest_path) {
    const PopulationManifest manifest = load_manifest(manifest_path);
    const std::filesystem::path base = manifest_path.parent_path();
    std::vector<GraphSample> graphs;
    graphs.reserve(manifest.members.size());
    for (const auto& m : manifest.members) {
        const std::filesystem::path e = std::filesystem::path(m.edges).is_absolute()
                                            ? std::filesystem::path(m.edges)
                                            : base / m.edges;
        const std::filesystem::path t = std::filesystem::path(m.membership).is_absolute()
                                            ? std::filesystem::path(m.membership)
                                            : base / m.membership;
        graphs.push_back(read_graph(e, t));
    }
    return graphs;
}

nlohmann::json report_to_json(const TestReport& report) {
    nlohmann::json doc;
    doc["method"] = method_name(report.method);
    doc["alpha"] = report.alpha;
    doc["k_star"] = report.k_star;
    doc["m"] = report.m;
    doc["groups"] = nlohmann::json::array();
    for (const TestOutcome& o : report.groups) {
        nlohmann::json g;
        g["group_id"] = o.group_id;
        g["method"] = method_name(o.method);
        g["statistic"] = o.statistic;
        g["df"] = o.df1;
        if (o.method == TestMethod::anova) g["df2"] = o.df2;
        if (std::isnan(o.p_value)) g["p_value"] = nullptr;
        else g["p_value"] = o.p_value;
        g["decision"] = decision_name(o.decision);
        if (o.rejection_rate >= 0.0) g["rejection_rate"] = o.rejection_rate;
        doc["groups"].push_back(std::move(g));
    }
    doc["p_profile"] = nlohmann::json::array();
    for (const auto& [p, line] : report.p_profile)
        doc["p_profile"].push_back({{"p", p}, {"bh_line", line}});
    doc["rejection_matrix"] = report.rejection_matrix;
    return doc;
}

TestReport report_from_json(const nlohmann::json& doc, const std::string& context) {
    TestReport report;
    report.method = parse_method(require_key(doc, "method", context).get<std::string>());
    report.alpha = require_key(doc, "alpha", context).get<double>();
    report.k_star = require_key(doc, "k_star", context).get<int>();
    report.m = require_key(doc, "m", context).get<int>();
    for (const auto& g : require_key(doc, "groups", context)) {
        TestOutcome o;
        o.group_id = g.at("group_id").get<int>();
        o.method = parse_method(g.at("method").get<std::string>());
        o.statistic = g.at("statistic").get<double>();
        o.df1 = g.at("df").get<int>();
        if (g.contains("df2")) o.df2 = g.at("df2").get<int>();
        o.p_value = g.at("p_value").is_null() ? std::nan("") : g.at("p_value").get<double>();
        bool found = false;
        for (Decision d : {Decision::fail, Decision::reject, Decision::trivial_zero,
                           Decision::not_testable})
            if (decision_name(d) == g.at("decision").get<std::string>()) {
                o.decision = d;
                found = true;
            }
        if (!found)
            throw input_error(context + ": unknown decision \"" +
                              g.at("decision").get<std::string>() + "\"");
        if (g.contains("rejection_rate")) o.rejection_rate = g.at("rejection_rate").get<double>();
        report.groups.push_back(std::move(o));
    }
    for (const auto& row : require_key(doc, "p_profile", context))
        report.p_profile.emplace_back(row.at("p").get<double>(),
                                      row.at("bh_line").get<double>());
    report.rejection_matrix =
        require_key(doc, "rejection_matrix", context).get<std::vector<int>>();
    if (report.rejection_matrix.size() !=
        static_cast<std::size_t>(report.k_star) * static_cast<std::size_t>(report.k_star))
        throw input_error(context + ": rejection_matrix has wrong size");
    return report;
}

TestReport load_report(const std::filesystem::path& path) {
    return report_from_json(load_json(path, "test report"), "test report " + path.string());
}

nlohmann::json bic_to_json(const BicReport& report) {
    nlohmann::json doc;
    doc["delta"] = report.delta;
    doc["llr"] = report.llr;
    doc["penalty"] = report.penalty;
    doc["penalty_df"] = report.penalty_df;
    doc["preferred"] = report.prefers_rmhsbm ? "RMHSBM" : "SBM";
    return doc;
}

nlohmann::json llr_to_json(const LlrReport& report) {
    nlohmann::json doc;
    doc["global"] = report.global;
    doc["groups"] = nlohmann::json::array();
    for (std::size_t i = 0; i < report.locals.size(); ++i) {
        const LocalLlr& l = report.locals[i];
        doc["groups"].push_back({{"group_id", i},
                                 {"stat", l.stat},
                                 {"df", l.df},
                                 {"degenerate", l.degenerate},
                                 {"null_estimate", l.null_estimate}});
    }
    doc["alt_estimates"] = nlohmann::json::array();
    for (double v : report.alt_estimates)
        doc["alt_estimates"].push_back(std::isnan(v) ? nlohmann::json(nullptr)
                                                     : nlohmann::json(v));
    return doc;
}

void write_llr_csv(const std::filesystem::path& path, const LlrReport& report) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path.string());
    out << "group_id,df,stat,degenerate\n";
    for (std::size_t i = 0; i < report.locals.size(); ++i) {
        const LocalLlr& l = report.locals[i];
        out << i << ',' << l.df << ',' << format_double(l.stat) << ','
            << (l.degenerate ? 1 : 0) << '\n';
    }
}

void write_rejection_matrix_csv(const std::filesystem::path& path, const TestReport& report) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path.string());
    const int k = report.k_star;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (j) out << ',';
            out << report.rejection_matrix[static_cast<std::size_t>(i * k + j)];
        }
        out << '\n';
    }
}

std::vector<int> read_rejection_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path.string());
    std::vector<int> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string item;
        while (std::getline(row, item, ',')) {
            int v = 0;
            const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc{} || ptr != item.data() + item.size())
                throw input_error(path.string() + ":" + std::to_string(lineno) +
                                  ": not an integer: \"" + item + "\"");
            values.push_back(v);
        }
    }
    return values;
}

void write_p_profile_csv(const std::filesystem::path& path, const TestReport& report) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write " + path.string());
    out << "rank,p_value,bh_line\n";
    for (std::size_t i = 0; i < report.p_profile.size(); ++i)
        out << (i + 1) << ',' << format_double(report.p_profile[i].first) << ','
            << format_double(report.p_profile[i].second) << '\n';
}

} // namespace rmh
