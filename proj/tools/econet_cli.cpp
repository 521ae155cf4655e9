#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "econet/communities.hpp"
#include "econet/efficiency.hpp"
#include "econet/pipeline.hpp"
#include "econet/stats.hpp"
#include "econet/synthgen.hpp"

namespace {

using namespace econet;

struct CommonOpts {
    std::string nodes_path, edges_path;
    SynthParams synth;
    bool use_synth = false;
    std::vector<double> scheme_values;
    std::uint32_t groups = 0;
    std::string sweep_range;
    std::uint32_t restarts = 20;
    std::uint64_t seed = 0;
    std::size_t bins = 5;
    std::size_t xmin = 0;
    std::string out_dir;
    unsigned threads = 1;
    bool largest_component_only = false;
};

void add_input_flags(CLI::App* cmd, CommonOpts& o, bool allow_synth) {
    cmd->add_option("--nodes", o.nodes_path, "Nodes CSV (id,kind,label)");
    cmd->add_option("--edges", o.edges_path, "Edges CSV (source,target)");
    cmd->add_flag("--largest-component", o.largest_component_only,
                  "Restrict analysis to the largest connected component");
    if (allow_synth) {
        cmd->add_flag("--synth", o.use_synth, "Generate a synthetic network instead");
        cmd->add_option("--n-physical", o.synth.n_physical, "Synthetic physical node count");
        cmd->add_option("--attach-m", o.synth.attach_m, "Attachment edges per new node");
        cmd->add_option("--p-website", o.synth.p_website, "Virtual twin probability");
        cmd->add_option("--p-mirror", o.synth.p_mirror, "Edge mirroring probability");
        cmd->add_option("--p-cross", o.synth.p_cross,
                        "Probability of linking a neighbor's virtual twin");
        cmd->add_option("--extra-vv", o.synth.extra_vv, "Extra virtual edges per node");
    }
}

PipelineConfig to_config(const CommonOpts& o) {
    PipelineConfig cfg;
    if (o.use_synth) {
        cfg.synth = o.synth;
    } else {
        if (o.nodes_path.empty() || o.edges_path.empty())
            throw CLI::ValidationError("--nodes and --edges are required without --synth");
        cfg.input_files = {o.nodes_path, o.edges_path};
    }
    cfg.ingest.restrict_to_largest_component = o.largest_component_only;
    if (!o.scheme_values.empty()) {
        if (o.scheme_values.size() != 3)
            throw CLI::ValidationError("--scheme expects vv,vp,pp");
        cfg.scheme = {o.scheme_values[0], o.scheme_values[1], o.scheme_values[2]};
    }
    if (o.groups > 0) cfg.groups = o.groups;
    if (!o.sweep_range.empty()) {
        auto dots = o.sweep_range.find("..");
        if (dots == std::string::npos)
            throw CLI::ValidationError("--sweep expects lo..hi");
        cfg.sweep = {static_cast<std::uint32_t>(std::stoul(o.sweep_range.substr(0, dots))),
                     static_cast<std::uint32_t>(std::stoul(o.sweep_range.substr(dots + 2)))};
    }
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    cfg.mh_bins = o.bins;
    if (o.xmin > 0) cfg.xmin = o.xmin;
    cfg.out_dir = o.out_dir;
    cfg.threads = o.threads;
    return cfg;
}

EcosystemGraph load_input(const CommonOpts& o) {
    return acquire_graph(to_config(o));
}

int cmd_analyze(const CommonOpts& o) {
    auto report = run_pipeline(to_config(o));
    if (o.out_dir.empty()) std::cout << report.dump(2) << '\n';
    return 0;
}

int cmd_communities(const CommonOpts& o) {
    auto cfg = to_config(o);
    auto g = load_input(o);
    std::uint64_t seed = stage_seed(cfg.seed, "communities");
    std::uint32_t m = cfg.groups.value_or(2);
    if (cfg.sweep) {
        auto rows = sweep_group_count(g, cfg.sweep->first, cfg.sweep->second, seed,
                                      cfg.restarts);
        std::cout << "m,objective,q_norm\n";
        double best = rows.front().objective;
        m = rows.front().m;
        for (const auto& r : rows) {
            std::cout << r.m << ',' << r.objective << ',' << r.q_norm << '\n';
            if (r.objective > best) {
                best = r.objective;
                m = r.m;
            }
        }
    }
    auto part = fit_dcsbm(g, m, seed, cfg.restarts);
    auto mx = mixing_matrix(g, part);
    double q = modularity(mx);
    auto comp = composition(g, part);
    std::cout << "m = " << part.m << "\nQ = " << q
              << "\nQ_norm = " << normalized_modularity(q, part.m)
              << "\nmean virtual fraction = " << comp.mean_virtual_fraction
              << "\ngini = " << comp.gini << '\n';
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream f(std::filesystem::path(cfg.out_dir) / "partition.csv");
        f << "node_id,group\n";
        std::vector<std::pair<std::string, std::uint32_t>> rows;
        for (std::uint32_t i = 0; i < g.node_count(); ++i)
            rows.emplace_back(g.node(i).id, part.groups[i]);
        std::sort(rows.begin(), rows.end());
        for (const auto& [id, grp] : rows) f << id << ',' << grp << '\n';
    }
    return 0;
}

int cmd_efficiency(const CommonOpts& o) {
    auto cfg = to_config(o);
    auto g = load_input(o);
    auto cmp = compare_components(g, cfg.scheme, cfg.threads);
    std::cout << "Global efficiency values\n"
              << "Physical\t" << cmp.physical.e_glob << '\n'
              << "Ecosystem\t" << cmp.ecosystem.e_glob << '\n'
              << "Difference\t" << cmp.relative_difference_percent << "%\n";
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream f(std::filesystem::path(cfg.out_dir) / "eloc_pairs.csv");
        f << "node_id,e_loc_physical,e_loc_ecosystem\n";
        for (const auto& p : cmp.paired_local)
            f << p.node_id << ',' << p.physical << ',' << p.ecosystem << '\n';
    }
    return 0;
}

int cmd_degree(const CommonOpts& o, const std::string& kind) {
    auto g = load_input(o);
    std::optional<NodeKind> filter;
    if (!kind.empty()) filter = parse_node_kind(kind);
    auto degrees = degree_sequence(g, filter);
    std::vector<std::size_t> positive;
    for (auto d : degrees)
        if (d > 0) positive.push_back(d);
    if (positive.empty()) throw std::runtime_error("no nodes with positive degree");
    std::cout << "k,p\n";
    for (const auto& pt : ccdf(positive)) std::cout << pt.k << ',' << pt.p << '\n';
    return 0;
}

int cmd_tests(const CommonOpts& o) {
    auto cfg = to_config(o);
    auto g = load_input(o);
    auto cmp = compare_components(g, cfg.scheme, cfg.threads);
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> phys, eco;
    for (const auto& p : cmp.paired_local) {
        pairs.emplace_back(p.physical, p.ecosystem);
        phys.push_back(p.physical);
        eco.push_back(p.ecosystem);
    }
    auto print = [](const TestResult& t) {
        std::cout << t.test_name << "\tstatistic=" << t.statistic
                  << "\tp=" << t.p_value << '\n';
    };
    print(wilcoxon_signed_rank(pairs));
    print(ks_two_sample(phys, eco));
    print(marginal_homogeneity(bin_paired(pairs, cfg.mh_bins)));
    return 0;
}

int cmd_synth(const CommonOpts& o) {
    if (o.out_dir.empty()) throw CLI::ValidationError("synth requires --out");
    SynthParams p = o.synth;
    p.seed = o.seed;
    auto g = generate_coupled(p);
    std::filesystem::create_directories(o.out_dir);
    serialize_network_files(g, (std::filesystem::path(o.out_dir) / "nodes.csv").string(),
                            (std::filesystem::path(o.out_dir) / "edges.csv").string());
    std::cout << "wrote " << g.node_count() << " nodes, " << g.edge_count()
              << " edges to " << o.out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-layer ecosystem network analysis"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts o;
    std::string kind;
    auto add_common = [&](CLI::App* cmd, bool allow_synth = true) {
        cmd->fallthrough();
        add_input_flags(cmd, o, allow_synth);
        cmd->add_option("--scheme", o.scheme_values,
                        "Edge costs vv,vp,pp (default 1,2,3)")->delimiter(',');
        cmd->add_option("--groups", o.groups, "Community count m");
        cmd->add_option("--sweep", o.sweep_range, "Sweep community counts, lo..hi");
        cmd->add_option("--restarts", o.restarts, "Fit restarts");
        cmd->add_option("--seed", o.seed, "RNG seed");
        cmd->add_option("--bins", o.bins, "Marginal homogeneity bin count");
        cmd->add_option("--xmin", o.xmin, "Power-law tail cutoff");
        cmd->add_option("--out", o.out_dir, "Output directory");
        cmd->add_option("--threads", o.threads, "Shortest-path worker threads");
    };

    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline");
    add_common(analyze);
    auto* communities = app.add_subcommand("communities", "Community detection only");
    add_common(communities);
    auto* efficiency = app.add_subcommand("efficiency", "Efficiency comparison only");
    add_common(efficiency);
    auto* degree = app.add_subcommand("degree", "Degree CCDF");
    add_common(degree);
    degree->add_option("--kind", kind, "Filter: physical or virtual");
    auto* tests = app.add_subcommand("tests", "Nonparametric tests only");
    add_common(tests);
    auto* synth = app.add_subcommand("synth", "Generate a synthetic network");
    add_input_flags(synth, o, true);
    synth->add_option("--seed", o.seed, "RNG seed");
    synth->add_option("--out", o.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(o);
        if (app.got_subcommand(communities)) return cmd_communities(o);
        if (app.got_subcommand(efficiency)) return cmd_efficiency(o);
        if (app.got_subcommand(degree)) return cmd_degree(o, kind);
        if (app.got_subcommand(tests)) return cmd_tests(o);
        if (app.got_subcommand(synth)) return cmd_synth(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
