#include "econet/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "econet/communities.hpp"
#include "econet/stats.hpp"

namespace econet {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t stage_seed(std::uint64_t seed, const std::string& stage) {
    // FNV-1a over the stage name, mixed with the pipeline seed
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : stage) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t z = seed ^ h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void PipelineConfig::validate() const {
    if (input_files.has_value() == synth.has_value())
        throw std::invalid_argument("exactly one input source (files or synth) required");
    if (groups && sweep)
        throw std::invalid_argument("fixed group count and sweep are mutually exclusive");
    if (restarts < 1) throw std::invalid_argument("restarts must be positive");
    if (mh_bins < 2) throw std::invalid_argument("mh bin count must be >= 2");
    scheme.validate();
    if (synth) synth->validate();
}

EcosystemGraph acquire_graph(const PipelineConfig& config) {
    if (config.input_files)
        return load_network_files(config.input_files->first, config.input_files->second,
                                  config.ingest);
    SynthParams p = *config.synth;
    p.seed = stage_seed(config.seed, "synth");
    return generate_coupled(p);
}

namespace {

json degree_section(const EcosystemGraph& g, NodeKind kind,
                    std::optional<std::size_t> xmin_opt) {
    json sec;
    auto degrees = degree_sequence(g, kind);
    sec["n_nodes"] = degrees.size();
    std::vector<std::size_t> positive;
    for (auto d : degrees)
        if (d > 0) positive.push_back(d);
    if (positive.empty()) {
        sec["ccdf"] = json::array();
        sec["power_law"] = nullptr;
        return sec;
    }
    json pts = json::array();
    for (const auto& pt : ccdf(positive)) pts.push_back({{"k", pt.k}, {"p", pt.p}});
    sec["ccdf"] = pts;
    std::size_t xmin = xmin_opt.value_or(*std::min_element(positive.begin(), positive.end()));
    try {
        auto fit = fit_power_law(positive, xmin);
        sec["power_law"] = {{"alpha", fit.alpha},
                            {"xmin", fit.xmin},
                            {"n_tail", fit.n_tail},
                            {"sigma", fit.sigma}};
    } catch (const std::invalid_argument&) {
        sec["power_law"] = nullptr;
    }
    return sec;
}

json test_json(const TestResult& t) {
    return {{"test", t.test_name},
            {"statistic", t.statistic},
            {"p_value", t.p_value},
            {"two_tailed", t.two_tailed},
            {"n_effective", t.n_effective},
            {"notes", t.notes}};
}

struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& what)
        : std::runtime_error("stage '" + stage + "': " + what) {}
};

}  // namespace

json run_pipeline(const PipelineConfig& config) {
    config.validate();

    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["config"] = {
        {"seed", config.seed},
        {"restarts", config.restarts},
        {"mh_bins", config.mh_bins},
        {"scheme", {{"vv", config.scheme.vv}, {"vp", config.scheme.vp}, {"pp", config.scheme.pp}}},
        {"xmin", config.xmin ? json(*config.xmin) : json(nullptr)},
        {"threads", config.threads},
    };
    if (config.input_files)
        report["config"]["input"] = {{"nodes", config.input_files->first},
                                     {"edges", config.input_files->second}};
    else
        report["config"]["input"] = {{"synth",
                                      {{"n_physical", config.synth->n_physical},
                                       {"attach_m", config.synth->attach_m},
                                       {"p_website", config.synth->p_website},
                                       {"p_mirror", config.synth->p_mirror},
                                       {"p_cross", config.synth->p_cross},
                                       {"extra_vv", config.synth->extra_vv}}}};

    EcosystemGraph g;
    try {
        g = acquire_graph(config);
    } catch (const std::exception& e) {
        throw StageError("ingest", e.what());
    }

    std::size_t n_phys = 0, n_virt = 0;
    for (const auto& nd : g.nodes())
        (nd.kind == NodeKind::Physical ? n_phys : n_virt) += 1;
    report["graph"] = {{"n_nodes", g.node_count()},
                       {"n_edges", g.edge_count()},
                       {"n_physical", n_phys},
                       {"n_virtual", n_virt}};

    try {
        report["degree"] = {
            {"physical", degree_section(g, NodeKind::Physical, config.xmin)},
            {"virtual", degree_section(g, NodeKind::Virtual, config.xmin)}};
    } catch (const std::exception& e) {
        throw StageError("degree", e.what());
    }

    Partition part;
    try {
        std::uint64_t cseed = stage_seed(config.seed, "communities");
        json sweep_rows = json::array();
        std::uint32_t m;
        if (config.sweep) {
            auto rows = sweep_group_count(g, config.sweep->first, config.sweep->second,
                                          cseed, config.restarts);
            double best = rows.front().objective;
            m = rows.front().m;
            for (const auto& r : rows) {
                sweep_rows.push_back(
                    {{"m", r.m}, {"objective", r.objective}, {"q_norm", r.q_norm}});
                if (r.objective > best) {
                    best = r.objective;
                    m = r.m;
                }
            }
        } else {
            m = config.groups.value_or(2);
        }
        part = fit_dcsbm(g, m, cseed, config.restarts);
        auto mx = mixing_matrix(g, part);
        double q_std = modularity(mx, ModularityVariant::Standard);
        double q_lit = modularity(mx, ModularityVariant::SquaredShare);
        auto comp = composition(g, part);
        std::vector<std::size_t> sizes(part.m, 0);
        for (auto gi : part.groups) ++sizes[gi];
        report["communities"] = {
            {"m", part.m},
            {"objective", dcsbm_objective(g, part)},
            {"q_standard", q_std},
            {"q_norm_standard", part.m >= 2 ? json(normalized_modularity(q_std, part.m)) : json(nullptr)},
            {"q_squared_share", q_lit},
            {"q_norm_squared_share", part.m >= 2 ? json(normalized_modularity(q_lit, part.m)) : json(nullptr)},
            {"group_sizes", sizes},
            {"virtual_fraction", comp.virtual_fraction},
            {"mean_virtual_fraction", comp.mean_virtual_fraction},
            {"gini", comp.gini},
            {"sweep", sweep_rows}};
    } catch (const std::exception& e) {
        throw StageError("communities", e.what());
    }

    ComparisonReport cmp;
    try {
        cmp = compare_components(g, config.scheme, config.threads);
        json pairs = json::array();
        for (const auto& p : cmp.paired_local)
            pairs.push_back({{"node_id", p.node_id},
                             {"e_loc_physical", p.physical},
                             {"e_loc_ecosystem", p.ecosystem}});
        report["efficiency"] = {
            {"e_glob_physical", cmp.physical.e_glob},
            {"e_glob_ecosystem", cmp.ecosystem.e_glob},
            {"relative_difference", cmp.relative_difference},
            {"relative_difference_percent", cmp.relative_difference_percent},
            {"paired_local", pairs}};
    } catch (const std::exception& e) {
        throw StageError("efficiency", e.what());
    }

    try {
        std::vector<std::pair<double, double>> pairs;
        std::vector<double> phys_sample, eco_sample;
        for (const auto& p : cmp.paired_local) {
            pairs.emplace_back(p.physical, p.ecosystem);
            phys_sample.push_back(p.physical);
            eco_sample.push_back(p.ecosystem);
        }
        json tests = json::array();
        tests.push_back(test_json(wilcoxon_signed_rank(pairs)));
        tests.push_back(test_json(ks_two_sample(phys_sample, eco_sample)));
        TestResult mh;
        try {
            mh = marginal_homogeneity(bin_paired(pairs, config.mh_bins));
        } catch (const std::invalid_argument& e) {
            // degenerate samples (too few distinct values): no evidence of change
            mh.test_name = "marginal-homogeneity";
            mh.statistic = 0;
            mh.p_value = 1;
            mh.n_effective = pairs.size();
            mh.notes = std::string("degenerate sample, test vacuous: ") + e.what();
        }
        mh.notes += "; binned into " + std::to_string(config.mh_bins) + " pooled quantile bins";
        tests.push_back(test_json(mh));
        report["tests"] = tests;
    } catch (const std::exception& e) {
        throw StageError("tests", e.what());
    }

    if (!config.out_dir.empty()) {
        std::vector<fs::path> written;
        try {
            fs::create_directories(config.out_dir);
            auto out = [&](const std::string& name) {
                fs::path p = fs::path(config.out_dir) / name;
                written.push_back(p);
                return p;
            };
            {
                std::ofstream f(out("report.json"));
                f << report.dump(2) << '\n';
            }
            for (const char* kind : {"physical", "virtual"}) {
                std::ofstream f(out(std::string("ccdf_") + kind + ".csv"));
                f << "k,p\n";
                for (const auto& pt : report["degree"][kind]["ccdf"])
                    f << pt["k"].get<std::size_t>() << ',' << pt["p"].get<double>() << '\n';
            }
            {
                std::ofstream f(out("eloc_pairs.csv"));
                f << "node_id,e_loc_physical,e_loc_ecosystem\n";
                for (const auto& p : cmp.paired_local)
                    f << p.node_id << ',' << p.physical << ',' << p.ecosystem << '\n';
            }
            {
                std::ofstream f(out("partition.csv"));
                f << "node_id,group\n";
                std::vector<std::pair<std::string, std::uint32_t>> rows;
                for (std::uint32_t i = 0; i < g.node_count(); ++i)
                    rows.emplace_back(g.node(i).id, part.groups[i]);
                std::sort(rows.begin(), rows.end());
                for (const auto& [id, grp] : rows) f << id << ',' << grp << '\n';
            }
        } catch (...) {
            for (const auto& p : written) {
                std::error_code ec;
                fs::remove(p, ec);
            }
            throw;
        }
    }
    return report;
}

}  // namespace econet
