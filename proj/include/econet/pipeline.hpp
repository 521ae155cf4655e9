#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "econet/efficiency.hpp"
#include "econet/graph.hpp"
#include "econet/synthgen.hpp"

namespace econet {

inline constexpr int kReportSchemaVersion = 1;

struct PipelineConfig {
    // exactly one input source
    std::optional<std::pair<std::string, std::string>> input_files;  // nodes, edges
    std::optional<SynthParams> synth;

    IngestOptions ingest;
    CostScheme scheme;
    std::optional<std::uint32_t> groups;  // fixed group count
    std::optional<std::pair<std::uint32_t, std::uint32_t>> sweep;  // lo..hi
    std::uint32_t restarts = 20;
    std::uint64_t seed = 0;
    std::size_t mh_bins = 5;
    std::optional<std::size_t> xmin;  // default: minimum positive degree
    std::string out_dir;              // empty: no files written
    unsigned threads = 1;

    void validate() const;
};

// Full pipeline: ingest/generate, degree analysis, communities, efficiency
// comparison, nonparametric tests. Writes report.json plus CSV sidecars when
// out_dir is set; on failure any partial outputs are removed.
nlohmann::json run_pipeline(const PipelineConfig& config);

// Stage-keyed substream of the pipeline seed; adding a stage never perturbs
// the randomness of existing ones.
std::uint64_t stage_seed(std::uint64_t seed, const std::string& stage);

EcosystemGraph acquire_graph(const PipelineConfig& config);

}  // namespace econet
