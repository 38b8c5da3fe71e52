#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbsn/behavior.hpp"
#include "lbsn/classify.hpp"
#include "lbsn/ingest.hpp"
#include "lbsn/mobility.hpp"
#include "lbsn/profiles.hpp"
#include "lbsn/stgraph.hpp"

namespace lbsn {

struct PipelineConfig {
    std::string checkins_path;
    std::string venues_path;
    InputFormat format = InputFormat::Csv;
    std::string category_map_path;  // empty -> built-in default map
    std::string ground_truth_path;  // optional; enables manifest accuracy
    int threshold_days = kDefaultStayThresholdDays;
    int min_checkins_rg = kDefaultMinCheckinsForRadius;
    int day_anchor_hour = kDefaultDayAnchorHour;
    DisplacementDenominator displacement_denominator =
        DisplacementDenominator::CheckinCount;
    PathMetric path_metric = PathMetric::Hops;
    std::vector<CentralityMetric> graph_metrics = {CentralityMetric::Degree,
                                                   CentralityMetric::Closeness,
                                                   CentralityMetric::Betweenness};
    size_t top_n = 10;
    LdaConfig lda;
    int lda_top_m = 10;
    std::string output_dir = "out";

    static PipelineConfig load(const std::string& path);
    static PipelineConfig from_json_text(const std::string& text);
    void validate() const;
};

// Stage entry points. Each reads prior-stage files from config.output_dir and
// writes its own outputs there; a missing predecessor raises DataError naming
// the stage to run first.
void run_ingest(const PipelineConfig& config);
void run_classify(const PipelineConfig& config);
void run_behavior(const PipelineConfig& config);
void run_mobility(const PipelineConfig& config);
void run_graph(const PipelineConfig& config);
void run_profiles(const PipelineConfig& config);

/// Chains every stage and writes manifest.json (input hashes, parameters, row
/// counts, optional ground-truth accuracy, timing).
void run_all(const PipelineConfig& config);

// Output file names inside output_dir.
inline constexpr std::string_view kIngestedCheckinsFile = "checkins_ingested.csv";
inline constexpr std::string_view kIngestedVenuesFile = "venues_ingested.csv";
inline constexpr std::string_view kRejectedFile = "rejected.csv";
inline constexpr std::string_view kUserClassificationFile = "user_classification.csv";
inline constexpr std::string_view kLabeledCheckinsFile = "labeled_checkins.csv";
inline constexpr std::string_view kManifestFile = "manifest.json";

/// Reads back the labeled check-in table written by the classify stage.
std::vector<LabeledCheckIn> load_labeled_checkins(const std::string& path);

/// File-name-safe slug for a city/class pair.
std::string slice_slug(const std::string& city, Label cls);

}  // namespace lbsn
