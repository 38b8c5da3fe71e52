#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lbsn/core.hpp"
#include "lbsn/ingest.hpp"

namespace lbsn {

struct BoundingBox {
    double min_lat = 0.0, max_lat = 0.0;
    double min_lon = 0.0, max_lon = 0.0;
    bool valid() const;
};

struct SubcategorySpec {
    std::string subcategory;
    std::string raw_category;
    double weight = 1.0;
};

struct CitySpec {
    std::string name;
    int utc_offset_minutes = 0;
    int venue_count = 0;
    BoundingBox bbox;
    std::vector<SubcategorySpec> subcategories;  // empty -> built-in defaults
};

struct ResidentSpec {
    int count = 0;
    int span_days = 30;      // first-to-last home-city day span, must be >= 21
    double daily_rate = 2.0; // expected check-ins per active day
    double concentration_radius_km = 5.0;
    std::vector<double> hour_weights;  // 24 entries; empty -> business-hour peaks
};

struct TouristSpec {
    int count = 0;
    int visit_days = 7;       // day span in the visited city, must be < 21
    int home_span_days = 30;  // day span in the tourist's own home city, >= 21
    double daily_rate = 4.0;
    double concentration_radius_km = 2.0;
    double attraction_bias = 0.7;  // probability of picking an attraction venue
    CitySpec home_city;
    std::vector<double> hour_weights;  // empty -> flat daytime mass
};

struct PlantedTopic {
    std::string name;
    std::map<std::string, double> subcategory_weights;
};

struct ScenarioConfig {
    uint64_t seed = 1;
    CitySpec city;
    ResidentSpec residents;
    TouristSpec tourists;
    std::vector<PlantedTopic> planted_topics;  // optional; assigned round-robin
    std::string start_date = "2014-04-01";

    static ScenarioConfig load(const std::string& path);
    static ScenarioConfig from_json_text(const std::string& text);

    /// Throws ConfigError on inconsistent settings (e.g. tourist visit >= 21
    /// days, resident span < 21 days, invalid bounding box).
    void validate() const;
};

struct GroundTruthRecord {
    std::string user_id;
    std::string cls;        // "Tourist" or "Resident"
    std::string home_city;
    std::string planted_topic;  // empty when no planted profile
    double radius_km = 0.0;     // intended concentration radius in the main city
};

struct SynthDataset {
    std::vector<CheckIn> checkins;  // sorted by (user, time, id)
    VenueCatalog venues;
    std::vector<GroundTruthRecord> ground_truth;
};

/// Deterministic given config.seed: same config, byte-identical files.
SynthDataset generate_dataset(const ScenarioConfig& config);

inline constexpr std::string_view kGroundTruthCsvHeader =
    "user_id,class,home_city,planted_topic,radius_km";

/// Writes checkins.csv, venues.csv, ground_truth.csv under out_dir.
void write_dataset(const SynthDataset& dataset, const std::string& out_dir);

}  // namespace lbsn
