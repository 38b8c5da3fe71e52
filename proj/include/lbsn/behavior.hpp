#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lbsn/classify.hpp"

namespace lbsn {

struct IntervalDistribution {
    std::string city;
    Label cls = Label::Tourist;
    std::vector<double> samples;  // hours, one per consecutive same-user pair
    size_t dropped_zero = 0;      // duplicate-timestamp pairs dropped
};

/// Hours between consecutive check-ins of the same user, restricted to
/// check-ins with the given (city, class) label. Input must be sorted per user
/// chronologically (classify_dataset output order).
IntervalDistribution interval_distribution(std::span<const LabeledCheckIn> labeled,
                                           const std::string& city, Label cls);

struct VenueCount {
    std::string venue_id;
    std::string name;
    uint64_t count = 0;
};

/// Top-n venues by check-in count, ties by venue name ascending then id.
std::vector<VenueCount> venue_ranking(std::span<const LabeledCheckIn> labeled,
                                      const VenueCatalog& venues, const std::string& city,
                                      Label cls, size_t n);

enum class DayType { Weekday, Weekend };
const char* to_string(DayType daytype);

struct HourlyRoutine {
    std::string city;
    Label cls = Label::Tourist;
    DayType daytype = DayType::Weekday;
    std::array<uint64_t, 24> counts{};
    uint64_t total() const;
};

HourlyRoutine hourly_routine(std::span<const LabeledCheckIn> labeled,
                             const std::string& city, Label cls, DayType daytype);

struct CategoryPopularity {
    std::string city;
    Label cls = Label::Tourist;
    std::map<std::string, uint64_t> counts;     // all 17 labels present
    std::map<std::string, double> fractions;    // empty when total == 0
    uint64_t total = 0;
};

CategoryPopularity category_popularity(std::span<const LabeledCheckIn> labeled,
                                       const VenueCatalog& venues,
                                       const std::string& city, Label cls);

/// Sorted sample values with cumulative fractions, for plot-ready CDF tables.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples);

/// Distinct (city, class) slices present in the labeled data, Tourist and
/// Resident only, sorted for deterministic report order.
std::vector<std::pair<std::string, Label>> labeled_slices(
    std::span<const LabeledCheckIn> labeled);

}  // namespace lbsn
