#include "lbsn/behavior.hpp"

#include <algorithm>
#include <set>

namespace lbsn {

IntervalDistribution interval_distribution(std::span<const LabeledCheckIn> labeled,
                                           const std::string& city, Label cls) {
    IntervalDistribution dist;
    dist.city = city;
    dist.cls = cls;
    const LabeledCheckIn* prev = nullptr;
    for (const auto& lc : labeled) {
        if (lc.city != city || lc.label != cls) continue;
        if (prev && prev->checkin.user_id == lc.checkin.user_id) {
            const int64_t delta_s = lc.checkin.timestamp.epoch_s - prev->checkin.timestamp.epoch_s;
            if (delta_s > 0) {
                dist.samples.push_back(static_cast<double>(delta_s) / 3600.0);
            } else {
                ++dist.dropped_zero;
                log_warn("duplicate timestamp pair for user " + lc.checkin.user_id +
                         ", zero-duration interval dropped");
            }
        }
        prev = &lc;
    }
    return dist;
}

std::vector<VenueCount> venue_ranking(std::span<const LabeledCheckIn> labeled,
                                      const VenueCatalog& venues, const std::string& city,
                                      Label cls, size_t n) {
    if (n < 1) throw ConfigError("venue_ranking: n must be >= 1");
    std::map<std::string, uint64_t> counts;
    for (const auto& lc : labeled) {
        if (lc.city == city && lc.label == cls) ++counts[lc.checkin.venue_id];
    }
    std::vector<VenueCount> ranking;
    ranking.reserve(counts.size());
    for (const auto& [venue_id, count] : counts) {
        auto it = venues.find(venue_id);
        ranking.push_back({venue_id, it != venues.end() ? it->second.name : "", count});
    }
    std::sort(ranking.begin(), ranking.end(), [](const VenueCount& a, const VenueCount& b) {
        if (a.count != b.count) return a.count > b.count;
        if (a.name != b.name) return a.name < b.name;
        return a.venue_id < b.venue_id;
    });
    if (ranking.size() > n) ranking.resize(n);
    return ranking;
}

const char* to_string(DayType daytype) {
    return daytype == DayType::Weekday ? "weekday" : "weekend";
}

uint64_t HourlyRoutine::total() const {
    uint64_t sum = 0;
    for (uint64_t c : counts) sum += c;
    return sum;
}

HourlyRoutine hourly_routine(std::span<const LabeledCheckIn> labeled,
                             const std::string& city, Label cls, DayType daytype) {
    HourlyRoutine routine;
    routine.city = city;
    routine.cls = cls;
    routine.daytype = daytype;
    for (const auto& lc : labeled) {
        if (lc.city != city || lc.label != cls) continue;
        const bool weekend = lc.checkin.timestamp.is_weekend();
        if (weekend != (daytype == DayType::Weekend)) continue;
        ++routine.counts[static_cast<size_t>(lc.checkin.timestamp.local_hour())];
    }
    return routine;
}

CategoryPopularity category_popularity(std::span<const LabeledCheckIn> labeled,
                                       const VenueCatalog& venues,
                                       const std::string& city, Label cls) {
    CategoryPopularity pop;
    pop.city = city;
    pop.cls = cls;
    for (std::string_view cat : kCategories) pop.counts[std::string(cat)] = 0;
    for (const auto& lc : labeled) {
        if (lc.city != city || lc.label != cls) continue;
        auto it = venues.find(lc.checkin.venue_id);
        if (it == venues.end()) continue;
        ++pop.counts[it->second.category];
        ++pop.total;
    }
    if (pop.total > 0) {
        for (const auto& [cat, count] : pop.counts) {
            pop.fractions[cat] =
                static_cast<double>(count) / static_cast<double>(pop.total);
        }
    }
    return pop;
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(samples.size());
    const double n = static_cast<double>(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        // Collapse repeated values to their final cumulative fraction.
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        cdf.emplace_back(samples[i], static_cast<double>(i + 1) / n);
    }
    return cdf;
}

std::vector<std::pair<std::string, Label>> labeled_slices(
    std::span<const LabeledCheckIn> labeled) {
    std::set<std::pair<std::string, int>> seen;
    for (const auto& lc : labeled) {
        if (lc.label == Label::Excluded) continue;
        seen.insert({lc.city, lc.label == Label::Tourist ? 0 : 1});
    }
    std::vector<std::pair<std::string, Label>> out;
    out.reserve(seen.size());
    for (const auto& [city, cls] : seen)
        out.emplace_back(city, cls == 0 ? Label::Tourist : Label::Resident);
    return out;
}

}  // namespace lbsn
