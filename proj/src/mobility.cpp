#include "lbsn/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lbsn {

double mean_displacement(std::span<const GeoPoint> sequence,
                         DisplacementDenominator denom) {
    if (sequence.empty()) throw DataError("mean_displacement: empty check-in sequence");
    double total = 0.0;
    for (size_t i = 1; i < sequence.size(); ++i)
        total += haversine_km(sequence[i - 1], sequence[i]);
    const size_t n = sequence.size();
    if (denom == DisplacementDenominator::TransitionCount) {
        if (n < 2) return 0.0;
        return total / static_cast<double>(n - 1);
    }
    return total / static_cast<double>(n);
}

GeoPoint center_of_mass(std::span<const VenueVisit> visits) {
    GeoPoint center;
    if (visits.empty()) return center;
    for (const auto& v : visits) {
        center.lat += v.point.lat;
        center.lon += v.point.lon;
    }
    center.lat /= static_cast<double>(visits.size());
    center.lon /= static_cast<double>(visits.size());
    return center;
}

std::optional<double> radius_of_gyration(std::span<const VenueVisit> visits,
                                         int min_checkins) {
    const size_t n = visits.size();
    if (n < static_cast<size_t>(min_checkins)) return std::nullopt;

    const GeoPoint cm = center_of_mass(visits);

    // Group by distinct venue; each contributes n_i * d(r_i, r_cm)^2.
    std::map<std::string, std::pair<GeoPoint, size_t>> by_venue;
    for (const auto& v : visits) {
        auto [it, inserted] = by_venue.try_emplace(v.venue_id, std::make_pair(v.point, size_t{0}));
        ++it->second.second;
    }
    double sum = 0.0;
    for (const auto& [venue_id, entry] : by_venue) {
        const double d = haversine_km(entry.first, cm);
        sum += static_cast<double>(entry.second) * d * d;
    }
    return std::sqrt(sum / static_cast<double>(n));
}

std::vector<MobilitySummary> mobility_summaries(std::span<const LabeledCheckIn> labeled,
                                                int min_checkins_rg,
                                                DisplacementDenominator denom) {
    // Key: (city, class, user). Check-ins arrive sorted per user, so the
    // per-key sequences stay chronological.
    std::map<std::tuple<std::string, int, std::string>, std::vector<VenueVisit>> groups;
    for (const auto& lc : labeled) {
        if (lc.label == Label::Excluded) continue;
        const int cls = lc.label == Label::Tourist ? 0 : 1;
        groups[{lc.city, cls, lc.checkin.user_id}].push_back(
            {lc.checkin.venue_id, lc.checkin.point()});
    }

    std::vector<MobilitySummary> out;
    out.reserve(groups.size());
    for (const auto& [key, visits] : groups) {
        MobilitySummary s;
        s.city = std::get<0>(key);
        s.cls = std::get<1>(key) == 0 ? Label::Tourist : Label::Resident;
        s.user_id = std::get<2>(key);
        s.checkin_count = visits.size();

        std::vector<GeoPoint> sequence;
        sequence.reserve(visits.size());
        for (const auto& v : visits) sequence.push_back(v.point);
        s.mean_displacement_km = mean_displacement(sequence, denom);
        s.radius_gyration_km = radius_of_gyration(visits, min_checkins_rg);
        s.center = center_of_mass(visits);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace lbsn
