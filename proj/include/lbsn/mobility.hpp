#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lbsn/classify.hpp"

namespace lbsn {

inline constexpr int kDefaultMinCheckinsForRadius = 5;

/// Denominator choice for the mean-displacement ratio. CheckinCount divides
/// the summed consecutive distances by N (the default); TransitionCount
/// divides by N-1.
enum class DisplacementDenominator { CheckinCount, TransitionCount };

/// Mean displacement over a chronologically ordered coordinate sequence.
/// Throws DataError on an empty sequence.
double mean_displacement(std::span<const GeoPoint> sequence,
                         DisplacementDenominator denom = DisplacementDenominator::CheckinCount);

struct VenueVisit {
    std::string venue_id;
    GeoPoint point;
};

/// Check-in-weighted mean of coordinates in degrees (valid at city scale).
GeoPoint center_of_mass(std::span<const VenueVisit> visits);

/// Root-mean-square haversine distance of visits from the center of mass,
/// weighted by per-venue check-in counts. Absent when fewer than min_checkins
/// check-ins.
std::optional<double> radius_of_gyration(std::span<const VenueVisit> visits,
                                         int min_checkins = kDefaultMinCheckinsForRadius);

struct MobilitySummary {
    std::string user_id;
    std::string city;
    Label cls = Label::Tourist;
    size_t checkin_count = 0;
    double mean_displacement_km = 0.0;
    std::optional<double> radius_gyration_km;
    GeoPoint center;
};

/// Per-(user, city, class) summaries over labeled check-ins (Tourist and
/// Resident slices only), sorted by (city, class, user).
std::vector<MobilitySummary> mobility_summaries(
    std::span<const LabeledCheckIn> labeled, int min_checkins_rg = kDefaultMinCheckinsForRadius,
    DisplacementDenominator denom = DisplacementDenominator::CheckinCount);

}  // namespace lbsn
