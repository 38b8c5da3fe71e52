#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lbsn/core.hpp"
#include "lbsn/ingest.hpp"

namespace lbsn {

struct StaySpan {
    std::string user_id;
    std::string city;
    Timestamp first_checkin;
    Timestamp last_checkin;
    int64_t days = 0;  // calendar-day difference between first and last, local clock
    int checkin_count = 0;
};

struct UserClassification {
    std::string user_id;
    std::optional<std::string> home_city;  // nullopt = Unknown
    std::vector<StaySpan> spans;
};

inline constexpr int kDefaultStayThresholdDays = 21;

/// One span per city with at least one resolvable check-in. Input must be one
/// user's check-ins sorted chronologically; check-ins whose venue_id is not in
/// the catalog are skipped with a warning.
std::vector<StaySpan> compute_stay_spans(const std::string& user_id,
                                         std::span<const CheckIn> checkins,
                                         const VenueCatalog& venues);

/// Home city = city of the maximal-days span when that span reaches the
/// threshold, else Unknown. Ties on days break by higher checkin_count, then
/// lexicographic city id.
UserClassification classify_user(const std::string& user_id, std::vector<StaySpan> spans,
                                 int threshold_days = kDefaultStayThresholdDays);

/// Home city -> Resident, any other city -> Tourist, Unknown home -> Excluded.
Label label_for_city(const UserClassification& classification, const std::string& city);

struct LabeledCheckIn {
    CheckIn checkin;
    std::string city;
    Label label = Label::Excluded;
};

struct ClassificationResult {
    std::vector<UserClassification> users;     // sorted by user_id
    std::vector<LabeledCheckIn> labeled;       // sorted by (user, time, checkin_id)
    size_t skipped_unresolved_venue = 0;
};

/// Full dataset driver: groups by user, sorts chronologically, classifies and
/// labels every check-in. Per-user work is independent (order of users in the
/// input does not matter).
ClassificationResult classify_dataset(std::span<const CheckIn> checkins,
                                      const VenueCatalog& venues,
                                      int threshold_days = kDefaultStayThresholdDays);

}  // namespace lbsn
