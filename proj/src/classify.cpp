#include "lbsn/classify.hpp"

#include <algorithm>
#include <map>

namespace lbsn {

std::vector<StaySpan> compute_stay_spans(const std::string& user_id,
                                         std::span<const CheckIn> checkins,
                                         const VenueCatalog& venues) {
    std::map<std::string, StaySpan> by_city;
    for (const auto& c : checkins) {
        auto it = venues.find(c.venue_id);
        if (it == venues.end()) {
            log_warn("user " + user_id + ": check-in " + c.checkin_id +
                     " references unknown venue " + c.venue_id + ", skipped");
            continue;
        }
        const std::string& city = it->second.city;
        auto [span_it, inserted] = by_city.try_emplace(city);
        StaySpan& span = span_it->second;
        if (inserted) {
            span.user_id = user_id;
            span.city = city;
            span.first_checkin = c.timestamp;
            span.last_checkin = c.timestamp;
            span.checkin_count = 1;
        } else {
            if (c.timestamp < span.first_checkin) span.first_checkin = c.timestamp;
            if (span.last_checkin < c.timestamp) span.last_checkin = c.timestamp;
            ++span.checkin_count;
        }
    }
    std::vector<StaySpan> spans;
    spans.reserve(by_city.size());
    for (auto& [city, span] : by_city) {
        span.days = span.last_checkin.local_day() - span.first_checkin.local_day();
        spans.push_back(std::move(span));
    }
    return spans;
}

UserClassification classify_user(const std::string& user_id, std::vector<StaySpan> spans,
                                 int threshold_days) {
    if (threshold_days < 1)
        throw ConfigError("stay threshold must be at least 1 day");
    UserClassification out;
    out.user_id = user_id;
    const StaySpan* best = nullptr;
    for (const auto& span : spans) {
        if (!best) {
            best = &span;
            continue;
        }
        if (span.days != best->days) {
            if (span.days > best->days) best = &span;
        } else if (span.checkin_count != best->checkin_count) {
            if (span.checkin_count > best->checkin_count) best = &span;
        } else if (span.city < best->city) {
            best = &span;
        }
    }
    if (best && best->days >= threshold_days) out.home_city = best->city;
    out.spans = std::move(spans);
    return out;
}

Label label_for_city(const UserClassification& classification, const std::string& city) {
    if (!classification.home_city) return Label::Excluded;
    return *classification.home_city == city ? Label::Resident : Label::Tourist;
}

ClassificationResult classify_dataset(std::span<const CheckIn> checkins,
                                      const VenueCatalog& venues, int threshold_days) {
    std::map<std::string, std::vector<CheckIn>> by_user;
    for (const auto& c : checkins) by_user[c.user_id].push_back(c);

    ClassificationResult result;
    for (auto& [user_id, user_checkins] : by_user) {
        std::stable_sort(user_checkins.begin(), user_checkins.end(),
                         [](const CheckIn& a, const CheckIn& b) {
                             if (a.timestamp.epoch_s != b.timestamp.epoch_s)
                                 return a.timestamp.epoch_s < b.timestamp.epoch_s;
                             return a.checkin_id < b.checkin_id;
                         });
        auto spans = compute_stay_spans(user_id, user_checkins, venues);
        auto classification = classify_user(user_id, std::move(spans), threshold_days);
        for (auto& c : user_checkins) {
            auto it = venues.find(c.venue_id);
            if (it == venues.end()) {
                ++result.skipped_unresolved_venue;
                continue;
            }
            LabeledCheckIn labeled;
            labeled.city = it->second.city;
            labeled.label = label_for_city(classification, labeled.city);
            labeled.checkin = std::move(c);
            result.labeled.push_back(std::move(labeled));
        }
        result.users.push_back(std::move(classification));
    }
    return result;
}

}  // namespace lbsn
