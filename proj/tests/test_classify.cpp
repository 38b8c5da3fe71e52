#include "doctest.h"

#include <algorithm>
#include <random>

#include "lbsn/classify.hpp"
#include "test_util.hpp"

using namespace lbsn;
using testutil::make_checkin;
using testutil::make_venue;

namespace {

VenueCatalog two_city_catalog() {
    VenueCatalog venues;
    venues["a1"] = make_venue("a1", "A One", "CityA", -22.9, -43.2, "Food", "Diner",
                              "restaurants");
    venues["a2"] = make_venue("a2", "A Two", "CityA", -22.8, -43.1, "Food", "Bakery",
                              "restaurants");
    venues["b1"] = make_venue("b1", "B One", "CityB", -23.5, -46.6, "Food", "Diner",
                              "restaurants");
    return venues;
}

// Check-ins in CityA (venue a1) on each given day of May 2014.
std::vector<CheckIn> may_days(const std::string& user, const std::string& venue,
                              std::initializer_list<int> days) {
    std::vector<CheckIn> out;
    int i = 0;
    for (int d : days) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "2014-05-%02dT12:00:00-03:00", d);
        out.push_back(make_checkin(user + "-" + std::to_string(i++), user, venue, buf));
    }
    return out;
}

}  // namespace

TEST_CASE("stay span days are calendar-day differences") {
    auto venues = two_city_catalog();

    // May 5 to May 30 spans 25 days.
    auto spans = compute_stay_spans("u1", may_days("u1", "a1", {5, 30}), venues);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].city == "CityA");
    CHECK(spans[0].days == 25);
    CHECK(spans[0].checkin_count == 2);

    // A single check-in spans 0 days.
    spans = compute_stay_spans("u2", may_days("u2", "a1", {5}), venues);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].days == 0);

    // Late-evening local times still count by local date: May 5 23:30 to
    // May 6 00:30 is 1 day even though they are an hour apart.
    std::vector<CheckIn> pair = {
        make_checkin("x1", "u3", "a1", "2014-05-05T23:30:00-03:00"),
        make_checkin("x2", "u3", "a1", "2014-05-06T00:30:00-03:00")};
    spans = compute_stay_spans("u3", pair, venues);
    REQUIRE(spans.size() == 1);
    CHECK(spans[0].days == 1);
}

TEST_CASE("spans split by city and skip unresolved venues") {
    auto venues = two_city_catalog();
    std::vector<CheckIn> cs = may_days("u1", "a1", {1, 10});
    auto more = may_days("u1", "b1", {12, 20});
    cs.insert(cs.end(), more.begin(), more.end());
    cs.push_back(make_checkin("ghost", "u1", "missing", "2014-05-25T12:00:00-03:00"));
    std::sort(cs.begin(), cs.end(), [](const CheckIn& a, const CheckIn& b) {
        return a.timestamp.epoch_s < b.timestamp.epoch_s;
    });

    auto spans = compute_stay_spans("u1", cs, venues);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].city == "CityA");
    CHECK(spans[0].days == 9);
    CHECK(spans[1].city == "CityB");
    CHECK(spans[1].days == 8);
}

TEST_CASE("threshold sharpness at 21 days") {
    auto venues = two_city_catalog();

    auto at_20 = classify_user(
        "u", compute_stay_spans("u", may_days("u", "a1", {1, 21}), venues));
    CHECK_FALSE(at_20.home_city.has_value());

    auto at_21 = classify_user(
        "u", compute_stay_spans("u", may_days("u", "a1", {1, 22}), venues));
    REQUIRE(at_21.home_city.has_value());
    CHECK(*at_21.home_city == "CityA");

    // A custom threshold moves the cut.
    auto loose = classify_user(
        "u", compute_stay_spans("u", may_days("u", "a1", {1, 11}), venues), 10);
    REQUIRE(loose.home_city.has_value());
    CHECK_THROWS_AS(classify_user("u", {}, 0), ConfigError);
}

TEST_CASE("home city is the maximal-days span") {
    auto venues = two_city_catalog();
    // CityA span: 9 days; CityB span: 38 days.
    std::vector<CheckIn> cs = {
        make_checkin("1", "u", "a1", "2014-05-01T10:00:00-03:00"),
        make_checkin("2", "u", "b1", "2014-04-01T10:00:00-03:00"),
        make_checkin("3", "u", "a1", "2014-05-10T10:00:00-03:00"),
        make_checkin("4", "u", "b1", "2014-05-09T10:00:00-03:00")};
    std::sort(cs.begin(), cs.end(), [](const CheckIn& a, const CheckIn& b) {
        return a.timestamp.epoch_s < b.timestamp.epoch_s;
    });
    auto cls = classify_user("u", compute_stay_spans("u", cs, venues));
    REQUIRE(cls.home_city.has_value());
    CHECK(*cls.home_city == "CityB");
    CHECK(label_for_city(cls, "CityB") == Label::Resident);
    CHECK(label_for_city(cls, "CityA") == Label::Tourist);
}

TEST_CASE("equal-days tie breaks by check-in count then city name") {
    std::vector<StaySpan> spans(2);
    spans[0] = {"u", "CityA", testutil::ts("2014-05-01T10:00:00Z"),
                testutil::ts("2014-05-26T10:00:00Z"), 25, 3};
    spans[1] = {"u", "CityB", testutil::ts("2014-05-01T10:00:00Z"),
                testutil::ts("2014-05-26T10:00:00Z"), 25, 7};
    auto cls = classify_user("u", spans);
    REQUIRE(cls.home_city.has_value());
    CHECK(*cls.home_city == "CityB");  // more check-ins wins

    spans[1].checkin_count = 3;
    cls = classify_user("u", spans);
    REQUIRE(cls.home_city.has_value());
    CHECK(*cls.home_city == "CityA");  // full tie: lexicographically first city
}

TEST_CASE("dataset classification labels and partitions") {
    auto venues = two_city_catalog();
    // u1: resident of CityA (25-day span) who also visits CityB briefly.
    std::vector<CheckIn> cs = may_days("u1", "a1", {1, 13, 26});
    cs.push_back(make_checkin("u1-b", "u1", "b1", "2014-05-14T12:00:00-03:00"));
    // u2: only 5 days anywhere, so Excluded everywhere.
    auto u2 = may_days("u2", "b1", {3, 8});
    cs.insert(cs.end(), u2.begin(), u2.end());

    auto result = classify_dataset(cs, venues);
    REQUIRE(result.users.size() == 2);
    CHECK(result.users[0].user_id == "u1");
    REQUIRE(result.users[0].home_city.has_value());
    CHECK(*result.users[0].home_city == "CityA");
    CHECK_FALSE(result.users[1].home_city.has_value());

    REQUIRE(result.labeled.size() == cs.size());
    for (const auto& lc : result.labeled) {
        if (lc.checkin.user_id == "u2") {
            CHECK(lc.label == Label::Excluded);
        } else if (lc.city == "CityA") {
            CHECK(lc.label == Label::Resident);
        } else {
            CHECK(lc.label == Label::Tourist);
        }
    }

    // Labeled output is sorted per user chronologically.
    for (size_t i = 1; i < result.labeled.size(); ++i) {
        const auto& a = result.labeled[i - 1];
        const auto& b = result.labeled[i];
        if (a.checkin.user_id == b.checkin.user_id)
            CHECK(a.checkin.timestamp <= b.checkin.timestamp);
    }
}

TEST_CASE("classification is input-order invariant") {
    auto venues = two_city_catalog();
    std::vector<CheckIn> cs = may_days("u1", "a1", {1, 5, 9, 26});
    auto extra = may_days("u2", "b1", {2, 28});
    cs.insert(cs.end(), extra.begin(), extra.end());

    auto baseline = classify_dataset(cs, venues);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(cs.begin(), cs.end(), rng);
        auto shuffled = classify_dataset(cs, venues);
        REQUIRE(shuffled.users.size() == baseline.users.size());
        for (size_t i = 0; i < baseline.users.size(); ++i) {
            CHECK(shuffled.users[i].user_id == baseline.users[i].user_id);
            CHECK(shuffled.users[i].home_city == baseline.users[i].home_city);
        }
        REQUIRE(shuffled.labeled.size() == baseline.labeled.size());
        for (size_t i = 0; i < baseline.labeled.size(); ++i)
            CHECK(shuffled.labeled[i].checkin.checkin_id ==
                  baseline.labeled[i].checkin.checkin_id);
    }
}

TEST_CASE("extending a stay never loses resident status") {
    auto venues = two_city_catalog();
    auto before = classify_user(
        "u", compute_stay_spans("u", may_days("u", "a1", {1, 25}), venues));
    REQUIRE(before.home_city.has_value());
    auto after = classify_user(
        "u", compute_stay_spans("u", may_days("u", "a1", {1, 25, 31}), venues));
    REQUIRE(after.home_city.has_value());
    CHECK(*after.home_city == *before.home_city);
}
