#include "doctest.h"

#include <sstream>

#include "lbsn/ingest.hpp"
#include "test_util.hpp"

using namespace lbsn;

namespace {

const char* kCheckinHeader = "checkin_id,user_id,venue_id,timestamp,lat,lon\n";

ParseResult parse_csv_text(const std::string& body) {
    std::istringstream in(body);
    return parse_checkins_stream(in, InputFormat::Csv);
}

}  // namespace

TEST_CASE("category labels are the fixed 17") {
    CHECK(kCategories.size() == 17);
    for (auto label : kCategories) CHECK(is_valid_category(label));
    CHECK_FALSE(is_valid_category("food"));
    CHECK_FALSE(is_valid_category("Travel & Transport"));
}

TEST_CASE("default category map pins the named splits") {
    const auto map = CategoryMap::default_map();

    // Subcategory-level splits that differ from their parent category.
    CHECK(map.remap("Travel & Transport", "Hotel") == "travel");
    CHECK(map.remap("Travel & Transport", "Train Station") == "transport");
    CHECK(map.remap("Travel & Transport", "Subway") == "transport");
    CHECK(map.remap("Food", "Burger Joint") == "fastfood");
    CHECK(map.remap("Food", "Fast Food Restaurant") == "fastfood");
    CHECK(map.remap("Food", "Coffee Shop") == "drink");
    CHECK(map.remap("Nightlife Spot", "Bar") == "drink");

    // Category-level fallbacks.
    CHECK(map.remap("Food", "Churrascaria") == "restaurants");
    CHECK(map.remap("Residences", "Home (private)") == "home");
    CHECK(map.remap("Travel & Transport", "Airport") == "travel");
    CHECK(map.remap("Travel & Transport", "Bus Station") == "transport");
    CHECK(map.remap("College & University", "Classroom") == "school");
    CHECK(map.remap("Shop & Service", "Mall") == "shopping");
    CHECK(map.remap("Outdoors & Recreation", "Park") == "outdoors");
    CHECK(map.remap("Arts & Entertainment", "Art Museum") == "arts");

    // Matching ignores case.
    CHECK(map.remap("travel & transport", "HOTEL") == "travel");

    // Unknown input falls through to the default.
    CHECK(map.remap("Mystery", "Mystery Spot") == "services");
    CHECK(map.default_target() == "services");
}

TEST_CASE("default category map is total over arbitrary input") {
    const auto map = CategoryMap::default_map();
    const std::vector<std::pair<std::string, std::string>> inputs = {
        {"", ""}, {"Food", ""}, {"", "Hotel"}, {"!!??", "12345"},
        {"Nightlife Spot", "Nightclub"}, {"Event", "Music Festival"}};
    for (const auto& [cat, sub] : inputs) {
        CHECK(is_valid_category(map.remap(cat, sub)));
    }
    for (const auto& rule : map.rules()) CHECK(is_valid_category(rule.target));
}

TEST_CASE("category map from json file") {
    testutil::TempDir dir;
    testutil::write_file(dir.file("map.json"), R"({
        "default": "services",
        "rules": [
            {"match_subcategory": "Hotel", "target": "travel"},
            {"match_category": "Residences", "target": "home"}
        ]})");
    auto map = CategoryMap::load(dir.file("map.json").string());
    CHECK(map.remap("Travel & Transport", "Hotel") == "travel");
    CHECK(map.remap("Residences", "Apartment") == "home");
    CHECK(map.remap("Food", "Diner") == "services");

    testutil::write_file(dir.file("bad.json"), R"({
        "default": "services",
        "rules": [{"match_subcategory": "Hotel", "target": "lodging"}]})");
    CHECK_THROWS_AS(CategoryMap::load(dir.file("bad.json").string()), ConfigError);
}

TEST_CASE("empty check-in file parses to nothing") {
    auto result = parse_csv_text(kCheckinHeader);
    CHECK(result.checkins.empty());
    CHECK(result.rejected.empty());
}

TEST_CASE("check-in csv parsing with per-record rejection") {
    std::string body = kCheckinHeader;
    body += "c1,u1,v1,2014-05-05T10:00:00-03:00,-22.9,-43.2\n";
    body += "c2,u1,v1,not-a-time,-22.9,-43.2\n";            // bad timestamp
    body += "c3,u1,v1,2014-05-05T11:00:00-03:00,91.0,0.0\n";  // lat out of range
    body += "c4,u2,v2,2014-05-05T12:00:00-03:00,-22.8,-43.1\n";
    body += "c5,u2,v2,2014-05-05T12:30:00-03:00\n";           // wrong column count
    body += "c6,u3,v1,2014-05-05T13:00:00-03:00,-22.9,-43.2\n";

    auto result = parse_csv_text(body);
    REQUIRE(result.checkins.size() == 3);
    CHECK(result.checkins[0].checkin_id == "c1");
    CHECK(result.checkins[1].checkin_id == "c4");
    CHECK(result.checkins[2].checkin_id == "c6");
    CHECK(result.checkins[0].timestamp.local_hour() == 10);
    CHECK(result.checkins[0].lat == doctest::Approx(-22.9));

    REQUIRE(result.rejected.size() == 3);
    CHECK(result.rejected[0].line_no == 3);  // header is line 1
    CHECK(result.rejected[1].line_no == 4);
    CHECK(result.rejected[2].line_no == 6);
}

TEST_CASE("duplicate check-in ids keep the first record") {
    std::string body = kCheckinHeader;
    body += "c1,u1,v1,2014-05-05T10:00:00Z,1,1\n";
    body += "c1,u9,v9,2014-05-05T11:00:00Z,2,2\n";
    auto result = parse_csv_text(body);
    REQUIRE(result.checkins.size() == 1);
    CHECK(result.checkins[0].user_id == "u1");
    REQUIRE(result.rejected.size() == 1);
    CHECK(result.rejected[0].line_no == 3);
}

TEST_CASE("jsonl check-in parsing") {
    std::string body =
        R"({"checkin_id":"c1","user_id":"u1","venue_id":"v1","timestamp":"2014-05-05T10:00:00-03:00","lat":-22.9,"lon":-43.2})"
        "\n"
        R"({"checkin_id":"c2","lat":0,"lon":0})"
        "\n"
        "not json\n";
    std::istringstream in(body);
    auto result = parse_checkins_stream(in, InputFormat::Jsonl);
    REQUIRE(result.checkins.size() == 1);
    CHECK(result.checkins[0].venue_id == "v1");
    CHECK(result.rejected.size() == 2);
}

TEST_CASE("missing check-in header is a hard error") {
    std::istringstream in("c1,u1,v1,2014-05-05T10:00:00Z,1,1\n");
    CHECK_THROWS_AS(parse_checkins_stream(in, InputFormat::Csv), DataError);
}

TEST_CASE("check-in csv round trip") {
    std::string body = kCheckinHeader;
    body += "c1,\"user, one\",v1,2014-05-05T10:00:00-03:00,-22.9068,-43.1729\n";
    body += "c2,u2,v2,2014-05-06T23:59:59Z,0.5,100.25\n";
    auto first = parse_csv_text(body);
    REQUIRE(first.rejected.empty());

    std::ostringstream out;
    write_checkins_csv(out, first.checkins);
    auto second = parse_csv_text(out.str());
    REQUIRE(second.rejected.empty());
    REQUIRE(second.checkins.size() == first.checkins.size());
    for (size_t i = 0; i < first.checkins.size(); ++i) {
        CHECK(second.checkins[i].checkin_id == first.checkins[i].checkin_id);
        CHECK(second.checkins[i].user_id == first.checkins[i].user_id);
        CHECK(second.checkins[i].timestamp == first.checkins[i].timestamp);
        CHECK(second.checkins[i].lat == first.checkins[i].lat);
        CHECK(second.checkins[i].lon == first.checkins[i].lon);
    }

    // JSONL writer round-trips through the JSONL parser too.
    std::ostringstream jout;
    write_checkins_jsonl(jout, first.checkins);
    std::istringstream jin(jout.str());
    auto third = parse_checkins_stream(jin, InputFormat::Jsonl);
    CHECK(third.rejected.empty());
    CHECK(third.checkins.size() == first.checkins.size());
}

TEST_CASE("venue loading remaps and keeps the last duplicate") {
    std::string body = "venue_id,name,city,lat,lon,category,subcategory\n";
    body += "v1,Copacabana Palace,Rio de Janeiro,-22.97,-43.18,Travel & Transport,Hotel\n";
    body += "v2,Central Station,Rio de Janeiro,-22.90,-43.19,Travel & Transport,Train Station\n";
    body += "v2,Central do Brasil,Rio de Janeiro,-22.90,-43.19,Travel & Transport,Train Station\n";
    body += "v3,Nowhere,Rio de Janeiro,95.0,0.0,Food,Diner\n";  // bad latitude

    std::istringstream in(body);
    auto result = load_venues_stream(in, CategoryMap::default_map());
    REQUIRE(result.venues.size() == 2);
    CHECK(result.venues.at("v1").category == "travel");
    CHECK(result.venues.at("v2").name == "Central do Brasil");
    CHECK(result.venues.at("v2").category == "transport");
    REQUIRE(result.rejected.size() == 1);
    CHECK(result.rejected[0].line_no == 5);

    // Round trip through the 8-column remapped form.
    std::ostringstream out;
    write_venues_csv(out, result.venues);
    std::istringstream back(out.str());
    auto reloaded = load_remapped_venues_stream(back);
    CHECK(reloaded.rejected.empty());
    REQUIRE(reloaded.venues.size() == 2);
    CHECK(reloaded.venues.at("v1").category == "travel");
    CHECK(reloaded.venues.at("v1").subcategory == "Hotel");
}
