#include "lbsn/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lbsn/csv.hpp"

namespace lbsn {

bool is_valid_category(std::string_view label) {
    return std::find(kCategories.begin(), kCategories.end(), label) != kCategories.end();
}

CategoryMap::CategoryMap(std::vector<CategoryRule> rules, std::string default_target)
    : rules_(std::move(rules)), default_target_(std::move(default_target)) {
    if (!is_valid_category(default_target_))
        throw ConfigError("category map: default target '" + default_target_ +
                          "' is not one of the 17 labels");
    for (const auto& rule : rules_) {
        if (!is_valid_category(rule.target))
            throw ConfigError("category map: rule target '" + rule.target +
                              "' is not one of the 17 labels");
    }
}

namespace {

bool ci_match(std::string_view pattern, std::string_view value) {
    if (pattern == "*") return true;
    if (pattern.size() != value.size()) return false;
    for (size_t i = 0; i < pattern.size(); ++i) {
        char a = pattern[i], b = value[i];
        if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
        if (b >= 'A' && b <= 'Z') b = static_cast<char>(b - 'A' + 'a');
        if (a != b) return false;
    }
    return true;
}

}  // namespace

const std::string& CategoryMap::remap(std::string_view raw_category,
                                      std::string_view raw_subcategory) const {
    for (const auto& rule : rules_) {
        const std::string_view value =
            rule.field == CategoryRule::Field::Category ? raw_category : raw_subcategory;
        if (ci_match(rule.pattern, value)) return rule.target;
    }
    return default_target_;
}

CategoryMap CategoryMap::default_map() {
    using F = CategoryRule::Field;
    std::vector<CategoryRule> rules;
    auto sub = [&](const char* pattern, const char* target) {
        rules.push_back({F::Subcategory, pattern, target});
    };
    auto cat = [&](const char* pattern, const char* target) {
        rules.push_back({F::Category, pattern, target});
    };

    // Travel & Transport split: travel-related lodging vs urban transit.
    sub("Hotel", "travel");
    sub("Hostel", "travel");
    sub("Motel", "travel");
    sub("Resort", "travel");
    sub("Bed & Breakfast", "travel");
    sub("Vacation Rental", "travel");
    sub("Travel Agency", "travel");
    sub("Tourist Information Center", "travel");
    sub("Airport", "travel");
    sub("Cruise", "travel");
    sub("Train Station", "transport");
    sub("Subway", "transport");
    sub("Metro Station", "transport");
    sub("Light Rail", "transport");
    sub("Tram Station", "transport");
    sub("Bus Station", "transport");
    sub("Bus Stop", "transport");
    sub("Bus Line", "transport");
    sub("Taxi", "transport");
    sub("Ferry", "transport");
    sub("Road", "transport");
    sub("Bridge", "transport");

    // Professional & Other Places split.
    sub("Government Building", "city");
    sub("City Hall", "city");
    sub("Capitol Building", "city");
    sub("Courthouse", "city");
    sub("Embassy / Consulate", "city");
    sub("Fire Station", "city");
    sub("Police Station", "city");
    sub("Post Office", "city");
    sub("States & Municipalities", "city");
    sub("Hospital", "health");
    sub("Medical Center", "health");
    sub("Doctor's Office", "health");
    sub("Dentist's Office", "health");
    sub("Emergency Room", "health");
    sub("Veterinarian", "health");
    sub("Church", "religion");
    sub("Mosque", "religion");
    sub("Synagogue", "religion");
    sub("Temple", "religion");
    sub("Shrine", "religion");
    sub("Spiritual Center", "religion");

    // Food split: drinking places, fast food, everything else restaurants.
    sub("Coffee Shop", "drink");
    sub("Café", "drink");
    sub("Cafe", "drink");
    sub("Tea Room", "drink");
    sub("Juice Bar", "drink");
    sub("Bar", "drink");
    sub("Pub", "drink");
    sub("Gastropub", "drink");
    sub("Brewery", "drink");
    sub("Cocktail Bar", "drink");
    sub("Wine Bar", "drink");
    sub("Beer Garden", "drink");
    sub("Speakeasy", "drink");
    sub("Fast Food Restaurant", "fastfood");
    sub("Burger Joint", "fastfood");
    sub("Pizza Place", "fastfood");
    sub("Sandwich Place", "fastfood");
    sub("Fried Chicken Joint", "fastfood");
    sub("Hot Dog Joint", "fastfood");
    sub("Snack Place", "fastfood");
    sub("Food Truck", "fastfood");
    sub("Taco Place", "fastfood");
    sub("Wings Joint", "fastfood");

    // Nightlife split: dancing/shows to entertainment, drinking stays drink.
    sub("Nightclub", "entertainment");
    sub("Dance Club", "entertainment");
    sub("Music Venue", "entertainment");
    sub("Concert Hall", "entertainment");
    sub("Arcade", "entertainment");
    sub("Casino", "entertainment");
    sub("Movie Theater", "entertainment");
    sub("Multiplex", "entertainment");
    sub("Theme Park", "entertainment");
    sub("Festival", "entertainment");

    // Outdoors & Recreation split.
    sub("Gym", "sports");
    sub("Gym / Fitness Center", "sports");
    sub("Athletics & Sports", "sports");
    sub("Stadium", "sports");
    sub("Baseball Stadium", "sports");
    sub("Soccer Stadium", "sports");
    sub("Football Stadium", "sports");
    sub("Basketball Stadium", "sports");
    sub("Soccer Field", "sports");
    sub("Track", "sports");
    sub("Yoga Studio", "sports");
    sub("Martial Arts Dojo", "sports");
    sub("Pool", "sports");

    // Shops & Services split: retail to shopping, the rest services.
    sub("Mall", "shopping");
    sub("Shopping Mall", "shopping");
    sub("Department Store", "shopping");
    sub("Clothing Store", "shopping");
    sub("Electronics Store", "shopping");
    sub("Bookstore", "shopping");
    sub("Shoe Store", "shopping");
    sub("Jewelry Store", "shopping");
    sub("Boutique", "shopping");
    sub("Cosmetics Shop", "shopping");
    sub("Convenience Store", "shopping");
    sub("Grocery Store", "shopping");
    sub("Supermarket", "shopping");
    sub("Market", "shopping");
    sub("Food & Drink Shop", "shopping");

    // Category-level fallbacks, after the subcategory splits above.
    cat("Arts & Entertainment", "arts");
    cat("Event", "entertainment");
    cat("Events", "entertainment");
    cat("Nightlife Spot", "drink");
    cat("Professional & Other Places", "professional");
    cat("Food", "restaurants");
    cat("Residences", "home");
    cat("Outdoors & Recreation", "outdoors");
    cat("College & University", "school");
    cat("Shops & Services", "services");
    cat("Shop & Service", "services");
    cat("Travel & Transport", "transport");

    return CategoryMap(std::move(rules), "services");
}

CategoryMap CategoryMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open category map: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("category map " + path + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("default") || !doc.contains("rules"))
        throw ConfigError("category map " + path + ": expected {default, rules}");
    std::vector<CategoryRule> rules;
    for (const auto& entry : doc["rules"]) {
        CategoryRule rule;
        if (entry.contains("match_subcategory")) {
            rule.field = CategoryRule::Field::Subcategory;
            rule.pattern = entry["match_subcategory"].get<std::string>();
        } else if (entry.contains("match_category")) {
            rule.field = CategoryRule::Field::Category;
            rule.pattern = entry["match_category"].get<std::string>();
        } else {
            throw ConfigError("category map " + path +
                              ": rule needs match_subcategory or match_category");
        }
        rule.target = entry.at("target").get<std::string>();
        rules.push_back(std::move(rule));
    }
    return CategoryMap(std::move(rules), doc["default"].get<std::string>());
}

InputFormat input_format_from_string(std::string_view name) {
    const std::string v = ascii_lower(name);
    if (v == "csv") return InputFormat::Csv;
    if (v == "jsonl" || v == "json-lines" || v == "ndjson") return InputFormat::Jsonl;
    throw ConfigError("unsupported input format: " + std::string(name));
}

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

struct FieldSet {
    std::string checkin_id, user_id, venue_id, timestamp;
    std::string lat, lon;
};

// Shared validation for both formats; returns an error reason or builds c.
std::optional<std::string> build_checkin(const FieldSet& f, CheckIn& c) {
    if (f.checkin_id.empty()) return "empty checkin_id";
    if (f.user_id.empty()) return "empty user_id";
    if (f.venue_id.empty()) return "empty venue_id";
    auto ts = Timestamp::parse(f.timestamp);
    if (!ts) return "unparseable timestamp '" + f.timestamp + "'";
    double lat = 0.0, lon = 0.0;
    if (!parse_double(f.lat, lat)) return "unparseable lat '" + f.lat + "'";
    if (!parse_double(f.lon, lon)) return "unparseable lon '" + f.lon + "'";
    if (lat < -90.0 || lat > 90.0) return "lat out of range";
    if (lon < -180.0 || lon > 180.0) return "lon out of range";
    c.checkin_id = f.checkin_id;
    c.user_id = f.user_id;
    c.venue_id = f.venue_id;
    c.timestamp = *ts;
    c.lat = lat;
    c.lon = lon;
    return std::nullopt;
}

}  // namespace

ParseResult parse_checkins_stream(std::istream& in, InputFormat format) {
    ParseResult result;
    std::string line;
    size_t line_no = 0;
    bool header_seen = false;
    std::map<std::string, size_t> seen_ids;

    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;

        FieldSet f;
        if (format == InputFormat::Csv) {
            if (!header_seen) {
                if (line != kCheckinCsvHeader)
                    throw DataError("check-in CSV must start with the header '" +
                                    std::string(kCheckinCsvHeader) + "'");
                header_seen = true;
                continue;
            }
            auto fields = split_csv_line(line);
            if (!fields) {
                result.rejected.push_back({line_no, "unbalanced quotes"});
                continue;
            }
            if (fields->size() != 6) {
                result.rejected.push_back({line_no, "expected 6 columns, got " +
                                                        std::to_string(fields->size())});
                continue;
            }
            f = {(*fields)[0], (*fields)[1], (*fields)[2],
                 (*fields)[3], (*fields)[4], (*fields)[5]};
        } else {
            nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
            if (obj.is_discarded() || !obj.is_object()) {
                result.rejected.push_back({line_no, "invalid JSON object"});
                continue;
            }
            auto str = [&](const char* key) -> std::string {
                if (!obj.contains(key)) return {};
                const auto& v = obj[key];
                if (v.is_string()) return v.get<std::string>();
                if (v.is_number()) return format_double(v.get<double>());
                return {};
            };
            f.checkin_id = str("checkin_id");
            f.user_id = str("user_id");
            f.venue_id = str("venue_id");
            f.timestamp = str("timestamp");
            f.lat = str("lat");
            f.lon = str("lon");
        }

        CheckIn c;
        if (auto reason = build_checkin(f, c)) {
            result.rejected.push_back({line_no, *reason});
            continue;
        }
        // checkin_id uniqueness: keep the first, reject later duplicates.
        auto [it, fresh] = seen_ids.try_emplace(c.checkin_id, line_no);
        if (!fresh) {
            result.rejected.push_back(
                {line_no, "duplicate checkin_id " + c.checkin_id + " (first seen on line " +
                              std::to_string(it->second) + ")"});
            continue;
        }
        result.checkins.push_back(std::move(c));
    }
    return result;
}

ParseResult parse_checkins(const std::string& path, InputFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open check-in file: " + path);
    return parse_checkins_stream(in, format);
}

namespace {

VenueLoadResult load_venues_impl(std::istream& in, const CategoryMap* map,
                                 bool remapped_column) {
    VenueLoadResult result;
    std::string line;
    size_t line_no = 0;
    bool header_seen = false;
    const size_t expected_cols = remapped_column ? 8 : 7;

    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (!fields || fields->size() != expected_cols) {
            result.rejected.push_back({line_no, "malformed venue row"});
            continue;
        }
        Venue v;
        v.venue_id = (*fields)[0];
        v.name = (*fields)[1];
        v.city = (*fields)[2];
        if (v.venue_id.empty()) {
            result.rejected.push_back({line_no, "empty venue_id"});
            continue;
        }
        if (!parse_double((*fields)[3], v.lat) || !parse_double((*fields)[4], v.lon) ||
            !valid_coordinates(v.lat, v.lon)) {
            result.rejected.push_back({line_no, "missing or invalid coordinates"});
            continue;
        }
        v.raw_category = (*fields)[5];
        v.subcategory = (*fields)[6];
        if (remapped_column) {
            v.category = (*fields)[7];
            if (!is_valid_category(v.category)) {
                result.rejected.push_back({line_no, "invalid remapped category"});
                continue;
            }
        } else {
            v.category = map->remap(v.raw_category, v.subcategory);
        }
        if (result.venues.count(v.venue_id)) {
            log_warn("duplicate venue_id " + v.venue_id + ": last record wins");
        }
        result.venues[v.venue_id] = std::move(v);
    }
    return result;
}

}  // namespace

VenueLoadResult load_venues_stream(std::istream& in, const CategoryMap& map) {
    return load_venues_impl(in, &map, false);
}

VenueLoadResult load_venues(const std::string& path, const CategoryMap& map) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open venue file: " + path);
    return load_venues_stream(in, map);
}

VenueLoadResult load_remapped_venues_stream(std::istream& in) {
    return load_venues_impl(in, nullptr, true);
}

VenueLoadResult load_remapped_venues(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open venue file: " + path);
    return load_remapped_venues_stream(in);
}

void write_checkins_csv(std::ostream& out, std::span<const CheckIn> checkins) {
    out << kCheckinCsvHeader << "\n";
    for (const auto& c : checkins) {
        out << join_csv({c.checkin_id, c.user_id, c.venue_id, c.timestamp.to_rfc3339(),
                         format_double(c.lat), format_double(c.lon)})
            << "\n";
    }
}

void write_checkins_jsonl(std::ostream& out, std::span<const CheckIn> checkins) {
    for (const auto& c : checkins) {
        nlohmann::json obj{{"checkin_id", c.checkin_id},
                           {"user_id", c.user_id},
                           {"venue_id", c.venue_id},
                           {"timestamp", c.timestamp.to_rfc3339()},
                           {"lat", c.lat},
                           {"lon", c.lon}};
        out << obj.dump() << "\n";
    }
}

void write_venues_csv(std::ostream& out, const VenueCatalog& venues) {
    out << kVenueCsvHeader << ",remapped_category\n";
    for (const auto& [id, v] : venues) {
        out << join_csv({v.venue_id, v.name, v.city, format_double(v.lat),
                         format_double(v.lon), v.raw_category, v.subcategory, v.category})
            << "\n";
    }
}

}  // namespace lbsn
