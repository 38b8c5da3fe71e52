#include "lbsn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "lbsn/csv.hpp"

namespace lbsn {

bool BoundingBox::valid() const {
    return valid_coordinates(min_lat, min_lon) && valid_coordinates(max_lat, max_lon) &&
           min_lat < max_lat && min_lon < max_lon;
}

namespace {

using nlohmann::json;

std::vector<SubcategorySpec> default_subcategories() {
    return {
        {"Train Station", "Travel & Transport", 2.0},
        {"Subway", "Travel & Transport", 1.5},
        {"Hotel", "Travel & Transport", 1.0},
        {"Airport", "Travel & Transport", 0.5},
        {"Coffee Shop", "Food", 1.5},
        {"Burger Joint", "Food", 1.0},
        {"Japanese Restaurant", "Food", 1.0},
        {"Pizza Place", "Food", 1.0},
        {"Bar", "Nightlife Spot", 1.5},
        {"Nightclub", "Nightlife Spot", 0.5},
        {"Office", "Professional & Other Places", 1.5},
        {"Government Building", "Professional & Other Places", 0.5},
        {"Church", "Professional & Other Places", 0.5},
        {"University", "College & University", 1.0},
        {"Mall", "Shops & Services", 1.0},
        {"Electronics Store", "Shops & Services", 1.0},
        {"Convenience Store", "Shops & Services", 1.5},
        {"Park", "Outdoors & Recreation", 1.0},
        {"Beach", "Outdoors & Recreation", 1.0},
        {"Plaza", "Outdoors & Recreation", 1.0},
        {"Gym", "Outdoors & Recreation", 1.0},
        {"Stadium", "Outdoors & Recreation", 0.5},
        {"Museum", "Arts & Entertainment", 1.0},
        {"Home (private)", "Residences", 1.0},
    };
}

std::vector<double> resident_hour_weights() {
    // Business-hour peaks: morning, lunch, end of workday.
    std::vector<double> w(24, 0.2);
    for (int h : {7, 10, 11, 14, 15, 16, 17, 20, 21}) w[static_cast<size_t>(h)] = 1.0;
    for (int h : {8, 9, 12, 13, 18, 19}) w[static_cast<size_t>(h)] = 3.0;
    return w;
}

std::vector<double> tourist_hour_weights() {
    // Flat daytime mass.
    std::vector<double> w(24, 0.1);
    for (int h = 9; h <= 20; ++h) w[static_cast<size_t>(h)] = 1.0;
    return w;
}

BoundingBox bbox_from_json(const json& j) {
    BoundingBox box;
    box.min_lat = j.at("min_lat").get<double>();
    box.max_lat = j.at("max_lat").get<double>();
    box.min_lon = j.at("min_lon").get<double>();
    box.max_lon = j.at("max_lon").get<double>();
    return box;
}

CitySpec city_from_json(const json& j) {
    CitySpec city;
    city.name = j.at("name").get<std::string>();
    city.utc_offset_minutes = j.value("utc_offset_minutes", 0);
    city.venue_count = j.at("venue_count").get<int>();
    if (j.contains("bbox")) city.bbox = bbox_from_json(j["bbox"]);
    if (j.contains("subcategories")) {
        for (const auto& s : j["subcategories"]) {
            city.subcategories.push_back({s.at("subcategory").get<std::string>(),
                                          s.at("category").get<std::string>(),
                                          s.value("weight", 1.0)});
        }
    }
    return city;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

size_t weighted_pick(std::mt19937_64& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01(rng) * total;
    for (size_t i = 0; i < weights.size(); ++i) {
        u -= weights[i];
        if (u <= 0.0) return i;
    }
    return weights.size() - 1;
}

int poisson(std::mt19937_64& rng, double rate) {
    // Knuth's multiplication method; rates here are small.
    const double limit = std::exp(-rate);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01(rng);
    } while (p > limit);
    return k - 1;
}

std::string sanitize_id(const std::string& name) {
    std::string out;
    for (char c : name) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))
            out.push_back(c);
    }
    return out.empty() ? "city" : out;
}

int64_t parse_start_day(const std::string& date) {
    unsigned y = 0, m = 0, d = 0;
    if (std::sscanf(date.c_str(), "%4u-%2u-%2u", &y, &m, &d) != 3 || m < 1 || m > 12 ||
        d < 1 || d > 31)
        throw ConfigError("synth: invalid start_date '" + date + "'");
    return days_from_civil(static_cast<int>(y), m, d);
}

struct CityVenues {
    std::vector<Venue> venues;     // generation order
    std::vector<size_t> attractions;  // indices of attraction venues
    int32_t offset_s = 0;
};

CityVenues generate_city_venues(std::mt19937_64& rng, const CitySpec& spec,
                                const CategoryMap& map) {
    CityVenues out;
    out.offset_s = spec.utc_offset_minutes * 60;
    const auto subcats =
        spec.subcategories.empty() ? default_subcategories() : spec.subcategories;
    std::vector<double> weights;
    weights.reserve(subcats.size());
    for (const auto& s : subcats) weights.push_back(s.weight);

    const std::string prefix = sanitize_id(spec.name);
    for (int i = 0; i < spec.venue_count; ++i) {
        const auto& sub = subcats[weighted_pick(rng, weights)];
        Venue v;
        char idbuf[64];
        std::snprintf(idbuf, sizeof(idbuf), "%s-V%04d", prefix.c_str(), i);
        v.venue_id = idbuf;
        v.name = sub.subcategory + " " + std::to_string(i);
        v.city = spec.name;
        v.lat = uniform_range(rng, spec.bbox.min_lat, spec.bbox.max_lat);
        v.lon = uniform_range(rng, spec.bbox.min_lon, spec.bbox.max_lon);
        v.raw_category = sub.raw_category;
        v.subcategory = sub.subcategory;
        v.category = map.remap(v.raw_category, v.subcategory);
        out.venues.push_back(std::move(v));
    }
    const size_t attraction_count = std::max<size_t>(1, out.venues.size() / 10);
    for (size_t i = 0; i < std::min(attraction_count, out.venues.size()); ++i)
        out.attractions.push_back(i);
    return out;
}

struct UserPlan {
    std::string user_id;
    const CityVenues* city = nullptr;
    size_t anchor = 0;                 // anchor venue index, disc center
    std::vector<size_t> candidates;    // venues within the concentration disc
    double radius_km = 0.0;
    int64_t first_day = 0;             // forced first check-in day (absolute)
    int64_t last_day = 0;              // forced last check-in day
    double daily_rate = 1.0;
    const std::vector<double>* hour_weights = nullptr;
    const PlantedTopic* topic = nullptr;
    double attraction_bias = 0.0;      // 0 disables attraction preference
};

UserPlan make_plan(std::mt19937_64& rng, const CityVenues& city, double radius_km) {
    UserPlan plan;
    plan.city = &city;
    plan.radius_km = radius_km;
    plan.anchor = static_cast<size_t>(uniform01(rng) * static_cast<double>(city.venues.size()));
    if (plan.anchor >= city.venues.size()) plan.anchor = city.venues.size() - 1;
    const GeoPoint center{city.venues[plan.anchor].lat, city.venues[plan.anchor].lon};
    for (size_t i = 0; i < city.venues.size(); ++i) {
        const GeoPoint p{city.venues[i].lat, city.venues[i].lon};
        if (haversine_km(center, p) <= radius_km) plan.candidates.push_back(i);
    }
    if (plan.candidates.empty()) plan.candidates.push_back(plan.anchor);  // anchor itself
    return plan;
}

size_t pick_venue(std::mt19937_64& rng, const UserPlan& plan) {
    const auto& cands = plan.candidates;
    // Planted topic: bias towards venues carrying a topic subcategory.
    if (plan.topic) {
        std::vector<double> names_w;
        std::vector<std::string> names;
        for (const auto& [sub, w] : plan.topic->subcategory_weights) {
            names.push_back(sub);
            names_w.push_back(w);
        }
        const std::string& wanted = names[weighted_pick(rng, names_w)];
        std::vector<size_t> matching;
        for (size_t i : cands) {
            if (plan.city->venues[i].subcategory == wanted) matching.push_back(i);
        }
        if (!matching.empty()) {
            const size_t j =
                static_cast<size_t>(uniform01(rng) * static_cast<double>(matching.size()));
            return matching[std::min(j, matching.size() - 1)];
        }
    }
    if (plan.attraction_bias > 0.0 && uniform01(rng) < plan.attraction_bias) {
        std::vector<size_t> attr;
        for (size_t i : cands) {
            if (std::binary_search(plan.city->attractions.begin(),
                                   plan.city->attractions.end(), i))
                attr.push_back(i);
        }
        if (!attr.empty()) {
            const size_t j =
                static_cast<size_t>(uniform01(rng) * static_cast<double>(attr.size()));
            return attr[std::min(j, attr.size() - 1)];
        }
    }
    const size_t j = static_cast<size_t>(uniform01(rng) * static_cast<double>(cands.size()));
    return cands[std::min(j, cands.size() - 1)];
}

void emit_user_checkins(std::mt19937_64& rng, const UserPlan& plan, uint64_t& checkin_seq,
                        std::vector<CheckIn>& out) {
    for (int64_t day = plan.first_day; day <= plan.last_day; ++day) {
        int count = poisson(rng, plan.daily_rate);
        if (day == plan.first_day || day == plan.last_day) count = std::max(count, 1);
        for (int i = 0; i < count; ++i) {
            const size_t venue_idx = pick_venue(rng, plan);
            const Venue& venue = plan.city->venues[venue_idx];
            CivilDateTime local = civil_from_days(day);
            local.hour = static_cast<unsigned>(weighted_pick(rng, *plan.hour_weights));
            local.minute = static_cast<unsigned>(uniform01(rng) * 60.0);
            local.second = static_cast<unsigned>(uniform01(rng) * 60.0);
            if (local.minute > 59) local.minute = 59;
            if (local.second > 59) local.second = 59;

            CheckIn c;
            char idbuf[32];
            std::snprintf(idbuf, sizeof(idbuf), "C%08llu",
                          static_cast<unsigned long long>(checkin_seq++));
            c.checkin_id = idbuf;
            c.user_id = plan.user_id;
            c.venue_id = venue.venue_id;
            c.timestamp = make_local_timestamp(local, plan.city->offset_s);
            c.lat = venue.lat;
            c.lon = venue.lon;
            out.push_back(std::move(c));
        }
    }
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario config: ") + e.what());
    }
    ScenarioConfig config;
    config.seed = doc.value("seed", uint64_t{1});
    config.start_date = doc.value("start_date", std::string("2014-04-01"));
    config.city = city_from_json(doc.at("city"));

    if (doc.contains("residents")) {
        const auto& r = doc["residents"];
        config.residents.count = r.value("count", 0);
        config.residents.span_days = r.value("span_days", 30);
        config.residents.daily_rate = r.value("daily_rate", 2.0);
        config.residents.concentration_radius_km = r.value("concentration_radius_km", 5.0);
        if (r.contains("hour_weights"))
            config.residents.hour_weights = r["hour_weights"].get<std::vector<double>>();
    }
    if (doc.contains("tourists")) {
        const auto& t = doc["tourists"];
        config.tourists.count = t.value("count", 0);
        config.tourists.visit_days = t.value("visit_days", 7);
        config.tourists.home_span_days = t.value("home_span_days", 30);
        config.tourists.daily_rate = t.value("daily_rate", 4.0);
        config.tourists.concentration_radius_km = t.value("concentration_radius_km", 2.0);
        config.tourists.attraction_bias = t.value("attraction_bias", 0.7);
        if (t.contains("hour_weights"))
            config.tourists.hour_weights = t["hour_weights"].get<std::vector<double>>();
        if (t.contains("home_city")) config.tourists.home_city = city_from_json(t["home_city"]);
    }
    if (doc.contains("planted_topics")) {
        for (const auto& t : doc["planted_topics"]) {
            PlantedTopic topic;
            topic.name = t.at("name").get<std::string>();
            for (const auto& [sub, w] : t.at("subcategories").items())
                topic.subcategory_weights[sub] = w.get<double>();
            config.planted_topics.push_back(std::move(topic));
        }
    }
    return config;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

void ScenarioConfig::validate() const {
    if (city.name.empty()) throw ConfigError("synth: city name must not be empty");
    if (city.venue_count < 0) throw ConfigError("synth: venue_count must be >= 0");
    if (city.venue_count > 0 && !city.bbox.valid())
        throw ConfigError("synth: invalid city bounding box");
    if (residents.count < 0 || tourists.count < 0)
        throw ConfigError("synth: user counts must be >= 0");
    if (residents.count > 0) {
        if (residents.span_days < 21)
            throw ConfigError("synth: resident span_days must be >= 21, got " +
                              std::to_string(residents.span_days));
        if (residents.daily_rate <= 0.0)
            throw ConfigError("synth: resident daily_rate must be > 0");
        if (residents.concentration_radius_km <= 0.0)
            throw ConfigError("synth: resident concentration radius must be > 0");
        if (city.venue_count < 1)
            throw ConfigError("synth: residents configured but city has no venues");
    }
    if (tourists.count > 0) {
        if (tourists.visit_days < 1 || tourists.visit_days >= 21)
            throw ConfigError("synth: tourist visit_days must be in [1, 20], got " +
                              std::to_string(tourists.visit_days));
        if (tourists.home_span_days < 21)
            throw ConfigError("synth: tourist home_span_days must be >= 21");
        if (tourists.daily_rate <= 0.0)
            throw ConfigError("synth: tourist daily_rate must be > 0");
        if (tourists.concentration_radius_km <= 0.0)
            throw ConfigError("synth: tourist concentration radius must be > 0");
        if (tourists.attraction_bias < 0.0 || tourists.attraction_bias > 1.0)
            throw ConfigError("synth: attraction_bias must be in [0, 1]");
        if (city.venue_count < 1)
            throw ConfigError("synth: tourists configured but city has no venues");
        if (tourists.home_city.name.empty())
            throw ConfigError("synth: tourists require a home_city spec");
        if (tourists.home_city.name == city.name)
            throw ConfigError("synth: tourist home_city must differ from the main city");
        if (tourists.home_city.venue_count < 1)
            throw ConfigError("synth: tourist home_city needs at least one venue");
        if (!tourists.home_city.bbox.valid())
            throw ConfigError("synth: invalid home_city bounding box");
    }
    for (const auto& topic : planted_topics) {
        if (topic.subcategory_weights.empty())
            throw ConfigError("synth: planted topic '" + topic.name + "' has no subcategories");
    }
    parse_start_day(start_date);
}

SynthDataset generate_dataset(const ScenarioConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    const CategoryMap map = CategoryMap::default_map();
    const int64_t base_day = parse_start_day(config.start_date);

    SynthDataset dataset;
    CityVenues main_city = generate_city_venues(rng, config.city, map);
    CityVenues home_city;
    if (config.tourists.count > 0)
        home_city = generate_city_venues(rng, config.tourists.home_city, map);

    for (const auto& v : main_city.venues) dataset.venues[v.venue_id] = v;
    for (const auto& v : home_city.venues) dataset.venues[v.venue_id] = v;

    const std::vector<double> res_hours = config.residents.hour_weights.empty()
                                              ? resident_hour_weights()
                                              : config.residents.hour_weights;
    const std::vector<double> tour_hours = config.tourists.hour_weights.empty()
                                               ? tourist_hour_weights()
                                               : config.tourists.hour_weights;
    if (res_hours.size() != 24 || tour_hours.size() != 24)
        throw ConfigError("synth: hour_weights must have 24 entries");

    uint64_t checkin_seq = 0;
    size_t user_seq = 0;
    auto planted_for = [&](size_t index) -> const PlantedTopic* {
        if (config.planted_topics.empty()) return nullptr;
        return &config.planted_topics[index % config.planted_topics.size()];
    };

    for (int i = 0; i < config.residents.count; ++i) {
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "R%04d", i);
        UserPlan plan = make_plan(rng, main_city, config.residents.concentration_radius_km);
        plan.user_id = idbuf;
        plan.first_day = base_day;
        plan.last_day = base_day + config.residents.span_days;
        plan.daily_rate = config.residents.daily_rate;
        plan.hour_weights = &res_hours;
        plan.topic = planted_for(user_seq);
        emit_user_checkins(rng, plan, checkin_seq, dataset.checkins);

        dataset.ground_truth.push_back({plan.user_id, "Resident", config.city.name,
                                        plan.topic ? plan.topic->name : "",
                                        config.residents.concentration_radius_km});
        ++user_seq;
    }

    for (int i = 0; i < config.tourists.count; ++i) {
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "T%04d", i);
        const std::string user_id = idbuf;
        const PlantedTopic* topic = planted_for(user_seq);

        // Home-city activity establishes residence (span >= 21 days).
        UserPlan home_plan =
            make_plan(rng, home_city, config.tourists.concentration_radius_km);
        home_plan.user_id = user_id;
        home_plan.first_day = base_day;
        home_plan.last_day = base_day + config.tourists.home_span_days;
        home_plan.daily_rate = config.tourists.daily_rate;
        home_plan.hour_weights = &res_hours;
        home_plan.topic = topic;
        emit_user_checkins(rng, home_plan, checkin_seq, dataset.checkins);

        // The visit: a short stay in the main city, attraction-biased.
        UserPlan visit_plan =
            make_plan(rng, main_city, config.tourists.concentration_radius_km);
        visit_plan.user_id = user_id;
        visit_plan.first_day = base_day + 2;
        visit_plan.last_day = base_day + 2 + config.tourists.visit_days - 1;
        visit_plan.daily_rate = config.tourists.daily_rate;
        visit_plan.hour_weights = &tour_hours;
        visit_plan.topic = topic;
        visit_plan.attraction_bias = config.tourists.attraction_bias;
        emit_user_checkins(rng, visit_plan, checkin_seq, dataset.checkins);

        dataset.ground_truth.push_back({user_id, "Tourist", config.tourists.home_city.name,
                                        topic ? topic->name : "",
                                        config.tourists.concentration_radius_km});
        ++user_seq;
    }

    std::sort(dataset.checkins.begin(), dataset.checkins.end(),
              [](const CheckIn& a, const CheckIn& b) {
                  if (a.user_id != b.user_id) return a.user_id < b.user_id;
                  if (a.timestamp.epoch_s != b.timestamp.epoch_s)
                      return a.timestamp.epoch_s < b.timestamp.epoch_s;
                  return a.checkin_id < b.checkin_id;
              });
    return dataset;
}

void write_dataset(const SynthDataset& dataset, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

    {
        std::ofstream out(out_dir + "/checkins.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + out_dir + "/checkins.csv");
        write_checkins_csv(out, dataset.checkins);
    }
    {
        std::ofstream out(out_dir + "/venues.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + out_dir + "/venues.csv");
        out << kVenueCsvHeader << "\n";
        for (const auto& [id, v] : dataset.venues) {
            out << join_csv({v.venue_id, v.name, v.city, format_double(v.lat),
                             format_double(v.lon), v.raw_category, v.subcategory})
                << "\n";
        }
    }
    {
        std::ofstream out(out_dir + "/ground_truth.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + out_dir + "/ground_truth.csv");
        out << kGroundTruthCsvHeader << "\n";
        for (const auto& gt : dataset.ground_truth) {
            out << join_csv({gt.user_id, gt.cls, gt.home_city, gt.planted_topic,
                             format_double(gt.radius_km)})
                << "\n";
        }
    }
}

}  // namespace lbsn
