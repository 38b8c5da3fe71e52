#include "lbsn/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "lbsn/csv.hpp"

namespace lbsn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string out_path(const PipelineConfig& config, std::string_view name) {
    return config.output_dir + "/" + std::string(name);
}

void require_stage_output(const PipelineConfig& config, std::string_view file,
                          const std::string& stage, const std::string& predecessor) {
    if (!fs::exists(out_path(config, file)))
        throw DataError(stage + ": missing " + std::string(file) + " — run the " +
                        predecessor + " stage first");
}

std::ofstream open_output(const PipelineConfig& config, std::string_view name) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    std::ofstream out(out_path(config, name), std::ios::binary);
    if (!out) throw IoError("cannot write " + out_path(config, name));
    return out;
}

VenueCatalog load_stage_venues(const PipelineConfig& config, const std::string& stage) {
    require_stage_output(config, kIngestedVenuesFile, stage, "ingest-check");
    return load_remapped_venues(out_path(config, kIngestedVenuesFile)).venues;
}

std::vector<LabeledCheckIn> load_stage_labeled(const PipelineConfig& config,
                                               const std::string& stage) {
    require_stage_output(config, kLabeledCheckinsFile, stage, "classify");
    return load_labeled_checkins(out_path(config, kLabeledCheckinsFile));
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("pipeline config: ") + e.what());
    }
    PipelineConfig config;
    config.checkins_path = doc.value("checkins", "");
    config.venues_path = doc.value("venues", "");
    if (doc.contains("format"))
        config.format = input_format_from_string(doc["format"].get<std::string>());
    config.category_map_path = doc.value("category_map", "");
    config.ground_truth_path = doc.value("ground_truth", "");
    config.threshold_days = doc.value("threshold_days", kDefaultStayThresholdDays);
    config.min_checkins_rg = doc.value("min_checkins_rg", kDefaultMinCheckinsForRadius);
    config.day_anchor_hour = doc.value("day_anchor_hour", kDefaultDayAnchorHour);
    if (doc.contains("displacement_denominator")) {
        const std::string v = ascii_lower(doc["displacement_denominator"].get<std::string>());
        if (v == "checkins") config.displacement_denominator = DisplacementDenominator::CheckinCount;
        else if (v == "transitions")
            config.displacement_denominator = DisplacementDenominator::TransitionCount;
        else throw ConfigError("displacement_denominator must be 'checkins' or 'transitions'");
    }
    if (doc.contains("path_metric")) {
        const std::string v = ascii_lower(doc["path_metric"].get<std::string>());
        if (v == "hops") config.path_metric = PathMetric::Hops;
        else if (v == "inverse_weight") config.path_metric = PathMetric::InverseWeight;
        else throw ConfigError("path_metric must be 'hops' or 'inverse_weight'");
    }
    if (doc.contains("graph_metrics")) {
        config.graph_metrics.clear();
        for (const auto& m : doc["graph_metrics"])
            config.graph_metrics.push_back(
                centrality_metric_from_string(m.get<std::string>()));
    }
    config.top_n = doc.value("top_n", size_t{10});
    if (doc.contains("lda")) {
        const auto& l = doc["lda"];
        config.lda.topics = l.value("K", 3);
        config.lda.alpha = l.value("alpha", -1.0);
        config.lda.beta = l.value("beta", 0.01);
        config.lda.iterations = l.value("iterations", 1000);
        config.lda.seed = l.value("seed", uint64_t{42});
    }
    config.lda_top_m = doc.contains("lda") ? doc["lda"].value("top_m", 10) : 10;
    config.output_dir = doc.value("output_dir", "out");
    return config;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    try {
        return from_json_text(read_file_bytes(path));
    } catch (const IoError& e) {
        // An unreadable config file is a configuration problem (exit 1),
        // unlike unreadable data inputs.
        throw ConfigError(e.what());
    }
}

void PipelineConfig::validate() const {
    if (checkins_path.empty()) throw ConfigError("checkins input path must not be empty");
    if (venues_path.empty()) throw ConfigError("venues input path must not be empty");
    if (threshold_days < 1) throw ConfigError("threshold_days must be positive");
    if (min_checkins_rg < 1) throw ConfigError("min_checkins_rg must be positive");
    if (day_anchor_hour < 0 || day_anchor_hour > 23)
        throw ConfigError("day_anchor_hour must be in [0, 23]");
    if (top_n < 1) throw ConfigError("top_n must be >= 1");
    if (lda.topics < 1) throw ConfigError("lda.K must be >= 1");
    if (lda.iterations < 1) throw ConfigError("lda.iterations must be >= 1");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::string slice_slug(const std::string& city, Label cls) {
    std::string slug;
    for (char c : ascii_lower(city)) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))
            slug.push_back(c);
        else
            slug.push_back('_');
    }
    slug.push_back('_');
    slug += ascii_lower(to_string(cls));
    return slug;
}

std::vector<LabeledCheckIn> load_labeled_checkins(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<LabeledCheckIn> labeled;
    std::string line;
    bool header_seen = false;
    size_t line_no = 0;
    while (read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (!fields || fields->size() != 8)
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed labeled row");
        LabeledCheckIn lc;
        lc.checkin.checkin_id = (*fields)[0];
        lc.checkin.user_id = (*fields)[1];
        lc.checkin.venue_id = (*fields)[2];
        auto ts = Timestamp::parse((*fields)[3]);
        if (!ts)
            throw DataError(path + ":" + std::to_string(line_no) + ": bad timestamp");
        lc.checkin.timestamp = *ts;
        lc.checkin.lat = std::stod((*fields)[4]);
        lc.checkin.lon = std::stod((*fields)[5]);
        lc.city = (*fields)[6];
        auto label = label_from_string((*fields)[7]);
        if (!label)
            throw DataError(path + ":" + std::to_string(line_no) + ": bad label");
        lc.label = *label;
        labeled.push_back(std::move(lc));
    }
    return labeled;
}

void run_ingest(const PipelineConfig& config) {
    if (config.checkins_path.empty() || config.venues_path.empty())
        throw ConfigError("ingest-check: checkins and venues paths are required");
    const CategoryMap map = config.category_map_path.empty()
                                ? CategoryMap::default_map()
                                : CategoryMap::load(config.category_map_path);

    ParseResult parsed = parse_checkins(config.checkins_path, config.format);
    VenueLoadResult venues = load_venues(config.venues_path, map);

    {
        auto out = open_output(config, kIngestedCheckinsFile);
        write_checkins_csv(out, parsed.checkins);
    }
    {
        auto out = open_output(config, kIngestedVenuesFile);
        write_venues_csv(out, venues.venues);
    }
    {
        auto out = open_output(config, kRejectedFile);
        out << "source,line_no,reason\n";
        for (const auto& r : parsed.rejected)
            out << join_csv({"checkins", std::to_string(r.line_no), r.reason}) << "\n";
        for (const auto& r : venues.rejected)
            out << join_csv({"venues", std::to_string(r.line_no), r.reason}) << "\n";
    }
    log_info("ingest: " + std::to_string(parsed.checkins.size()) + " check-ins, " +
             std::to_string(venues.venues.size()) + " venues, " +
             std::to_string(parsed.rejected.size() + venues.rejected.size()) + " rejected");
}

void run_classify(const PipelineConfig& config) {
    require_stage_output(config, kIngestedCheckinsFile, "classify", "ingest-check");
    const VenueCatalog venues = load_stage_venues(config, "classify");
    ParseResult parsed =
        parse_checkins(out_path(config, kIngestedCheckinsFile), InputFormat::Csv);
    ClassificationResult result =
        classify_dataset(parsed.checkins, venues, config.threshold_days);

    {
        auto out = open_output(config, kUserClassificationFile);
        out << "user_id,home_city,max_days\n";
        for (const auto& user : result.users) {
            int64_t max_days = 0;
            for (const auto& span : user.spans) max_days = std::max(max_days, span.days);
            out << join_csv({user.user_id, user.home_city ? *user.home_city : "Unknown",
                             std::to_string(max_days)})
                << "\n";
        }
    }
    {
        auto out = open_output(config, kLabeledCheckinsFile);
        out << kCheckinCsvHeader << ",city,label\n";
        for (const auto& lc : result.labeled) {
            const CheckIn& c = lc.checkin;
            out << join_csv({c.checkin_id, c.user_id, c.venue_id, c.timestamp.to_rfc3339(),
                             format_double(c.lat), format_double(c.lon), lc.city,
                             to_string(lc.label)})
                << "\n";
        }
    }
}

void run_behavior(const PipelineConfig& config) {
    const VenueCatalog venues = load_stage_venues(config, "behavior");
    const auto labeled = load_stage_labeled(config, "behavior");
    const auto slices = labeled_slices(labeled);

    auto intervals_out = open_output(config, "intervals.csv");
    intervals_out << "city,class,hours\n";
    auto cdf_out = open_output(config, "interval_cdf.csv");
    cdf_out << "city,class,hours,cum_fraction\n";
    auto routines_out = open_output(config, "routines.csv");
    routines_out << "city,class,daytype,hour,count\n";
    auto ranking_out = open_output(config, "venue_ranking.csv");
    ranking_out << "city,class,rank,venue,count\n";
    auto categories_out = open_output(config, "categories.csv");
    categories_out << "city,class,category,count,fraction\n";

    for (const auto& [city, cls] : slices) {
        const auto dist = interval_distribution(labeled, city, cls);
        for (double h : dist.samples)
            intervals_out << join_csv({city, to_string(cls), format_double(h)}) << "\n";
        for (const auto& [value, frac] : empirical_cdf(dist.samples))
            cdf_out << join_csv({city, to_string(cls), format_double(value),
                                 format_double(frac)})
                    << "\n";

        for (DayType daytype : {DayType::Weekday, DayType::Weekend}) {
            const auto routine = hourly_routine(labeled, city, cls, daytype);
            for (int h = 0; h < 24; ++h) {
                routines_out << join_csv({city, to_string(cls), to_string(daytype),
                                          std::to_string(h),
                                          std::to_string(routine.counts[static_cast<size_t>(h)])})
                             << "\n";
            }
        }

        const auto ranking = venue_ranking(labeled, venues, city, cls, config.top_n);
        for (size_t i = 0; i < ranking.size(); ++i) {
            ranking_out << join_csv({city, to_string(cls), std::to_string(i + 1),
                                     ranking[i].name, std::to_string(ranking[i].count)})
                        << "\n";
        }

        const auto pop = category_popularity(labeled, venues, city, cls);
        for (const auto& [cat, count] : pop.counts) {
            const double frac = pop.total > 0 ? pop.fractions.at(cat) : 0.0;
            categories_out << join_csv({city, to_string(cls), cat, std::to_string(count),
                                        pop.total > 0 ? format_double(frac) : ""})
                           << "\n";
        }
    }
}

void run_mobility(const PipelineConfig& config) {
    const auto labeled = load_stage_labeled(config, "mobility");
    const auto summaries =
        mobility_summaries(labeled, config.min_checkins_rg, config.displacement_denominator);

    auto out = open_output(config, "mobility.csv");
    out << "user_id,city,class,n_checkins,mean_displacement_km,radius_gyration_km\n";
    for (const auto& s : summaries) {
        out << join_csv({s.user_id, s.city, to_string(s.cls),
                         std::to_string(s.checkin_count),
                         format_double(s.mean_displacement_km),
                         s.radius_gyration_km ? format_double(*s.radius_gyration_km) : ""})
            << "\n";
    }

    auto cdf_out = open_output(config, "mobility_cdf.csv");
    cdf_out << "city,class,metric,value,cum_fraction\n";
    std::map<std::pair<std::string, int>, std::pair<std::vector<double>, std::vector<double>>>
        slices;
    for (const auto& s : summaries) {
        auto& slot = slices[{s.city, s.cls == Label::Tourist ? 0 : 1}];
        slot.first.push_back(s.mean_displacement_km);
        if (s.radius_gyration_km) slot.second.push_back(*s.radius_gyration_km);
    }
    for (const auto& [key, samples] : slices) {
        const Label cls = key.second == 0 ? Label::Tourist : Label::Resident;
        for (const auto& [value, frac] : empirical_cdf(samples.first))
            cdf_out << join_csv({key.first, to_string(cls), "mean_displacement_km",
                                 format_double(value), format_double(frac)})
                    << "\n";
        for (const auto& [value, frac] : empirical_cdf(samples.second))
            cdf_out << join_csv({key.first, to_string(cls), "radius_gyration_km",
                                 format_double(value), format_double(frac)})
                    << "\n";
    }
}

void run_graph(const PipelineConfig& config) {
    const VenueCatalog venues = load_stage_venues(config, "graph");
    const auto labeled = load_stage_labeled(config, "graph");

    for (const auto& [city, cls] : labeled_slices(labeled)) {
        const MobilityGraph g = build_graph(labeled, city, cls, config.day_anchor_hour);
        const std::string slug = slice_slug(city, cls);
        {
            auto out = open_output(config, "graph_edges_" + slug + ".csv");
            write_edges_csv(out, g);
        }
        {
            auto out = open_output(config, "graph_" + slug + ".dot");
            write_dot(out, g, venues);
        }
        for (CentralityMetric metric : config.graph_metrics) {
            const auto ranking =
                centrality_ranking(g, venues, metric, config.top_n, config.path_metric);
            auto out = open_output(
                config, std::string("centrality_") + to_string(metric) + "_" + slug + ".csv");
            out << "rank,label,subcategory,score\n";
            for (size_t i = 0; i < ranking.size(); ++i) {
                out << join_csv({std::to_string(i + 1), ranking[i].display_label,
                                 ranking[i].subcategory, format_double(ranking[i].score)})
                    << "\n";
            }
        }
    }
}

void run_profiles(const PipelineConfig& config) {
    const VenueCatalog venues = load_stage_venues(config, "profiles");
    const auto labeled = load_stage_labeled(config, "profiles");

    auto out = open_output(config, "profiles.csv");
    out << "city,class,topic_index,rank,subcategory,probability\n";
    for (const auto& [city, cls] : labeled_slices(labeled)) {
        const Corpus corpus = build_corpus(labeled, venues, city, cls);
        if (corpus.docs.empty() || corpus.vocabulary.empty()) continue;
        const TopicModel model = fit_lda(corpus, config.lda);
        for (const auto& entry : top_subcategories(model, config.lda_top_m)) {
            out << join_csv({city, to_string(cls), std::to_string(entry.topic),
                             std::to_string(entry.rank), entry.subcategory,
                             format_double(entry.probability)})
                << "\n";
        }
        auto model_out =
            open_output(config, "lda_model_" + slice_slug(city, cls) + ".txt");
        dump_model(model_out, model);
    }
}

namespace {

size_t count_data_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) return 0;
    size_t rows = 0;
    std::string line;
    bool header = true;
    while (read_line(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        ++rows;
    }
    return rows;
}

std::optional<double> ground_truth_accuracy(const PipelineConfig& config) {
    if (config.ground_truth_path.empty()) return std::nullopt;
    std::ifstream in(config.ground_truth_path);
    if (!in) throw IoError("cannot open ground truth: " + config.ground_truth_path);

    std::map<std::string, std::string> expected_home;  // user -> home city
    std::string line;
    bool header = true;
    while (read_line(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto fields = split_csv_line(line);
        if (!fields || fields->size() < 3)
            throw DataError("malformed ground truth row: " + line);
        expected_home[(*fields)[0]] = (*fields)[2];
    }
    if (expected_home.empty()) return std::nullopt;

    std::ifstream cls_in(config.output_dir + "/" + std::string(kUserClassificationFile));
    if (!cls_in) throw DataError("manifest accuracy: classification output missing");
    std::map<std::string, std::string> actual_home;
    header = true;
    while (read_line(cls_in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto fields = split_csv_line(line);
        if (!fields || fields->size() < 2) continue;
        actual_home[(*fields)[0]] = (*fields)[1];
    }

    size_t matched = 0;
    for (const auto& [user, home] : expected_home) {
        auto it = actual_home.find(user);
        if (it != actual_home.end() && it->second == home) ++matched;
    }
    return static_cast<double>(matched) / static_cast<double>(expected_home.size());
}

}  // namespace

void run_all(const PipelineConfig& config) {
    config.validate();
    using clock = std::chrono::steady_clock;
    std::map<std::string, double> timing_ms;
    auto timed = [&](const char* name, auto&& stage) {
        const auto start = clock::now();
        stage();
        timing_ms[name] =
            std::chrono::duration<double, std::milli>(clock::now() - start).count();
    };

    timed("ingest", [&] { run_ingest(config); });
    timed("classify", [&] { run_classify(config); });
    timed("behavior", [&] { run_behavior(config); });
    timed("mobility", [&] { run_mobility(config); });
    timed("graph", [&] { run_graph(config); });
    timed("profiles", [&] { run_profiles(config); });

    json manifest;
    manifest["inputs"] = json::object();
    manifest["inputs"][config.checkins_path] =
        fnv1a64_hex(read_file_bytes(config.checkins_path));
    manifest["inputs"][config.venues_path] =
        fnv1a64_hex(read_file_bytes(config.venues_path));
    manifest["parameters"] = {
        {"format", config.format == InputFormat::Csv ? "csv" : "jsonl"},
        {"threshold_days", config.threshold_days},
        {"min_checkins_rg", config.min_checkins_rg},
        {"day_anchor_hour", config.day_anchor_hour},
        {"top_n", config.top_n},
        {"lda_K", config.lda.topics},
        {"lda_alpha", config.lda.effective_alpha()},
        {"lda_beta", config.lda.beta},
        {"lda_iterations", config.lda.iterations},
        {"lda_seed", config.lda.seed},
    };
    json counts = json::object();
    for (const auto& name :
         {std::string(kIngestedCheckinsFile), std::string(kIngestedVenuesFile),
          std::string(kRejectedFile), std::string(kUserClassificationFile),
          std::string(kLabeledCheckinsFile), std::string("intervals.csv"),
          std::string("routines.csv"), std::string("venue_ranking.csv"),
          std::string("categories.csv"), std::string("mobility.csv"),
          std::string("profiles.csv")}) {
        const std::string key = name.substr(0, name.rfind('.'));
        counts[key] = count_data_rows(config.output_dir + "/" + name);
    }
    manifest["row_counts"] = counts;
    if (auto accuracy = ground_truth_accuracy(config))
        manifest["classification_accuracy"] = *accuracy;
    json timing = json::object();
    for (const auto& [name, ms] : timing_ms) timing[name] = ms;
    manifest["timing_ms"] = timing;

    auto out = open_output(config, kManifestFile);
    out << manifest.dump(2) << "\n";
}

}  // namespace lbsn
