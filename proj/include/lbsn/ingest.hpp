#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lbsn/core.hpp"

namespace lbsn {

// The 17 remapped venue categories.
inline constexpr std::array<std::string_view, 17> kCategories = {
    "arts",     "entertainment", "city",     "health",   "professional", "religion",
    "drink",    "fastfood",      "restaurants", "home",  "outdoors",     "sports",
    "school",   "services",      "shopping", "transport", "travel"};

bool is_valid_category(std::string_view label);

struct CategoryRule {
    enum class Field { Category, Subcategory };
    Field field = Field::Subcategory;
    std::string pattern;  // case-insensitive exact match; "*" matches anything
    std::string target;   // one of the 17 labels
};

/// Ordered first-match-wins subcategory remapping. Total: unmatched inputs
/// fall through to the default target.
class CategoryMap {
public:
    CategoryMap(std::vector<CategoryRule> rules, std::string default_target);

    /// The built-in mapping: named subcategory splits plus category-level
    /// fallbacks; default target "services".
    static CategoryMap default_map();

    /// Loads a mapping from a JSON file:
    ///   {"default": "services",
    ///    "rules": [{"match_subcategory": "Hotel", "target": "travel"},
    ///              {"match_category": "Residences", "target": "home"}, ...]}
    static CategoryMap load(const std::string& path);

    const std::string& remap(std::string_view raw_category,
                             std::string_view raw_subcategory) const;

    const std::vector<CategoryRule>& rules() const { return rules_; }
    const std::string& default_target() const { return default_target_; }

private:
    std::vector<CategoryRule> rules_;
    std::string default_target_;
};

struct RejectedRecord {
    size_t line_no = 0;  // 1-based, header included in numbering
    std::string reason;
};

enum class InputFormat { Csv, Jsonl };
InputFormat input_format_from_string(std::string_view name);

struct ParseResult {
    std::vector<CheckIn> checkins;  // file order preserved
    std::vector<RejectedRecord> rejected;
};

/// CSV columns: checkin_id,user_id,venue_id,timestamp,lat,lon (header row
/// required). JSONL: one object per line with the same keys.
ParseResult parse_checkins(const std::string& path, InputFormat format);
ParseResult parse_checkins_stream(std::istream& in, InputFormat format);

using VenueCatalog = std::map<std::string, Venue>;

struct VenueLoadResult {
    VenueCatalog venues;
    std::vector<RejectedRecord> rejected;
};

/// Venue CSV columns: venue_id,name,city,lat,lon,category,subcategory, where
/// category/subcategory are the provider's raw labels. Each venue gets its
/// remapped category from the map. Duplicate venue_id: last record wins.
VenueLoadResult load_venues(const std::string& path, const CategoryMap& map);
VenueLoadResult load_venues_stream(std::istream& in, const CategoryMap& map);

inline constexpr std::string_view kCheckinCsvHeader =
    "checkin_id,user_id,venue_id,timestamp,lat,lon";
inline constexpr std::string_view kVenueCsvHeader =
    "venue_id,name,city,lat,lon,category,subcategory";

void write_checkins_csv(std::ostream& out, std::span<const CheckIn> checkins);
void write_checkins_jsonl(std::ostream& out, std::span<const CheckIn> checkins);

/// Venue CSV with the remapped category appended as a trailing column.
void write_venues_csv(std::ostream& out, const VenueCatalog& venues);
VenueLoadResult load_remapped_venues_stream(std::istream& in);
VenueLoadResult load_remapped_venues(const std::string& path);

}  // namespace lbsn
