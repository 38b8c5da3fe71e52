#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lbsn {

// ---------------------------------------------------------------------------
// Errors. Exit-code mapping lives in the CLI: ConfigError -> 1, DataError and
// IoError -> 2, anything else -> 3.
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

bool valid_coordinates(double lat, double lon);

/// Great-circle distance in km on a sphere of radius 6371 km.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// ---------------------------------------------------------------------------
// Time. Timestamps keep their original UTC offset; all hour-of-day and
// calendar-day computations use the offset-local clock.
// ---------------------------------------------------------------------------

struct CivilDateTime {
    int year = 1970;
    unsigned month = 1;  // 1-12
    unsigned day = 1;    // 1-31
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
int64_t days_from_civil(int year, unsigned month, unsigned day);
CivilDateTime civil_from_days(int64_t days_since_epoch);

struct Timestamp {
    int64_t epoch_s = 0;   // seconds since Unix epoch, UTC
    int32_t offset_s = 0;  // local time = epoch_s + offset_s

    /// Parses an RFC 3339 instant, e.g. "2014-05-05T10:30:00-03:00" or
    /// "2014-05-05T10:30:00Z". Fractional seconds are truncated.
    static std::optional<Timestamp> parse(std::string_view text);

    std::string to_rfc3339() const;

    CivilDateTime local() const;
    int64_t local_day() const;  // local calendar day as days since epoch
    int local_hour() const;     // 0-23
    int local_weekday() const;  // 0 = Monday .. 6 = Sunday
    bool is_weekend() const;

    /// Calendar day shifted so the day boundary falls at anchor_hour local
    /// time instead of midnight.
    int64_t anchored_day(int anchor_hour) const;

    friend bool operator==(const Timestamp& a, const Timestamp& b) {
        return a.epoch_s == b.epoch_s && a.offset_s == b.offset_s;
    }
    friend bool operator<(const Timestamp& a, const Timestamp& b) {
        return a.epoch_s < b.epoch_s;
    }
    friend bool operator<=(const Timestamp& a, const Timestamp& b) {
        return a.epoch_s <= b.epoch_s;
    }
};

/// Builds a timestamp from local civil time plus a UTC offset.
Timestamp make_local_timestamp(const CivilDateTime& local, int32_t offset_s);

// ---------------------------------------------------------------------------
// Domain records
// ---------------------------------------------------------------------------

struct CheckIn {
    std::string checkin_id;
    std::string user_id;
    std::string venue_id;
    Timestamp timestamp;
    double lat = 0.0;
    double lon = 0.0;

    GeoPoint point() const { return {lat, lon}; }
};

struct Venue {
    std::string venue_id;
    std::string name;
    std::string city;
    double lat = 0.0;
    double lon = 0.0;
    std::string raw_category;  // provider category, e.g. "Travel & Transport"
    std::string subcategory;   // provider subcategory, e.g. "Train Station"
    std::string category;      // one of the 17 remapped labels
};

enum class Label { Tourist, Resident, Excluded };

const char* to_string(Label label);
std::optional<Label> label_from_string(std::string_view text);

// ---------------------------------------------------------------------------
// Logging. Level comes from LBSN_LOG_LEVEL (debug|info|warn|error|off),
// default warn.
// ---------------------------------------------------------------------------

enum class LogLevel { Debug = 0, Info, Warn, Error, Off };

LogLevel log_level();
void log_msg(LogLevel level, const std::string& message);
inline void log_debug(const std::string& m) { log_msg(LogLevel::Debug, m); }
inline void log_info(const std::string& m) { log_msg(LogLevel::Info, m); }
inline void log_warn(const std::string& m) { log_msg(LogLevel::Warn, m); }
inline void log_error(const std::string& m) { log_msg(LogLevel::Error, m); }

// ---------------------------------------------------------------------------
// Small helpers shared across modules
// ---------------------------------------------------------------------------

/// Shortest round-trippable decimal representation of a double.
std::string format_double(double value);

/// FNV-1a 64-bit over a byte string; used for file hashes in run manifests.
uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string ascii_lower(std::string_view s);

}  // namespace lbsn
