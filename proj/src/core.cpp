#include "lbsn/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace lbsn {

bool valid_coordinates(double lat, double lon) {
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
           lon >= -180.0 && lon <= 180.0;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    constexpr double deg2rad = 3.14159265358979323846 / 180.0;
    const double lat1 = a.lat * deg2rad;
    const double lat2 = b.lat * deg2rad;
    const double dlat = (b.lat - a.lat) * deg2rad;
    const double dlon = (b.lon - a.lon) * deg2rad;

    const double sin_lat = std::sin(dlat / 2.0);
    const double sin_lon = std::sin(dlon / 2.0);
    double h = sin_lat * sin_lat + std::cos(lat1) * std::cos(lat2) * sin_lon * sin_lon;
    // Clamp rounding noise so antipodal points stay in asin's domain.
    if (h > 1.0) h = 1.0;
    if (h < 0.0) h = 0.0;
    return 2.0 * kEarthRadiusKm * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

// Howard Hinnant's civil-date algorithms.
int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

CivilDateTime civil_from_days(int64_t z) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t y = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    CivilDateTime out;
    out.year = static_cast<int>(y + (m <= 2));
    out.month = m;
    out.day = d;
    return out;
}

namespace {

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int64_t floor_mod(int64_t a, int64_t b) { return a - floor_div(a, b) * b; }

bool parse_uint(std::string_view s, size_t pos, size_t len, unsigned& out) {
    if (pos + len > s.size()) return false;
    unsigned v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<unsigned>(c - '0');
    }
    out = v;
    return true;
}

unsigned days_in_month(int year, unsigned month) {
    static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                         31, 31, 30, 31, 30, 31};
    if (month == 2) {
        const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

}  // namespace

std::optional<Timestamp> Timestamp::parse(std::string_view s) {
    // YYYY-MM-DD 'T' HH:MM:SS [.frac] (Z | +-HH:MM)
    unsigned year4 = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (s.size() < 20) return std::nullopt;
    if (!parse_uint(s, 0, 4, year4) || s[4] != '-' || !parse_uint(s, 5, 2, month) ||
        s[7] != '-' || !parse_uint(s, 8, 2, day))
        return std::nullopt;
    if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
    if (!parse_uint(s, 11, 2, hour) || s[13] != ':' || !parse_uint(s, 14, 2, minute) ||
        s[16] != ':' || !parse_uint(s, 17, 2, second))
        return std::nullopt;

    size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        size_t digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            ++pos;
            ++digits;
        }
        if (digits == 0) return std::nullopt;
    }
    if (pos >= s.size()) return std::nullopt;

    int32_t offset = 0;
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
        if (pos + 1 != s.size()) return std::nullopt;
    } else if (c == '+' || c == '-') {
        unsigned oh = 0, om = 0;
        if (pos + 6 != s.size()) return std::nullopt;
        if (!parse_uint(s, pos + 1, 2, oh) || s[pos + 3] != ':' ||
            !parse_uint(s, pos + 4, 2, om))
            return std::nullopt;
        if (oh > 23 || om > 59) return std::nullopt;
        offset = static_cast<int32_t>(oh * 3600 + om * 60);
        if (c == '-') offset = -offset;
    } else {
        return std::nullopt;
    }

    const int year = static_cast<int>(year4);
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month))
        return std::nullopt;
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    if (second == 60) second = 59;  // fold leap seconds

    Timestamp ts;
    ts.offset_s = offset;
    const int64_t local_s = days_from_civil(year, month, day) * 86400 + hour * 3600 +
                            minute * 60 + second;
    ts.epoch_s = local_s - offset;
    return ts;
}

std::string Timestamp::to_rfc3339() const {
    const CivilDateTime c = local();
    char buf[40];
    if (offset_s == 0) {
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02uZ", c.year, c.month,
                      c.day, c.hour, c.minute, c.second);
    } else {
        const char sign = offset_s < 0 ? '-' : '+';
        const int32_t abs_off = offset_s < 0 ? -offset_s : offset_s;
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02u:%02u:%02u%c%02d:%02d", c.year,
                      c.month, c.day, c.hour, c.minute, c.second, sign, abs_off / 3600,
                      (abs_off % 3600) / 60);
    }
    return buf;
}

CivilDateTime Timestamp::local() const {
    const int64_t local_s = epoch_s + offset_s;
    const int64_t days = floor_div(local_s, 86400);
    const int64_t sod = floor_mod(local_s, 86400);
    CivilDateTime c = civil_from_days(days);
    c.hour = static_cast<unsigned>(sod / 3600);
    c.minute = static_cast<unsigned>((sod % 3600) / 60);
    c.second = static_cast<unsigned>(sod % 60);
    return c;
}

int64_t Timestamp::local_day() const { return floor_div(epoch_s + offset_s, 86400); }

int Timestamp::local_hour() const {
    return static_cast<int>(floor_mod(epoch_s + offset_s, 86400) / 3600);
}

int Timestamp::local_weekday() const {
    // 1970-01-01 was a Thursday (index 3 with Monday = 0).
    return static_cast<int>(floor_mod(local_day() + 3, 7));
}

bool Timestamp::is_weekend() const { return local_weekday() >= 5; }

int64_t Timestamp::anchored_day(int anchor_hour) const {
    return floor_div(epoch_s + offset_s - static_cast<int64_t>(anchor_hour) * 3600, 86400);
}

Timestamp make_local_timestamp(const CivilDateTime& local, int32_t offset_s) {
    Timestamp ts;
    ts.offset_s = offset_s;
    ts.epoch_s = days_from_civil(local.year, local.month, local.day) * 86400 +
                 local.hour * 3600 + local.minute * 60 + local.second - offset_s;
    return ts;
}

const char* to_string(Label label) {
    switch (label) {
        case Label::Tourist: return "Tourist";
        case Label::Resident: return "Resident";
        case Label::Excluded: return "Excluded";
    }
    return "Excluded";
}

std::optional<Label> label_from_string(std::string_view text) {
    if (text == "Tourist") return Label::Tourist;
    if (text == "Resident") return Label::Resident;
    if (text == "Excluded") return Label::Excluded;
    return std::nullopt;
}

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("LBSN_LOG_LEVEL");
        if (!env) return LogLevel::Warn;
        const std::string v = ascii_lower(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        if (v == "warn" || v == "warning") return LogLevel::Warn;
        if (v == "error") return LogLevel::Error;
        if (v == "off" || v == "none") return LogLevel::Off;
        return LogLevel::Warn;
    }();
    return level;
}

void log_msg(LogLevel level, const std::string& message) {
    if (level < log_level()) return;
    static std::mutex mu;
    static const char* names[] = {"DEBUG", "INFO", "WARN", "ERROR", "OFF"};
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[" << names[static_cast<int>(level)] << "] " << message << "\n";
}

std::string format_double(double value) {
    char buf[64];
    // %.17g round-trips any double; trim to the shortest form that does.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == value) return buf;
    }
    return buf;
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

}  // namespace lbsn
