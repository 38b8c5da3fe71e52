#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "lbsn/core.hpp"

namespace testutil {

// Scratch directory cleaned up on scope exit.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}());
        for (int attempt = 0; attempt < 64; ++attempt) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "lbsn-test-%016llx",
                          static_cast<unsigned long long>(rng()));
            auto candidate = base / buf;
            if (std::filesystem::create_directory(candidate)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create temp directory");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline lbsn::Timestamp ts(const std::string& rfc3339) {
    auto parsed = lbsn::Timestamp::parse(rfc3339);
    if (!parsed) throw std::runtime_error("bad test timestamp: " + rfc3339);
    return *parsed;
}

inline lbsn::CheckIn make_checkin(std::string id, std::string user, std::string venue,
                                  const std::string& rfc3339, double lat = 0.0,
                                  double lon = 0.0) {
    lbsn::CheckIn c;
    c.checkin_id = std::move(id);
    c.user_id = std::move(user);
    c.venue_id = std::move(venue);
    c.timestamp = ts(rfc3339);
    c.lat = lat;
    c.lon = lon;
    return c;
}

inline lbsn::Venue make_venue(std::string id, std::string name, std::string city,
                              double lat, double lon, std::string raw_category,
                              std::string subcategory,
                              std::string category = "services") {
    lbsn::Venue v;
    v.venue_id = std::move(id);
    v.name = std::move(name);
    v.city = std::move(city);
    v.lat = lat;
    v.lon = lon;
    v.raw_category = std::move(raw_category);
    v.subcategory = std::move(subcategory);
    v.category = std::move(category);
    return v;
}

}  // namespace testutil
