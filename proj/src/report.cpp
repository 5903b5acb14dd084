#include "recur/report.hpp"

#include <cmath>
#include <cstdio>

namespace recur {

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string profile_csv_row(const ReturnProfile& p) {
    const double freq = static_cast<double>(p.count()) /
                        static_cast<double>(p.window.length());
    std::string out = csv_escape(p.system);
    out += ',';
    out += csv_escape(p.base_label);
    out += ',';
    out += csv_escape(p.epsilon);
    out += ',';
    out += std::to_string(p.window.begin);
    out += ',';
    out += std::to_string(p.window.end);
    out += ',';
    out += std::to_string(p.count());
    out += ',';
    out += std::to_string(p.max_gap);
    out += ',';
    out += format_double(freq);
    out += "\r\n";
    return out;
}

std::string profile_json(const ReturnProfile& p) {
    return std::string("{\"system\":\"") + p.system + "\",\"x\":\"" + p.base_label +
           "\",\"epsilon\":\"" + p.epsilon + "\",\"M\":" + std::to_string(p.window.begin) +
           ",\"N\":" + std::to_string(p.window.end) + ",\"count\":" + std::to_string(p.count()) +
           ",\"max_gap\":" + std::to_string(p.max_gap) + "}";
}

std::string density_estimate_json(const DensityEstimate& e) {
    return std::string("{\"W\":") + std::to_string(e.window_length) +
           ",\"horizon\":" + std::to_string(e.horizon) +
           ",\"min_count\":" + std::to_string(e.min_count) + ",\"min_frequency\":\"" +
           e.min_frequency.str() + "\",\"argmin_M\":" + std::to_string(e.argmin.begin) + "}";
}

std::string density_rows_csv(const std::vector<DensityRow>& rows) {
    std::string out = "system,x,epsilon,M,N,count,max_gap,frequency\r\n";
    for (const auto& r : rows) {
        out += csv_escape(r.system);
        out += ',';
        out += csv_escape(r.point);
        out += ',';
        out += csv_escape(r.epsilon);
        out += ',';
        out += std::to_string(r.window_begin);
        out += ',';
        out += std::to_string(r.window_end);
        out += ',';
        out += format_double(r.count);
        out += ',';
        out += std::to_string(r.max_gap);
        out += ',';
        out += r.exact ? r.frequency.str() : format_double(r.frequency_value);
        out += "\r\n";
    }
    return out;
}

}  // namespace recur
