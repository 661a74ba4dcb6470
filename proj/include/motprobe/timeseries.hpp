#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace motprobe {

struct SeriesMetadata {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string artifact_version;
    std::string generated_at;
};

// Samples indexed by a strictly increasing independent variable (time in s
// or position in mm).
struct TimeSeries {
    std::string x_name = "time";
    std::string x_unit = "s";
    std::string value_name = "value";
    std::string value_unit;
    std::vector<double> xs;
    std::vector<double> values;
    SeriesMetadata metadata;

    std::size_t size() const { return xs.size(); }
    void push_back(double x, double v) {
        xs.push_back(x);
        values.push_back(v);
    }
    void validate() const;
};

// Two header lines (column names, then units) followed by one "x,value" row
// per sample. Numbers use the shortest representation that round-trips.
std::string to_csv(const TimeSeries& series);
TimeSeries parse_csv(std::string_view text);

}  // namespace motprobe
