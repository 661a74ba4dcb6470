#include "motprobe/timeseries.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "motprobe/error.hpp"

namespace motprobe {

namespace {

void append_number(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    return s;
}

// Splits "a,b" into exactly two fields.
bool split_pair(std::string_view line, std::string_view& a, std::string_view& b) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
        return false;
    }
    a = trim(line.substr(0, comma));
    b = trim(line.substr(comma + 1));
    return true;
}

double parse_number(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        fail(ErrorKind::InvalidData,
             "CSV line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace

void TimeSeries::validate() const {
    require(xs.size() == values.size(), ErrorKind::InvalidData,
            "series x and value lengths differ");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(std::isfinite(xs[i]) && std::isfinite(values[i]), ErrorKind::InvalidData,
                "series samples must be finite");
        if (i > 0) {
            require(xs[i] > xs[i - 1], ErrorKind::InvalidData,
                    "series x must be strictly increasing");
        }
    }
}

std::string to_csv(const TimeSeries& series) {
    series.validate();
    std::string out;
    out.reserve(32 * (series.size() + 2));
    out += series.x_name + "," + series.value_name + "\n";
    out += series.x_unit + "," + series.value_unit + "\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        append_number(out, series.xs[i]);
        out += ',';
        append_number(out, series.values[i]);
        out += '\n';
    }
    return out;
}

TimeSeries parse_csv(std::string_view text) {
    TimeSeries series;
    std::size_t line_no = 0;
    std::size_t record = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        ++record;

        std::string_view a;
        std::string_view b;
        if (!split_pair(line, a, b)) {
            fail(ErrorKind::InvalidData,
                 "CSV line " + std::to_string(line_no) + ": expected two columns");
        }
        if (record == 1) {
            series.x_name = a;
            series.value_name = b;
        } else if (record == 2) {
            series.x_unit = a;
            series.value_unit = b;
        } else {
            series.push_back(parse_number(a, line_no), parse_number(b, line_no));
        }
    }
    require(record >= 2, ErrorKind::InvalidData, "CSV needs a name line and a unit line");
    series.validate();
    return series;
}

}  // namespace motprobe
