#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "motprobe/error.hpp"
#include "motprobe/timeseries.hpp"

using namespace motprobe;

TEST_CASE("csv layout") {
    TimeSeries s;
    s.value_name = "spcm_rate";
    s.value_unit = "counts/s";
    s.push_back(0.0, 150000.0);
    s.push_back(0.1, 0.1 + 0.2);
    CHECK(to_csv(s) == "time,spcm_rate\ns,counts/s\n0,150000\n0.1,0.30000000000000004\n");
}

TEST_CASE("csv round trip is exact") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-300, 300);
    for (int trial = 0; trial < 50; ++trial) {
        TimeSeries s;
        s.x_name = "position";
        s.x_unit = "mm";
        s.value_name = "v";
        s.value_unit = "V";
        double x = mant(gen);
        for (int i = 0; i < 40; ++i) {
            x = std::nextafter(x + std::abs(mant(gen)) * 1e-3, 1e300);
            s.push_back(x, std::ldexp(mant(gen), ex(gen)));
        }
        s.push_back(x + 1.0, std::numeric_limits<double>::denorm_min());
        const TimeSeries back = parse_csv(to_csv(s));
        CHECK(back.xs == s.xs);
        CHECK(back.values == s.values);
        CHECK(back.x_name == s.x_name);
        CHECK(back.value_unit == s.value_unit);
        CHECK(to_csv(back) == to_csv(s));
    }
}

TEST_CASE("csv tolerates CRLF and blank lines") {
    const auto s = parse_csv("time,v\r\ns,V\r\n\r\n0,1\r\n1,2\r\n\n");
    CHECK(s.size() == 2);
    CHECK(s.values[1] == 2.0);
}

TEST_CASE("bad csv input") {
    for (const char* text : {"", "time,v\n", "time,v\ns,V\n0,abc\n", "time,v\ns,V\n0\n",
                             "time,v\ns,V\n1,1\n0,2\n", "time,v\ns,V\n0,nan\n"}) {
        CAPTURE(text);
        try {
            parse_csv(text);
            FAIL("expected invalid-data");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidData);
        }
    }
}

TEST_CASE("series validation") {
    TimeSeries s;
    s.push_back(1.0, 0.0);
    s.push_back(1.0, 0.0);
    CHECK_THROWS_AS(s.validate(), Error);
    TimeSeries ragged;
    ragged.xs = {0.0, 1.0};
    ragged.values = {0.0};
    CHECK_THROWS_AS(to_csv(ragged), Error);
}
