#include <doctest.h>

#include <cmath>

#include "motprobe/detectors.hpp"
#include "motprobe/error.hpp"
#include "motprobe/rng.hpp"
#include "oracles.hpp"

using namespace motprobe;

TEST_CASE("rng matches the reference SplitMix64 stream") {
    Rng rng(12345);
    oracle::SplitMix ref{12345};
    for (int i = 0; i < 1000; ++i) CHECK(rng.next() == ref.next());

    Rng u(9);
    oracle::SplitMix ru{9};
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v == ru.uniform());
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("split streams are independent of consumption order") {
    const Rng root(77);
    Rng a = root.split(3);
    Rng b = root.split(3);
    CHECK(a == b);
    CHECK_FALSE(root.split(3) == root.split(4));
    a.next();
    CHECK(root.split(3) == b);
}

TEST_CASE("spcm sample at zero rate") {
    Rng rng(1);
    const SpcmSpec spec;
    for (int i = 0; i < 100; ++i) CHECK(spcm_sample(0.0, spec, rng) == 0);
    // No draws consumed.
    CHECK(rng == Rng(1));
}

TEST_CASE("spcm sample at the MOT level") {
    Rng rng(2024);
    const SpcmSpec spec;
    const int n = 10000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(spcm_sample(6.1e5, spec, rng));
    const double mean = sum / n;
    CHECK(std::abs(mean - 6.1e4) < 3.0 * std::sqrt(6.1e4 / n));
}

TEST_CASE("poisson sampler matches the reference implementation") {
    SUBCASE("inversion branch") {
        Rng rng(31337);
        oracle::SplitMix ref{31337};
        for (int i = 0; i < 100; ++i) CHECK(poisson(10.0, rng) == oracle::poisson_small(10.0, ref));
    }
    SUBCASE("normal branch") {
        Rng rng(4242);
        oracle::SplitMix ref{4242};
        for (int i = 0; i < 100; ++i) CHECK(poisson(6.1e4, rng) == oracle::poisson_large(6.1e4, ref));
    }
    SUBCASE("through the detector") {
        Rng rng(5);
        oracle::SplitMix ref{5};
        const SpcmSpec spec;
        for (int i = 0; i < 100; ++i) CHECK(spcm_sample(100.0, spec, rng) == oracle::poisson_small(10.0, ref));
    }
}

TEST_CASE("poisson mean and variance") {
    for (double mean : {1.0, 3.0, 10.0, 29.5, 30.0, 100.0, 1e3, 1e4, 1e5}) {
        CAPTURE(mean);
        Rng rng(static_cast<std::uint64_t>(mean * 1000.0) + 17);
        const int n = 20000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(poisson(mean, rng));
            s += k;
            s2 += k * k;
        }
        const double m = s / n;
        const double var = s2 / n - m * m;
        CHECK(m == doctest::Approx(mean).epsilon(0.05));
        CHECK(var == doctest::Approx(mean).epsilon(0.05));
    }
}

TEST_CASE("spcm invalid rate") {
    Rng rng(0);
    const SpcmSpec spec;
    for (double bad : {-1.0, std::nan(""), static_cast<double>(INFINITY)}) {
        try {
            spcm_sample(bad, spec, rng);
            FAIL("expected invalid-rate");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidRate);
        }
    }
}

TEST_CASE("photodiode voltage") {
    const PhotodiodeSpec spec;
    CHECK(photodiode_voltage(0.0, 6.5e5, spec, 0.78) == 0.0);

    // h c / lambda from CODATA constants, computed here.
    const double e_photon = 6.62607015e-34 * 299792458.0 / 0.78e-6;
    const double expected = 1e6 * 6.5e5 * e_photon * 0.01 * 0.5 * 1e6;
    CHECK(expected == doctest::Approx(8.27e-4).epsilon(0.01));
    CHECK(photodiode_voltage(1e6, 6.5e5, spec, 0.78) == doctest::Approx(expected).epsilon(1e-12));

    PhotodiodeSpec doubled = spec;
    doubled.load_resistance_ohm *= 2.0;
    CHECK(photodiode_voltage(1e6, 6.5e5, doubled, 0.78) ==
          doctest::Approx(2.0 * photodiode_voltage(1e6, 6.5e5, spec, 0.78)).epsilon(1e-15));
    CHECK(photodiode_voltage(3e6, 6.5e5, spec, 0.78) ==
          doctest::Approx(3.0 * photodiode_voltage(1e6, 6.5e5, spec, 0.78)).epsilon(1e-15));

    CHECK_THROWS_AS(photodiode_voltage(-1.0, 6.5e5, spec, 0.78), Error);
}

TEST_CASE("detector spec validation") {
    SpcmSpec s;
    s.quantum_efficiency_eta_D = 1.2;
    CHECK_THROWS_AS(s.validate(), Error);
    s = SpcmSpec{};
    s.gate_time_s = 0.0;
    CHECK_THROWS_AS(s.validate(), Error);
    PhotodiodeSpec p;
    p.collection_fraction = 1.0;
    CHECK_THROWS_AS(p.validate(), Error);
}
