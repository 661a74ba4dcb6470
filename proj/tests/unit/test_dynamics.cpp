#include <doctest.h>

#include <cmath>

#include "motprobe/config.hpp"
#include "motprobe/dynamics.hpp"
#include "motprobe/error.hpp"
#include "motprobe/physics.hpp"

using namespace motprobe;

TEST_CASE("loading and decay curves") {
    const TrapDynamics load{1e6, 0.43, 0.0};
    CHECK(loading_curve(load, 0.0) == 0.0);
    CHECK(loading_curve(load, 0.43) == doctest::Approx(1e6 * 0.43 * (1.0 - std::exp(-1.0))));
    CHECK(loading_curve(load, 20.0 * 0.43) == doctest::Approx(4.3e5).epsilon(1e-8));

    const TrapDynamics start_full{1e6, 0.43, 4.3e5};
    for (double t : {0.0, 0.1, 1.0, 10.0}) CHECK(loading_curve(start_full, t) == doctest::Approx(4.3e5));

    const TrapDynamics dec{0.0, 9.4, 5e5};
    CHECK(decay_curve(dec, 0.0) == 5e5);
    CHECK(decay_curve(dec, 9.4) == doctest::Approx(5e5 / std::exp(1.0)).epsilon(1e-14));
    CHECK(decay_curve(dec, 20.0 * 9.4) < 1e-8 * 5e5);

    CHECK_THROWS_AS(loading_curve(load, -1.0), Error);
    CHECK_THROWS_AS(decay_curve(dec, -0.1), Error);
}

TEST_CASE("curves are monotone") {
    const TrapDynamics load{2e5, 1.3, 1e3};
    const TrapDynamics dec{0.0, 1.3, 1e5};
    double prev_load = -1.0;
    double prev_dec = 2e5;
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.05 * i;
        const double l = loading_curve(load, t);
        const double d = decay_curve(dec, t);
        CHECK(l >= prev_load);
        CHECK(d <= prev_dec);
        prev_load = l;
        prev_dec = d;
    }
}

TEST_CASE("tnf visible signal across the crossover") {
    const RegimeParams regime;
    const CloudModel tmpl;
    const FiberSpec fiber;
    const double nx = regime.crossover_atoms;
    const double ex = tnf_visible_signal(nx, regime, tmpl, fiber);

    CHECK(tnf_visible_signal(0.0, regime, tmpl, fiber) == 0.0);
    // Linear in N below the crossover.
    CHECK(tnf_visible_signal(0.25 * nx, regime, tmpl, fiber) ==
          doctest::Approx(0.25 * ex).epsilon(1e-9));
    // Continuous at the crossover.
    CHECK(tnf_visible_signal(nx * (1.0 + 1e-9), regime, tmpl, fiber) ==
          doctest::Approx(ex).epsilon(1e-6));
    // Power law above it: 10^0.723 = 5.28.
    CHECK(tnf_visible_signal(10.0 * nx, regime, tmpl, fiber) ==
          doctest::Approx(5.28 * ex).epsilon(1e-3));

    RegimeParams linear = regime;
    linear.central_density_exponent_alpha = 1.0;
    CHECK(tnf_visible_signal(10.0 * nx, linear, tmpl, fiber) ==
          doctest::Approx(10.0 * ex).epsilon(1e-12));

    CHECK_THROWS_AS(tnf_visible_signal(-1.0, regime, tmpl, fiber), Error);
}

TEST_CASE("apparent decay time above the crossover is tau / alpha") {
    const RegimeParams regime;
    const CloudModel tmpl;
    const FiberSpec fiber;
    const TrapDynamics dec{0.0, 9.4, 1e7};
    const double s0 = tnf_visible_signal(decay_curve(dec, 0.0), regime, tmpl, fiber);
    // Bisect for the 1/e point of the fiber signal.
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double s = tnf_visible_signal(decay_curve(dec, mid), regime, tmpl, fiber);
        (s > s0 / std::exp(1.0) ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(13.0).epsilon(0.02));
    CHECK(lo == doctest::Approx(9.4 / 0.723).epsilon(1e-9));
}

TEST_CASE("step schedule layout") {
    const Schedule s = step_schedule(10.0, 0.1);
    CHECK(s.duration_s == 70.0);
    CHECK(s.initial.dispenser);
    CHECK_FALSE(s.initial.cooling);
    const auto times = step_change_times(s);
    REQUIRE(times.size() == 6);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(times[i] == 10.0 * (i + 1));

    SubsystemState st = s.initial;
    for (std::size_t i = 0; i < 3; ++i) st.apply(s.events[i]);
    CHECK(st.loads());
    st.apply(s.events[3]);
    CHECK_FALSE(st.traps());
}

TEST_CASE("noise-free step trace levels") {
    const ExperimentConfig cfg;
    const Schedule s = step_schedule(10.0, 0.1);
    const ScheduleTrace tr = simulate_schedule(s, cfg, 1, false);
    REQUIRE(tr.spcm.size() == 701);
    const auto at = [&](double t) { return tr.spcm.values[static_cast<std::size_t>(std::lround(t / 0.1))]; };

    CHECK(at(5.0) == 1.5e5);
    CHECK(at(15.0) == 1.7e5);
    CHECK(at(25.0) == 2.1e5);
    CHECK(at(39.9) == doctest::Approx(6.1e5).epsilon(1e-9));
    CHECK(at(45.0) == 2.1e5);
    CHECK(at(55.0) == 1.7e5);
    CHECK(at(65.0) == 1.5e5);
    CHECK(tr.atoms.values[250] == 0.0);
    // Loading onset is immediate at the B-field switch.
    CHECK(at(30.0) == 2.1e5);
    CHECK(at(30.1) > 2.1e5);
    // Photodiode sees only the background without trapped atoms.
    CHECK(tr.photodiode.values[250] == cfg.photodiode.background_volts);
    CHECK(tr.photodiode.values[399] > 10.0 * cfg.photodiode.background_volts);
}

TEST_CASE("schedule determinism and noise") {
    const ExperimentConfig cfg;
    const Schedule s = step_schedule(2.0, 0.1);
    const auto a = simulate_schedule(s, cfg, 99, true);
    const auto b = simulate_schedule(s, cfg, 99, true);
    const auto c = simulate_schedule(s, cfg, 100, true);
    CHECK(a.spcm.values == b.spcm.values);
    CHECK(a.spcm.values != c.spcm.values);
    CHECK(a.expected_spcm.values == c.expected_spcm.values);
    // Rates are whole counts per gate.
    for (double v : a.spcm.values) {
        const double counts = v * cfg.spcm.gate_time_s;
        CHECK(counts == doctest::Approx(std::round(counts)).epsilon(1e-12));
    }
}

TEST_CASE("decay from a preloaded trap") {
    ExperimentConfig cfg;
    Schedule s;
    s.initial = {true, true, true, false};
    s.initial_atoms = 1e4;
    s.duration_s = 9.4;
    s.sample_interval_s = 0.1;
    const auto tr = simulate_schedule(s, cfg, 0, false);
    CHECK(tr.atoms.values.front() == 1e4);
    CHECK(tr.atoms.values.back() == doctest::Approx(1e4 / std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("invalid schedules") {
    const ExperimentConfig cfg;
    Schedule s = step_schedule(1.0, 0.1);
    s.events[2].time_s = 0.5;  // out of order
    try {
        simulate_schedule(s, cfg, 0, false);
        FAIL("expected invalid-schedule");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidSchedule);
    }
    Schedule neg = step_schedule(1.0, 0.1);
    neg.sample_interval_s = 0.0;
    CHECK_THROWS_AS(simulate_schedule(neg, cfg, 0, false), Error);
    Schedule late = step_schedule(1.0, 0.1);
    late.events.push_back({8.0, Subsystem::Dispenser, false});
    CHECK_THROWS_AS(simulate_schedule(late, cfg, 0, false), Error);
}
