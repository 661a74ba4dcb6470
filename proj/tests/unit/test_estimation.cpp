#include <doctest.h>

#include <cmath>
#include <random>

#include "motprobe/error.hpp"
#include "motprobe/estimation.hpp"
#include "motprobe/rng.hpp"
#include "motprobe/scan.hpp"
#include "oracles.hpp"

using namespace motprobe;

namespace {

oracle::Family family(FitModel m) {
    switch (m) {
        case FitModel::Gaussian: return oracle::Family::Gaussian;
        case FitModel::Loading: return oracle::Family::Loading;
        case FitModel::Decay: return oracle::Family::Decay;
    }
    return oracle::Family::Gaussian;
}

std::vector<double> sample(FitModel m, const std::vector<double>& p, const std::vector<double>& xs) {
    std::vector<double> ys;
    for (double x : xs) ys.push_back(model_value(m, p, x));
    return ys;
}

std::vector<double> params_for(FitModel m, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double offset = 1e5 * u(gen);
    const double amp = 1e3 + 1e6 * u(gen);
    if (m == FitModel::Gaussian) return {offset, amp, 2.0 * u(gen) - 1.0, 0.2 + 1.5 * u(gen)};
    return {offset, amp, 0.1 + 20.0 * u(gen)};
}

void check_kind(ErrorKind kind, auto&& fn) {
    try {
        fn();
        FAIL("expected " << to_string(kind));
    } catch (const Error& e) {
        CHECK(e.kind() == kind);
    }
}

}  // namespace

TEST_CASE("gaussian round trip") {
    const auto xs = linspace(-3.25, 3.25, 101);
    const std::vector<double> truth{2.1e5, 4e5, 0.0, 0.65};
    const auto r = fit_gaussian(xs, sample(FitModel::Gaussian, truth, xs));
    CHECK(r.converged);
    CHECK(r.value("offset") == doctest::Approx(2.1e5).epsilon(1e-6));
    CHECK(r.value("amplitude") == doctest::Approx(4e5).epsilon(1e-6));
    CHECK(std::abs(r.value("center")) < 1e-6 * 0.65);
    CHECK(r.value("one_over_e_radius") == doctest::Approx(0.65).epsilon(1e-6));
    CHECK(one_over_e_diameter(r) == doctest::Approx(1.3).epsilon(1e-6));
}

TEST_CASE("loading and decay round trips") {
    const auto ts = linspace(0.0, 5.0, 51);
    const auto l = fit_loading(ts, sample(FitModel::Loading, {2.1e5, 4e5, 0.43}, ts));
    CHECK(l.value("tau") == doctest::Approx(0.43).epsilon(1e-6));
    CHECK(l.value("amplitude") == doctest::Approx(4e5).epsilon(1e-6));

    const auto td = linspace(0.0, 20.0, 201);
    const auto d = fit_decay(td, sample(FitModel::Decay, {1e-4, 5e-2, 9.4}, td));
    CHECK(d.value("tau") == doctest::Approx(9.4).epsilon(1e-6));
    CHECK(d.value("offset") == doctest::Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("exact fits on noiseless data from each family") {
    std::mt19937_64 gen(11);
    for (FitModel m : {FitModel::Gaussian, FitModel::Loading, FitModel::Decay}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto p = params_for(m, gen);
            const auto xs = m == FitModel::Gaussian ? linspace(-4.0, 4.0, 81)
                                                    : linspace(0.0, 4.0 * p[2], 81);
            const auto ys = sample(m, p, xs);
            double scale2 = 0.0;
            for (double y : ys) scale2 += y * y;
            const auto r = fit(m, xs, ys);
            CAPTURE(to_string(m));
            CAPTURE(trial);
            CHECK(r.residual_norm < 1e-18 * scale2);
            CHECK(r.parameters.back().value == doctest::Approx(p.back()).epsilon(1e-6));
            CHECK(r.iterations <= 200);
        }
    }
}

TEST_CASE("analytic gradients match central differences") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (FitModel m : {FitModel::Gaussian, FitModel::Loading, FitModel::Decay}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto p = params_for(m, gen);
            const double x = m == FitModel::Gaussian ? 3.0 * u(gen) - 1.5 : 2.0 * p[2] * u(gen);
            std::vector<double> g(p.size());
            model_gradient(m, p, x, g);
            for (std::size_t j = 0; j < p.size(); ++j) {
                const double fd = oracle::family_derivative(family(m), p, x, j);
                CAPTURE(to_string(m));
                CAPTURE(j);
                const double scale = std::max(std::abs(g[j]), std::abs(fd));
                CHECK(std::abs(g[j] - fd) <= 1e-5 * scale);
            }
        }
    }
}

TEST_CASE("weighted fit never increases the weighted residual") {
    const auto ts = linspace(0.0, 5.0, 51);
    const auto clean = sample(FitModel::Loading, {2.1e5, 4e5, 0.43}, ts);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        std::vector<double> ys;
        for (double y : clean) ys.push_back(static_cast<double>(poisson(y * 0.1, rng)) / 0.1);
        FitOptions opts;
        opts.weights = poisson_weights(ys, 0.1);
        const auto r = fit_loading(ts, ys, opts);
        CHECK(r.residual_norm <= r.initial_residual_norm);
        CHECK(r.value("tau") == doctest::Approx(0.43).epsilon(0.1));
        for (const auto& p : r.parameters) CHECK(p.std_error >= 0.0);
        CHECK(r.covariance.isApprox(r.covariance.transpose()));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.covariance);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
    }
}

TEST_CASE("poisson weights") {
    const std::vector<double> rates{0.0, 5.0, 100.0, 2e5};
    const auto w = poisson_weights(rates, 0.1);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 1.0);
    CHECK(w[2] == doctest::Approx(0.1));
    CHECK(w[3] == doctest::Approx(1.0 / 2e4));
}

TEST_CASE("tau is invariant under y scaling and time shifts") {
    const auto ts = linspace(0.0, 20.0, 101);
    Rng rng(3);
    std::vector<double> ys;
    for (double t : ts) ys.push_back(5e3 + 2e4 * std::exp(-t / 9.4) + 300.0 * rng.normal());
    const double tau = fit_decay(ts, ys).value("tau");
    for (double k : {1e-3, 0.5, 7.0, 1e4}) {
        std::vector<double> scaled;
        for (double y : ys) scaled.push_back(k * y);
        CHECK(fit_decay(ts, scaled).value("tau") == doctest::Approx(tau).epsilon(1e-8));
    }
    for (double t0 : {0.5, 3.0, 10.0}) {
        std::vector<double> shifted;
        for (double t : ts) shifted.push_back(t + t0);
        const auto r = fit_decay(shifted, ys);
        CHECK(r.value("tau") == doctest::Approx(tau).epsilon(1e-8));
    }
}

TEST_CASE("background-subtracted mode holds the offset") {
    const auto ts = linspace(0.0, 20.0, 101);
    const auto ys = sample(FitModel::Decay, {1.5e5, 3e5, 13.0}, ts);
    FitOptions opts;
    opts.fixed_offset = 1.5e5;
    const auto r = fit_decay(ts, ys, opts);
    CHECK(r.value("offset") == 1.5e5);
    CHECK(r.parameter("offset").std_error == 0.0);
    CHECK(r.value("tau") == doctest::Approx(13.0).epsilon(1e-6));
}

TEST_CASE("degenerate and invalid data") {
    const auto xs = linspace(-1.0, 1.0, 21);
    const std::vector<double> flat(xs.size(), 7.0);
    check_kind(ErrorKind::DegenerateData, [&] { fit_gaussian(xs, flat); });
    check_kind(ErrorKind::DegenerateData, [&] { fit_loading(linspace(0, 1, 21), flat); });
    check_kind(ErrorKind::InvalidInput, [&] { fit_gaussian(std::vector<double>{0, 1, 2}, std::vector<double>{1, 2, 1}); });

    // Everything at or below the held offset.
    const auto ts = linspace(0.0, 1.0, 11);
    std::vector<double> below;
    for (double t : ts) below.push_back(1.0 - t);
    FitOptions opts;
    opts.fixed_offset = 5.0;
    check_kind(ErrorKind::InvalidData, [&] { fit_decay(ts, below, opts); });

    std::vector<double> backwards = ts;
    std::swap(backwards[2], backwards[3]);
    check_kind(ErrorKind::InvalidInput, [&] { fit_loading(backwards, below); });
}

TEST_CASE("no convergence") {
    const auto ts = linspace(0.0, 5.0, 51);
    Rng rng(8);
    std::vector<double> ys;
    for (double t : ts) ys.push_back(2.1e5 + 4e5 * (1.0 - std::exp(-t / 0.43)) + 3e3 * rng.normal());
    FitOptions opts;
    opts.max_iterations = 1;
    check_kind(ErrorKind::NoConvergence, [&] { fit_loading(ts, ys, opts); });
}

TEST_CASE("fit model names") {
    for (FitModel m : {FitModel::Gaussian, FitModel::Loading, FitModel::Decay}) {
        CHECK(fit_model_from_string(to_string(m)) == m);
    }
    CHECK_THROWS_AS(fit_model_from_string("lorentzian"), Error);
}

TEST_CASE("step levels") {
    SUBCASE("two known levels") {
        const std::vector<double> ts{0, 1, 2, 3, 4, 5};
        const std::vector<double> ys{3, 3, 3, 8, 8, 8};
        const std::vector<double> change{3.0};
        const auto lv = step_levels(ts, ys, change);
        REQUIRE(lv.size() == 2);
        CHECK(lv[0].mean == 3.0);
        CHECK(lv[1].mean == 8.0);
        CHECK(lv[0].std_error == 0.0);
        CHECK(lv[1].count == 3);
    }
    SUBCASE("constant poisson series") {
        Rng rng(21);
        const auto ts = linspace(0.0, 99.9, 1000);
        std::vector<double> ys;
        for (std::size_t i = 0; i < ts.size(); ++i) ys.push_back(static_cast<double>(poisson(1e3, rng)));
        const std::vector<double> change{25.0, 50.0, 75.0};
        const auto lv = step_levels(ts, ys, change);
        REQUIRE(lv.size() == 4);
        for (const auto& l : lv) {
            CHECK(std::abs(l.mean - 1e3) < 4.0 * l.std_error);
            // Poisson standard error sqrt(mean / n).
            CHECK(l.std_error == doctest::Approx(std::sqrt(1e3 / 250.0)).epsilon(0.15));
        }
    }
    SUBCASE("settle window drops the transient") {
        const std::vector<double> ts{0, 1, 2, 3, 4, 5, 6};
        const std::vector<double> ys{1, 1, 1, 50, 9, 9, 9};
        const std::vector<double> change{3.0};
        CHECK(step_levels(ts, ys, change, 1.0)[1].mean == 9.0);
    }
    SUBCASE("empty segment") {
        const std::vector<double> ts{0, 1, 2, 3};
        const std::vector<double> ys{1, 1, 2, 2};
        const std::vector<double> change{1.2, 1.5};
        check_kind(ErrorKind::EmptySegment, [&] { step_levels(ts, ys, change); });
    }
    SUBCASE("change times outside the samples") {
        const std::vector<double> ts{0, 1, 2, 3};
        const std::vector<double> ys{1, 1, 2, 2};
        const std::vector<double> change{5.0};
        CHECK_THROWS_AS(step_levels(ts, ys, change), Error);
    }
}
