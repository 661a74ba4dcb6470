#include "motprobe/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "motprobe/error.hpp"

namespace motprobe {

namespace {

constexpr double kInitialDamping = 1e-3;
constexpr double kDampingFactor = 10.0;
constexpr double kParamTolerance = 1e-10;
constexpr double kCostTolerance = 1e-12;
// A fit whose weighted residual is this small relative to sum(w y^2) is exact.
constexpr double kExactFit = 1e-30;

struct ModelInfo {
    std::vector<std::string> names;
    std::size_t min_points;
};

ModelInfo info(FitModel model) {
    switch (model) {
        case FitModel::Gaussian: return {{"offset", "amplitude", "center", "one_over_e_radius"}, 5};
        case FitModel::Loading: return {{"offset", "amplitude", "tau"}, 4};
        case FitModel::Decay: return {{"offset", "amplitude", "tau"}, 4};
    }
    fail(ErrorKind::InvalidInput, "unknown fit model");
}

// Width and time constant must stay positive.
bool admissible(FitModel model, const std::vector<double>& p) {
    for (double v : p) {
        if (!std::isfinite(v)) return false;
    }
    return model == FitModel::Gaussian ? p[3] > 0.0 : p[2] > 0.0;
}

double weight_at(const FitOptions& opts, std::size_t i) {
    return opts.weights.empty() ? 1.0 : opts.weights[i];
}

double cost(FitModel model, const std::vector<double>& p, std::span<const double> xs,
            std::span<const double> ys, const FitOptions& opts) {
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - model_value(model, p, xs[i]);
        sum += weight_at(opts, i) * r * r;
    }
    return sum;
}

void check_inputs(FitModel model, std::span<const double> xs, std::span<const double> ys,
                  const FitOptions& opts) {
    const auto min_points = info(model).min_points;
    require(xs.size() == ys.size(), ErrorKind::InvalidInput, "fit: xs and ys differ in length");
    require(xs.size() >= min_points, ErrorKind::InvalidInput,
            "fit: at least " + std::to_string(min_points) + " points required");
    require(opts.weights.empty() || opts.weights.size() == xs.size(), ErrorKind::InvalidInput,
            "fit: weights must match the data length");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(std::isfinite(xs[i]) && std::isfinite(ys[i]), ErrorKind::InvalidInput,
                "fit: data must be finite");
        require(weight_at(opts, i) >= 0.0 && std::isfinite(weight_at(opts, i)),
                ErrorKind::InvalidInput, "fit: weights must be finite and >= 0");
    }
    if (model == FitModel::Gaussian) {
        std::vector<double> sorted(xs.begin(), xs.end());
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                ErrorKind::InvalidInput, "fit: xs must be distinct");
    } else {
        for (std::size_t i = 1; i < xs.size(); ++i) {
            require(xs[i] > xs[i - 1], ErrorKind::InvalidInput, "fit: ts must be increasing");
        }
    }
    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    const double scale = std::max(std::abs(*lo), std::abs(*hi));
    require(*hi - *lo > 1e-14 * scale, ErrorKind::DegenerateData,
            "fit: data are constant, amplitude is undetermined");
}

std::vector<double> initial_gaussian(std::span<const double> xs, std::span<const double> ys,
                                     const FitOptions& opts) {
    const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
    const double offset = opts.fixed_offset.value_or(*lo_it);
    const double amplitude = *hi_it - offset;
    const double center = xs[static_cast<std::size_t>(hi_it - ys.begin())];
    const double half = offset + 0.5 * amplitude;
    double left = center;
    double right = center;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] >= half) {
            left = std::min(left, xs[i]);
            right = std::max(right, xs[i]);
        }
    }
    double width = 0.5 * (right - left) / std::sqrt(std::log(2.0));
    if (!(width > 0.0)) {
        double span = std::abs(xs.back() - xs.front());
        width = span > 0.0 ? span / static_cast<double>(xs.size()) : 1.0;
    }
    return {offset, amplitude, center, width};
}

std::vector<double> initial_loading(std::span<const double> ts, std::span<const double> ys,
                                    const FitOptions& opts) {
    const double offset = opts.fixed_offset.value_or(ys.front());
    const double amplitude = ys.back() - offset;
    const double target = offset + (1.0 - std::exp(-1.0)) * amplitude;
    double tau = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const bool reached = amplitude >= 0.0 ? ys[i] >= target : ys[i] <= target;
        if (reached) {
            tau = ts[i];
            break;
        }
    }
    if (!(tau > 0.0)) tau = (ts.back() - ts.front()) / static_cast<double>(ts.size());
    if (!(tau > 0.0)) tau = 1.0;
    return {offset, amplitude, tau};
}

std::vector<double> initial_decay(std::span<const double> ts, std::span<const double> ys,
                                  const FitOptions& opts) {
    const auto [lo_it, hi_it] = std::minmax_element(ys.begin(), ys.end());
    const double offset = opts.fixed_offset.value_or(*lo_it - 0.1 * (*hi_it - *lo_it));

    // Weighted log-linear regression of ln(y - offset) = ln A - t / tau,
    // weights (y - offset)^2 so the noisy tail does not dominate.
    double sw = 0.0, st = 0.0, sz = 0.0, stt = 0.0, stz = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double d = ys[i] - offset;
        if (!(d > 0.0)) continue;
        const double w = d * d * weight_at(opts, i);
        const double z = std::log(d);
        sw += w;
        st += w * ts[i];
        sz += w * z;
        stt += w * ts[i] * ts[i];
        stz += w * ts[i] * z;
    }
    require(sw > 0.0, ErrorKind::InvalidData,
            "fit_decay: no background-subtracted value is positive");
    const double denom = sw * stt - st * st;
    double slope = denom > 0.0 ? (sw * stz - st * sz) / denom : 0.0;
    const double span = ts.back() - ts.front();
    double tau = slope < 0.0 ? -1.0 / slope : span;
    if (!(tau > 0.0) || !std::isfinite(tau)) tau = span > 0.0 ? span : 1.0;
    const double intercept = (sz - slope * st) / sw;
    double amplitude = std::exp(intercept);
    if (slope >= 0.0) amplitude = *hi_it - offset;
    return {offset, amplitude, tau};
}

FitResult levenberg_marquardt(FitModel model, std::vector<double> p, std::span<const double> xs,
                              std::span<const double> ys, const FitOptions& opts) {
    const ModelInfo mi = info(model);
    const std::size_t m = p.size();
    const std::size_t first_free = opts.fixed_offset ? 1 : 0;
    const auto nfree = static_cast<Eigen::Index>(m - first_free);
    const std::size_t n = xs.size();

    double scale2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale2 += weight_at(opts, i) * ys[i] * ys[i];

    FitResult result;
    result.model_name = to_string(model);
    double current = cost(model, p, xs, ys, opts);
    result.initial_residual_norm = current;

    Eigen::MatrixXd jtj(nfree, nfree);
    Eigen::VectorXd jtr(nfree);
    std::vector<double> grad(m);
    double damping = kInitialDamping;
    bool converged = current <= kExactFit * scale2;
    int iterations = 0;

    const auto build_normal_equations = [&] {
        jtj.setZero();
        jtr.setZero();
        for (std::size_t i = 0; i < n; ++i) {
            model_gradient(model, p, xs[i], grad);
            const double w = weight_at(opts, i);
            const double r = ys[i] - model_value(model, p, xs[i]);
            for (Eigen::Index a = 0; a < nfree; ++a) {
                const double ga = grad[first_free + static_cast<std::size_t>(a)];
                jtr(a) += w * ga * r;
                for (Eigen::Index b = 0; b <= a; ++b) {
                    jtj(a, b) += w * ga * grad[first_free + static_cast<std::size_t>(b)];
                }
            }
        }
        jtj.triangularView<Eigen::StrictlyUpper>() = jtj.transpose();
    };

    build_normal_equations();
    while (!converged) {
        if (iterations >= opts.max_iterations) {
            fail(ErrorKind::NoConvergence,
                 result.model_name + " fit did not converge in " +
                     std::to_string(opts.max_iterations) + " iterations");
        }
        ++iterations;

        Eigen::MatrixXd damped = jtj;
        for (Eigen::Index a = 0; a < nfree; ++a) {
            const double d = jtj(a, a) > 0.0 ? jtj(a, a) : 1.0;
            damped(a, a) += damping * d;
        }
        const Eigen::VectorXd step = damped.ldlt().solve(jtr);

        std::vector<double> trial = p;
        double rel_step = 0.0;
        for (Eigen::Index a = 0; a < nfree; ++a) {
            const std::size_t j = first_free + static_cast<std::size_t>(a);
            trial[j] += step(a);
            const double ref = std::max(std::abs(p[j]), std::numeric_limits<double>::min());
            rel_step = std::max(rel_step, std::abs(step(a)) / ref);
        }

        const bool ok = step.allFinite() && admissible(model, trial);
        const double trial_cost = ok ? cost(model, trial, xs, ys, opts)
                                     : std::numeric_limits<double>::infinity();
        if (trial_cost < current) {
            const double improvement = (current - trial_cost) / current;
            p = std::move(trial);
            current = trial_cost;
            damping = std::max(damping / kDampingFactor, 1e-15);
            build_normal_equations();
            converged = rel_step < kParamTolerance || improvement < kCostTolerance ||
                        current <= kExactFit * scale2;
        } else {
            damping *= kDampingFactor;
            // At the optimum every step is rejected; the damped step shrinks
            // until it is below the parameter tolerance.
            converged = ok && rel_step < kParamTolerance;
            if (damping > 1e30) {
                fail(ErrorKind::NoConvergence, result.model_name + " fit stalled");
            }
        }
    }

    result.converged = true;
    result.iterations = iterations;
    result.residual_norm = current;

    // Covariance of the free parameters scaled by the residual variance.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                                static_cast<Eigen::Index>(m));
    const auto dof = static_cast<double>(n) - static_cast<double>(nfree);
    if (dof > 0.0) {
        const Eigen::MatrixXd inv =
            jtj.ldlt().solve(Eigen::MatrixXd::Identity(nfree, nfree));
        const auto off = static_cast<Eigen::Index>(first_free);
        cov.block(off, off, nfree, nfree) = inv * (current / dof);
        cov = 0.5 * (cov + cov.transpose());
    }
    result.covariance = cov;
    for (std::size_t j = 0; j < m; ++j) {
        const double var = cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
        result.parameters.push_back({mi.names[j], p[j], std::sqrt(std::max(var, 0.0))});
    }
    return result;
}

}  // namespace

const FitParameter& FitResult::parameter(const std::string& name) const {
    for (const auto& p : parameters) {
        if (p.name == name) return p;
    }
    fail(ErrorKind::InvalidInput, "fit result has no parameter '" + name + "'");
}

std::string to_string(FitModel model) {
    switch (model) {
        case FitModel::Gaussian: return "gaussian";
        case FitModel::Loading: return "loading";
        case FitModel::Decay: return "decay";
    }
    return "unknown";
}

FitModel fit_model_from_string(const std::string& name) {
    if (name == "gaussian") return FitModel::Gaussian;
    if (name == "loading") return FitModel::Loading;
    if (name == "decay") return FitModel::Decay;
    fail(ErrorKind::InvalidInput, "unknown fit model '" + name + "'");
}

double model_value(FitModel model, std::span<const double> p, double x) {
    switch (model) {
        case FitModel::Gaussian: {
            const double u = (x - p[2]) / p[3];
            return p[0] + p[1] * std::exp(-u * u);
        }
        case FitModel::Loading: return p[0] + p[1] * (1.0 - std::exp(-x / p[2]));
        case FitModel::Decay: return p[0] + p[1] * std::exp(-x / p[2]);
    }
    return 0.0;
}

void model_gradient(FitModel model, std::span<const double> p, double x, std::span<double> g) {
    g[0] = 1.0;
    switch (model) {
        case FitModel::Gaussian: {
            const double u = (x - p[2]) / p[3];
            const double e = std::exp(-u * u);
            g[1] = e;
            g[2] = p[1] * e * 2.0 * u / p[3];
            g[3] = p[1] * e * 2.0 * u * u / p[3];
            return;
        }
        case FitModel::Loading: {
            const double e = std::exp(-x / p[2]);
            g[1] = 1.0 - e;
            g[2] = -p[1] * e * x / (p[2] * p[2]);
            return;
        }
        case FitModel::Decay: {
            const double e = std::exp(-x / p[2]);
            g[1] = e;
            g[2] = p[1] * e * x / (p[2] * p[2]);
            return;
        }
    }
}

FitResult fit(FitModel model, std::span<const double> xs, std::span<const double> ys,
              const FitOptions& opts) {
    check_inputs(model, xs, ys, opts);
    std::vector<double> p;
    switch (model) {
        case FitModel::Gaussian: p = initial_gaussian(xs, ys, opts); break;
        case FitModel::Loading: p = initial_loading(xs, ys, opts); break;
        case FitModel::Decay: p = initial_decay(xs, ys, opts); break;
    }
    require(p[1] != 0.0, ErrorKind::DegenerateData, "fit: zero initial amplitude");
    return levenberg_marquardt(model, std::move(p), xs, ys, opts);
}

FitResult fit_gaussian(std::span<const double> xs, std::span<const double> ys,
                       const FitOptions& opts) {
    return fit(FitModel::Gaussian, xs, ys, opts);
}

FitResult fit_loading(std::span<const double> ts, std::span<const double> ys,
                      const FitOptions& opts) {
    return fit(FitModel::Loading, ts, ys, opts);
}

FitResult fit_decay(std::span<const double> ts, std::span<const double> ys,
                    const FitOptions& opts) {
    return fit(FitModel::Decay, ts, ys, opts);
}

std::vector<double> poisson_weights(std::span<const double> rates, double gate_s) {
    std::vector<double> w(rates.size());
    std::transform(rates.begin(), rates.end(), w.begin(),
                   [gate_s](double y) { return 1.0 / std::max(y * gate_s, 1.0); });
    return w;
}

std::vector<SegmentLevel> step_levels(std::span<const double> ts, std::span<const double> ys,
                                      std::span<const double> change_times, double settle_s) {
    require(ts.size() == ys.size(), ErrorKind::InvalidInput,
            "step_levels: ts and ys differ in length");
    require(!ts.empty(), ErrorKind::EmptySegment, "step_levels: no samples");
    require(settle_s >= 0.0, ErrorKind::InvalidInput, "step_levels: settle must be >= 0");
    for (std::size_t k = 0; k < change_times.size(); ++k) {
        require(change_times[k] >= ts.front() && change_times[k] <= ts.back(),
                ErrorKind::InvalidInput, "step_levels: change times must lie within the data");
        if (k > 0) {
            require(change_times[k] > change_times[k - 1], ErrorKind::InvalidInput,
                    "step_levels: change times must be increasing");
        }
    }

    const std::size_t nseg = change_times.size() + 1;
    std::vector<std::vector<double>> members(nseg);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto seg = static_cast<std::size_t>(
            std::upper_bound(change_times.begin(), change_times.end(), ts[i]) -
            change_times.begin());
        if (seg > 0 && ts[i] < change_times[seg - 1] + settle_s) continue;
        members[seg].push_back(ys[i]);
    }

    std::vector<SegmentLevel> out;
    out.reserve(nseg);
    for (std::size_t s = 0; s < nseg; ++s) {
        const auto& v = members[s];
        require(!v.empty(), ErrorKind::EmptySegment,
                "step_levels: segment " + std::to_string(s) + " has no samples");
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0.0;
        for (double y : v) ss += (y - mean) * (y - mean);
        const double n = static_cast<double>(v.size());
        const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        out.push_back({mean, se, v.size()});
    }
    return out;
}

}  // namespace motprobe
