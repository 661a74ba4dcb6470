#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace motprobe {

struct FitParameter {
    std::string name;
    double value = 0.0;
    double std_error = 0.0;
};

struct FitResult {
    std::string model_name;
    std::vector<FitParameter> parameters;
    double residual_norm = 0.0;          // weighted sum of squares
    double initial_residual_norm = 0.0;  // at the initializer
    bool converged = false;
    int iterations = 0;
    Eigen::MatrixXd covariance;

    const FitParameter& parameter(const std::string& name) const;
    double value(const std::string& name) const { return parameter(name).value; }
};

struct FitOptions {
    // Per-sample weights on squared residuals; empty means unit weights.
    std::vector<double> weights;
    // Background-subtracted mode: the offset is held at this value.
    std::optional<double> fixed_offset;
    int max_iterations = 200;
};

// Model families. Parameter order is (offset, amplitude, ...).
//   gaussian: offset + A exp(-((x - c) / w)^2)         -> offset, amplitude, center, one_over_e_radius
//   loading:  offset + A (1 - exp(-t / tau))           -> offset, amplitude, tau
//   decay:    offset + A exp(-t / tau)                 -> offset, amplitude, tau
enum class FitModel { Gaussian, Loading, Decay };

std::string to_string(FitModel model);
FitModel fit_model_from_string(const std::string& name);

double model_value(FitModel model, std::span<const double> params, double x);
// Analytic derivatives with respect to each parameter, same order as params.
void model_gradient(FitModel model, std::span<const double> params, double x,
                    std::span<double> grad);

FitResult fit_gaussian(std::span<const double> xs, std::span<const double> ys,
                       const FitOptions& opts = {});
FitResult fit_loading(std::span<const double> ts, std::span<const double> ys,
                      const FitOptions& opts = {});
FitResult fit_decay(std::span<const double> ts, std::span<const double> ys,
                    const FitOptions& opts = {});
FitResult fit(FitModel model, std::span<const double> xs, std::span<const double> ys,
              const FitOptions& opts = {});

// Full 1/e width of a Gaussian fit.
inline double one_over_e_diameter(const FitResult& r) {
    return 2.0 * r.value("one_over_e_radius");
}

// Weights 1 / max(y * gate, 1): inverse observed counts per gate.
std::vector<double> poisson_weights(std::span<const double> rates, double gate_s);

struct SegmentLevel {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

// Splits samples at change_times: segment k holds t in
// [change_{k-1} + settle, change_k), with the first segment starting at
// ts.front() and the last ending at ts.back(). settle_s drops the transient
// after each change.
std::vector<SegmentLevel> step_levels(std::span<const double> ts, std::span<const double> ys,
                                      std::span<const double> change_times, double settle_s = 0.0);

}  // namespace motprobe
