#include "motprobe/scan.hpp"

#include <algorithm>
#include <cmath>

#include "motprobe/error.hpp"
#include "motprobe/rng.hpp"
#include "motprobe/units.hpp"

namespace motprobe {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

TimeSeries simulate_scan(const CloudModel& cloud, const FiberSpec& fiber, const LaserConfig& laser,
                         const SpcmSpec& spcm, std::span<const double> positions_um,
                         std::uint64_t seed, bool noise) {
    cloud.validate();
    fiber.validate();
    spcm.validate();
    const double gamma_sc = scattering_rate(laser);
    const double background = spcm.dark_ambient_rate_per_s + spcm.repump_scatter_rate_per_s +
                              spcm.cooling_scatter_rate_per_s;
    const Rng root(seed);

    TimeSeries out;
    out.x_name = "position";
    out.x_unit = "mm";
    out.value_name = "spcm_rate";
    out.value_unit = "counts/s";
    for (std::size_t i = 0; i < positions_um.size(); ++i) {
        const double x = positions_um[i];
        require(std::isfinite(x), ErrorKind::InvalidInput, "scan positions must be finite");
        const double n_eff = effective_atom_number(translate(cloud, {x, 0.0, 0.0}), fiber);
        const double expected =
            background + photon_rate({n_eff, gamma_sc, fiber.coupling_eta_f,
                                      spcm.quantum_efficiency_eta_D, fiber.transmission_T});
        double value = expected;
        if (noise) {
            Rng stream = root.split(i);
            value = spcm_sample_rate(expected, spcm, stream);
        }
        out.push_back(units::um_to_mm(x), value);
    }
    out.validate();
    return out;
}

TimeSeries camera_cross_section(const CloudModel& cloud, Axis axis,
                                std::span<const double> positions_um, int bit_depth) {
    cloud.validate();
    require(bit_depth >= 0 && bit_depth <= 32, ErrorKind::InvalidInput,
            "camera bit depth must be in [0, 32]");
    const bool along_x = axis == Axis::X;
    const double center = along_x ? cloud.center_um.x : cloud.center_um.y;
    const double radius = along_x ? cloud.radii_um.x : cloud.radii_um.y;
    const double depth = along_x ? cloud.radii_um.y : cloud.radii_um.x;

    TimeSeries out;
    out.x_name = "position";
    out.x_unit = "mm";
    out.value_name = "column_density";
    out.value_unit = "normalized";
    double peak = 0.0;
    for (double p : positions_um) {
        require(std::isfinite(p), ErrorKind::InvalidInput, "camera positions must be finite");
        const double u = (p - center) / radius;
        double column = 0.0;
        if (cloud.shape == CloudShape::Gaussian) {
            column = cloud.peak_density_per_um3 * depth * std::sqrt(units::pi) * std::exp(-u * u);
        } else if (u * u < 1.0) {
            column = cloud.peak_density_per_um3 * 2.0 * depth * std::sqrt(1.0 - u * u);
        }
        peak = std::max(peak, column);
        out.push_back(units::um_to_mm(p), column);
    }
    if (peak > 0.0) {
        const double levels = bit_depth > 0 ? std::ldexp(1.0, bit_depth) - 1.0 : 0.0;
        for (double& v : out.values) {
            v /= peak;
            if (levels > 0.0) v = std::round(v * levels) / levels;
        }
    }
    out.validate();
    return out;
}

}  // namespace motprobe
