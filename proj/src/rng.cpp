#include "motprobe/rng.hpp"

#include <cmath>

#include "motprobe/error.hpp"
#include "motprobe/units.hpp"

namespace motprobe {

namespace {

constexpr double kPoissonNormalThreshold = 30.0;
// Guards the sequential search against the cdf stalling just below 1.
constexpr std::uint64_t kInversionCap = 1000;

}  // namespace

double Rng::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() noexcept {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * units::pi * u2);
}

std::uint64_t poisson(double mean, Rng& rng) {
    require(std::isfinite(mean) && mean >= 0.0, ErrorKind::InvalidRate,
            "poisson mean must be finite and >= 0");
    if (mean == 0.0) {
        return 0;
    }
    if (mean < kPoissonNormalThreshold) {
        const double u = rng.uniform();
        std::uint64_t k = 0;
        double p = std::exp(-mean);
        double cdf = p;
        while (u >= cdf && k < kInversionCap) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }
    const double draw = std::floor(mean + std::sqrt(mean) * rng.normal() + 0.5);
    return draw <= 0.0 ? 0 : static_cast<std::uint64_t>(draw);
}

}  // namespace motprobe
