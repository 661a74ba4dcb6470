#include "motprobe/cloud.hpp"

#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "motprobe/error.hpp"
#include "motprobe/units.hpp"

namespace motprobe {

namespace {

constexpr int kRadialOrder = 16;
constexpr int kAzimuthalPoints = 64;
constexpr int kZPanels = 10;
constexpr double kZHalfWindowRadii = 5.0;

using RadialRule = boost::math::quadrature::gauss<double, kRadialOrder>;
using PanelRule = boost::math::quadrature::gauss<double, 20>;

double radii_product(const Vec3& r) { return r.x * r.y * r.z; }

// Gauss-Legendre on [lo, hi] for a callable f.
template <class Rule, class F>
double integrate_fixed(F&& f, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            sum += w[i] * f(mid);
        } else {
            sum += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
        }
    }
    return half * sum;
}

// Integral of exp(-((z - cz)/wz)^2) over cz +- 5 wz, by panels.
double gaussian_z_integral(double wz) {
    const double lo = -kZHalfWindowRadii * wz;
    const double panel = 2.0 * kZHalfWindowRadii * wz / kZPanels;
    double sum = 0.0;
    for (int p = 0; p < kZPanels; ++p) {
        const double a = lo + p * panel;
        sum += integrate_fixed<PanelRule>(
            [wz](double z) {
                const double u = z / wz;
                return std::exp(-u * u);
            },
            a, a + panel);
    }
    return sum;
}

// Integral of density along the line (x, y, z) over the z window.
template <class TransverseWeight>
double shell_integral(const FiberSpec& fiber, TransverseWeight&& line) {
    const double a = fiber.waist_radius_um();
    const double b = a + fiber.interaction_range_um;
    const double dphi = 2.0 * units::pi / kAzimuthalPoints;
    return integrate_fixed<RadialRule>(
        [&](double rho) {
            // Trapezoid in phi: exact to rounding for the smooth periodic
            // integrands here, and symmetric under x -> -x.
            double ring = 0.0;
            for (int k = 0; k < kAzimuthalPoints; ++k) {
                const double phi = k * dphi;
                ring += line(rho * std::cos(phi), rho * std::sin(phi));
            }
            return rho * ring * dphi;
        },
        a, b);
}

}  // namespace

void CloudModel::validate() const {
    for (double v : {center_um.x, center_um.y, center_um.z}) {
        require(std::isfinite(v), ErrorKind::Validation, "cloud.center must be finite");
    }
    for (double v : {radii_um.x, radii_um.y, radii_um.z}) {
        require(std::isfinite(v) && v > 0.0, ErrorKind::Validation, "cloud.radii must be > 0");
    }
    require(std::isfinite(peak_density_per_um3) && peak_density_per_um3 >= 0.0,
            ErrorKind::Validation, "cloud.peak_density must be >= 0");
}

void RegimeParams::validate() const {
    require(std::isfinite(crossover_atoms) && crossover_atoms > 0.0, ErrorKind::Validation,
            "regime.crossover_atoms must be > 0");
    if (constant_density_per_um3) {
        require(std::isfinite(*constant_density_per_um3) && *constant_density_per_um3 > 0.0,
                ErrorKind::Validation, "regime.constant_density must be > 0");
    }
    require(central_density_exponent_alpha >= 0.0 && central_density_exponent_alpha <= 1.0,
            ErrorKind::Validation, "regime.central_density_exponent_alpha must be in [0, 1]");
}

double density_at(const CloudModel& cloud, const Vec3& p) {
    const double ux = (p.x - cloud.center_um.x) / cloud.radii_um.x;
    const double uy = (p.y - cloud.center_um.y) / cloud.radii_um.y;
    const double uz = (p.z - cloud.center_um.z) / cloud.radii_um.z;
    const double r2 = ux * ux + uy * uy + uz * uz;
    switch (cloud.shape) {
        case CloudShape::Gaussian: return cloud.peak_density_per_um3 * std::exp(-r2);
        case CloudShape::FlatTop: return r2 <= 1.0 ? cloud.peak_density_per_um3 : 0.0;
    }
    return 0.0;
}

double effective_volume(const CloudModel& cloud) {
    const double prod = radii_product(cloud.radii_um);
    switch (cloud.shape) {
        case CloudShape::Gaussian: return std::pow(units::pi, 1.5) * prod;
        case CloudShape::FlatTop: return 4.0 * units::pi / 3.0 * prod;
    }
    return 0.0;
}

double total_atoms(const CloudModel& cloud) {
    cloud.validate();
    return cloud.peak_density_per_um3 * effective_volume(cloud);
}

double effective_atom_number(const CloudModel& cloud, const FiberSpec& fiber) {
    require(fiber.interaction_range_um > 0.0, ErrorKind::InvalidGeometry,
            "fiber.interaction_range_um must be > 0");
    require(fiber.waist_diameter_um > 0.0, ErrorKind::InvalidGeometry,
            "fiber.waist_diameter_um must be > 0");
    cloud.validate();
    if (cloud.peak_density_per_um3 == 0.0) {
        return 0.0;
    }
    const Vec3& c = cloud.center_um;
    const Vec3& w = cloud.radii_um;

    if (cloud.shape == CloudShape::Gaussian) {
        // The Gaussian factorizes; the z window integral is shared by every line.
        const double z_integral = gaussian_z_integral(w.z);
        return cloud.peak_density_per_um3 * z_integral *
               shell_integral(fiber, [&](double x, double y) {
                   const double ux = (x - c.x) / w.x;
                   const double uy = (y - c.y) / w.y;
                   return std::exp(-(ux * ux + uy * uy));
               });
    }

    // Flat top: the chord through the ellipsoid is at most 2 wz long, always
    // inside the +-5 wz window.
    return cloud.peak_density_per_um3 *
           shell_integral(fiber, [&](double x, double y) {
               const double ux = (x - c.x) / w.x;
               const double uy = (y - c.y) / w.y;
               const double q = 1.0 - ux * ux - uy * uy;
               return q > 0.0 ? 2.0 * w.z * std::sqrt(q) : 0.0;
           });
}

double constant_density(const RegimeParams& regime, const CloudModel& tmpl) {
    if (regime.constant_density_per_um3) {
        return *regime.constant_density_per_um3;
    }
    CloudModel gaussian = tmpl;
    gaussian.shape = CloudShape::Gaussian;
    return regime.crossover_atoms / effective_volume(gaussian);
}

CloudModel cloud_for_atom_number(double atoms, const RegimeParams& regime,
                                 const CloudModel& tmpl) {
    require(std::isfinite(atoms) && atoms >= 0.0, ErrorKind::InvalidInput,
            "atom number must be finite and >= 0");
    regime.validate();
    tmpl.validate();

    CloudModel out = tmpl;
    if (atoms <= regime.crossover_atoms) {
        out.shape = CloudShape::Gaussian;
        out.peak_density_per_um3 = atoms / effective_volume(out);
        return out;
    }
    const double n_c = constant_density(regime, tmpl);
    out.shape = CloudShape::FlatTop;
    out.peak_density_per_um3 = n_c;
    const double volume = atoms / n_c;
    const double scale =
        std::cbrt(volume / (4.0 * units::pi / 3.0 * radii_product(tmpl.radii_um)));
    out.radii_um = scale * tmpl.radii_um;
    return out;
}

CloudModel translate(const CloudModel& cloud, const Vec3& offset_um) {
    CloudModel out = cloud;
    out.center_um = cloud.center_um + offset_um;
    return out;
}

}  // namespace motprobe
