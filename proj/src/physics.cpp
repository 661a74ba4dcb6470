#include "motprobe/physics.hpp"

#include <cmath>
#include <string>

#include "motprobe/error.hpp"
#include "motprobe/units.hpp"

namespace motprobe {

namespace {

void check(bool cond, const std::string& what) {
    require(cond, ErrorKind::Validation, what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::InvalidGeometry: return "invalid-geometry";
        case ErrorKind::InvalidSchedule: return "invalid-schedule";
        case ErrorKind::InvalidRate: return "invalid-rate";
        case ErrorKind::DegenerateData: return "degenerate-data";
        case ErrorKind::InvalidData: return "invalid-data";
        case ErrorKind::NoConvergence: return "no-convergence";
        case ErrorKind::EmptySegment: return "empty-segment";
        case ErrorKind::ConfigParse: return "config-parse";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

void LaserConfig::validate() const {
    check(finite(detuning_MHz), "laser.detuning_MHz must be finite");
    check(finite(beam_intensity_mW_cm2) && beam_intensity_mW_cm2 >= 0.0,
          "laser.beam_intensity_mW_cm2 must be >= 0");
    check(n_beams >= 1, "laser.n_beams must be >= 1");
    check(finite(linewidth_MHz) && linewidth_MHz > 0.0, "laser.linewidth_MHz must be > 0");
    check(finite(isat_eff_mW_cm2) && isat_eff_mW_cm2 > 0.0,
          "laser.isat_eff_mW_cm2 must be > 0");
    check(finite(wavelength_um) && wavelength_um > 0.0, "laser.wavelength_um must be > 0");
}

void FiberSpec::validate() const {
    check(finite(waist_diameter_um) && waist_diameter_um > 0.0,
          "fiber.waist_diameter_um must be > 0");
    check(finite(interaction_range_um) && interaction_range_um > 0.0,
          "fiber.interaction_range_um must be > 0");
    check(finite(transmission_T) && transmission_T > 0.0, "fiber.transmission_T must be > 0");
    check(transmission_T <= 1.0, "fiber.transmission_T must be <= 1");
    check(finite(coupling_eta_f) && coupling_eta_f > 0.0, "fiber.coupling_eta_f must be > 0");
    check(coupling_eta_f < 1.0, "fiber.coupling_eta_f must be < 1");
}

void PhotonBudget::validate() const {
    for (double v : {n_eff, gamma_sc_per_s, eta_f, eta_D, transmission_T}) {
        require(finite(v) && v >= 0.0, ErrorKind::InvalidInput,
                "photon budget terms must be finite and >= 0");
    }
    for (double v : {eta_f, eta_D, transmission_T}) {
        require(v <= 1.0, ErrorKind::InvalidInput, "photon budget efficiencies must be <= 1");
    }
}

double natural_decay_rate(const LaserConfig& laser) {
    return 2.0 * units::pi * laser.linewidth_MHz * units::hz_per_mhz;
}

double saturation_parameter(const LaserConfig& laser) {
    return laser.beam_intensity_mW_cm2 / laser.isat_eff_mW_cm2;
}

double scattering_rate(const LaserConfig& laser) {
    laser.validate();
    const double gamma = natural_decay_rate(laser);
    const double s = saturation_parameter(laser);
    const double detuning_ratio = 2.0 * laser.detuning_MHz / laser.linewidth_MHz;
    return 0.5 * gamma * s / (1.0 + s + detuning_ratio * detuning_ratio);
}

double photon_rate(const PhotonBudget& budget) {
    budget.validate();
    return budget.n_eff * budget.eta_f * budget.gamma_sc_per_s * budget.eta_D *
           budget.transmission_T;
}

double photon_energy(double wavelength_um) {
    require(std::isfinite(wavelength_um) && wavelength_um > 0.0, ErrorKind::InvalidInput,
            "wavelength must be > 0");
    return units::planck_J_s * units::speed_of_light_m_s / (wavelength_um * units::m_per_um);
}

}  // namespace motprobe
