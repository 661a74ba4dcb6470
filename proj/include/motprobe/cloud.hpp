#pragma once

#include <optional>

#include "motprobe/physics.hpp"

namespace motprobe {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double k, Vec3 a) { return {k * a.x, k * a.y, k * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

enum class CloudShape { Gaussian, FlatTop };

// Atom density field. The fiber runs along z through x = y = 0.
//  Gaussian: n0 * exp(-sum(((p_i - c_i) / w_i)^2)), radii are 1/e radii.
//  FlatTop:  n_c inside the axis-aligned ellipsoid with semi-axes radii, 0 outside.
struct CloudModel {
    CloudShape shape = CloudShape::Gaussian;
    Vec3 center_um{};
    Vec3 radii_um{650.0, 650.0, 1000.0};
    double peak_density_per_um3 = 4.0e-3;

    void validate() const;
    friend bool operator==(const CloudModel&, const CloudModel&) = default;
};

struct RegimeParams {
    double crossover_atoms = 5.0e4;
    // Constant-density level. Unset means "tie to the template" so the
    // cloud geometry is continuous at the crossover.
    std::optional<double> constant_density_per_um3;
    double central_density_exponent_alpha = 0.723;

    void validate() const;
};

double density_at(const CloudModel& cloud, const Vec3& point_um);

double total_atoms(const CloudModel& cloud);

// Volume V such that total_atoms = peak density * V.
double effective_volume(const CloudModel& cloud);

// Atoms inside the annular sensing shell a <= rho <= a + range around the
// fiber, over z in center.z +- 5 z-radii.
double effective_atom_number(const CloudModel& cloud, const FiberSpec& fiber);

// Density n_c used above the crossover for this template.
double constant_density(const RegimeParams& regime, const CloudModel& tmpl);

// Temperature-limited (N <= crossover): Gaussian with template radii and
// peak density scaled so total_atoms == N.
// Constant-density (N > crossover): FlatTop at n_c, radii scaled as
// N^(1/3) with the template aspect ratio.
CloudModel cloud_for_atom_number(double atoms, const RegimeParams& regime,
                                 const CloudModel& tmpl);

CloudModel translate(const CloudModel& cloud, const Vec3& offset_um);

}  // namespace motprobe
