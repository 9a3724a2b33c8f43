#pragma once

// Conversion between physical couplings/positions/energies and the
// dimensionless variables the rest of the library works in. All
// quantities are plain doubles; units are documented, not typed.

#include <cmath>
#include <stdexcept>
#include <string>

namespace deltaprime {

/// Physical description of one delta/delta' pair plus the constants needed
/// to strip dimensions. Defaults give natural units hbar = c = m = 1, in
/// which the physical and dimensionless descriptions coincide.
struct PhysicalParameters {
    double delta_strength = 0.0;        ///< a, energy * length
    double delta_prime_strength = 0.0;  ///< b, energy * length^2
    double position = 0.0;              ///< d, length
    double energy = 0.0;                ///< E
    double mass = 1.0;                  ///< m > 0
    double hbar = 1.0;
    double light_speed = 1.0;           ///< c > 0
};

struct DimensionlessParameters {
    double w0 = 0.0;       ///< delta coupling, 2a/(hbar c)
    double w1 = 0.0;       ///< delta' coupling, m b/hbar^2
    double q = 0.0;        ///< position, d m c/hbar
    double epsilon = 0.0;  ///< energy, 2E/(m c^2)
};

namespace detail {

inline void require_positive_constants(double hbar, double c, double m, const char* where) {
    if (!(hbar > 0.0) || !(c > 0.0) || !(m > 0.0) || !std::isfinite(hbar) ||
        !std::isfinite(c) || !std::isfinite(m))
        throw std::domain_error(std::string(where) + ": constants hbar, c, m must be positive");
}

}  // namespace detail

inline DimensionlessParameters to_dimensionless(const PhysicalParameters& p) {
    detail::require_positive_constants(p.hbar, p.light_speed, p.mass, "to_dimensionless");
    if (!std::isfinite(p.delta_strength) || !std::isfinite(p.delta_prime_strength) ||
        !std::isfinite(p.position) || !std::isfinite(p.energy))
        throw std::domain_error("to_dimensionless: non-finite input");
    DimensionlessParameters d;
    d.w0 = 2.0 * p.delta_strength / (p.hbar * p.light_speed);
    d.w1 = p.mass * p.delta_prime_strength / (p.hbar * p.hbar);
    d.q = p.position * p.mass * p.light_speed / p.hbar;
    d.epsilon = 2.0 * p.energy / (p.mass * p.light_speed * p.light_speed);
    return d;
}

inline PhysicalParameters from_dimensionless(const DimensionlessParameters& d, double hbar,
                                             double light_speed, double mass) {
    detail::require_positive_constants(hbar, light_speed, mass, "from_dimensionless");
    if (!std::isfinite(d.w0) || !std::isfinite(d.w1) || !std::isfinite(d.q) ||
        !std::isfinite(d.epsilon))
        throw std::domain_error("from_dimensionless: non-finite input");
    PhysicalParameters p;
    p.delta_strength = 0.5 * d.w0 * hbar * light_speed;
    p.delta_prime_strength = d.w1 * hbar * hbar / mass;
    p.position = d.q * hbar / (mass * light_speed);
    p.energy = 0.5 * d.epsilon * mass * light_speed * light_speed;
    p.mass = mass;
    p.hbar = hbar;
    p.light_speed = light_speed;
    return p;
}

}  // namespace deltaprime
