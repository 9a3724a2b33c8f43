#pragma once

// Heat trace of a single point interaction as a function of Schwinger
// proper time.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "deltaprime/couplings.hpp"

namespace deltaprime {

struct HeatTraceSample {
    double t = 0.0;
    std::complex<double> value;
};

/// Closed-form heat trace of one interaction,
///   h(t) = e^{t c0^2 / (4 (1+c1^2)^2)}
///          ( 2 i pi erfc( sqrt(t) c0 / (2 (1+c1^2)) ) + theta(-c0) - 4 i pi ),
/// with theta the Heaviside step in the symmetric convention theta(0) = 1/2.
///
/// The value is complex as written; only its structure (growth exponent,
/// erfc argument, step jump) is asserted downstream. The dependence on the
/// delta-prime strength enters through c1^2 only, so the expression stays
/// finite and continuous through the decoupling values c1 = +-1.
inline std::complex<double> heat_trace(const Couplings& c, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::domain_error("heat_trace: t must be positive");
    const double c0 = c.c0();
    const double s = 1.0 + c.c1() * c.c1();
    const double prefactor = std::exp(t * c0 * c0 / (4.0 * s * s));
    const double erfc_arg = std::sqrt(t) * c0 / (2.0 * s);
    const double step = c0 < 0.0 ? 1.0 : (c0 == 0.0 ? 0.5 : 0.0);
    const std::complex<double> ipi(0.0, std::numbers::pi);
    return prefactor * (2.0 * ipi * std::erfc(erfc_arg) + step - 4.0 * ipi);
}

}  // namespace deltaprime
