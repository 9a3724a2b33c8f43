#pragma once

#include <cmath>
#include <string>

#include "deltaprime/errors.hpp"

namespace deltaprime {

/// Width of the rejected band around the critical delta-prime strengths
/// c1 = +-1. Matching-matrix entries scale like 1/(1 - c1^2); inside this
/// band the regular matching conditions are numerically meaningless and the
/// interaction must be built as a decoupled one instead.
inline constexpr double singularity_tolerance = 1e-9;

enum class CouplingKind {
    Regular,         ///< |1 - c1^2| > singularity_tolerance
    DecoupledPlus,   ///< c1 = +1 exactly (opaque wall, Dirichlet left / Robin right)
    DecoupledMinus,  ///< c1 = -1 exactly (mirror image)
};

/// Dimensionless strengths of a single point interaction
/// c0 * delta(y) + 2 * c1 * delta'(y).
///
/// The decoupling values c1 = +-1 are carried as an enum tag and stored
/// exactly; they are never detected through floating-point comparison.
class Couplings {
public:
    /// Identity interaction (free point, matching matrix = identity).
    Couplings() = default;

    static Couplings regular(double c0, double c1) {
        if (!std::isfinite(c0) || !std::isfinite(c1))
            throw std::domain_error("Couplings::regular: non-finite coupling");
        if (std::abs(1.0 - c1 * c1) <= singularity_tolerance)
            throw SingularCoupling(
                "Couplings::regular: delta-prime strength " + std::to_string(c1) +
                " is inside the decoupling band; use a decoupled constructor");
        return Couplings(c0, c1, CouplingKind::Regular);
    }

    static Couplings decoupled_plus(double c0) {
        if (!std::isfinite(c0))
            throw std::domain_error("Couplings::decoupled_plus: non-finite coupling");
        return Couplings(c0, 1.0, CouplingKind::DecoupledPlus);
    }

    static Couplings decoupled_minus(double c0) {
        if (!std::isfinite(c0))
            throw std::domain_error("Couplings::decoupled_minus: non-finite coupling");
        return Couplings(c0, -1.0, CouplingKind::DecoupledMinus);
    }

    double c0() const { return c0_; }
    double c1() const { return c1_; }
    CouplingKind kind() const { return kind_; }
    bool is_regular() const { return kind_ == CouplingKind::Regular; }

private:
    Couplings(double c0, double c1, CouplingKind kind) : c0_(c0), c1_(c1), kind_(kind) {}

    double c0_ = 0.0;
    double c1_ = 0.0;
    CouplingKind kind_ = CouplingKind::Regular;
};

namespace detail {

inline void require_regular(const Couplings& c, const char* where) {
    if (!c.is_regular())
        throw SingularCoupling(std::string(where) +
                               ": decoupled interaction has no regular matching matrix");
}

}  // namespace detail

}  // namespace deltaprime
