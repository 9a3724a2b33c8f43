#pragma once

// Matching matrices of delta-delta' point interactions and their group
// structure: the non-abelian composition law, inverses, the trace, the
// Lie-algebra picture (exponential / logarithm of the lower-triangular
// group), and the unitary boundary-matrix view that stays regular in the
// decoupling limit.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "deltaprime/couplings.hpp"
#include "deltaprime/errors.hpp"

namespace deltaprime {

namespace detail {

/// sinh(x)/x with the removable singularity at x = 0 filled by its series.
inline double sinhc(double x) {
    if (std::abs(x) < 1e-6) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

/// atanh(x)/x, continuous through x = 0.
inline double atanhc(double x) {
    if (std::abs(x) < 1e-6) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 + x2 * x2 / 5.0;
    }
    return std::atanh(x) / x;
}

}  // namespace detail

class KurasovMatrix;
struct BorelParams;
inline KurasovMatrix kurasov_matrix(const Couplings& c);
inline KurasovMatrix borel_matrix(const BorelParams& p);

/// Real lower-triangular matching matrix with unit determinant relating
/// boundary data (phi, phi') across one interaction point. Both diagonal
/// entries share a sign, so these matrices form a group under multiplication.
///
/// Values are only constructible from Couplings or BorelParams; arbitrary
/// lower-triangular matrices have no coupling preimage and are not admitted.
class KurasovMatrix {
public:
    double m11() const { return m11_; }
    double m12() const { return 0.0; }
    double m21() const { return m21_; }
    double m22() const { return m22_; }

    Eigen::Matrix2d matrix() const {
        Eigen::Matrix2d m;
        m << m11_, 0.0, m21_, m22_;
        return m;
    }

    double trace() const { return m11_ + m22_; }
    double determinant() const { return m11_ * m22_; }

    /// Group product; lower-triangular structure is preserved exactly.
    KurasovMatrix operator*(const KurasovMatrix& rhs) const {
        return KurasovMatrix(m11_ * rhs.m11_, m21_ * rhs.m11_ + m22_ * rhs.m21_,
                             m22_ * rhs.m22_);
    }

    KurasovMatrix inverse() const { return KurasovMatrix(m22_, -m21_, m11_); }

private:
    KurasovMatrix(double m11, double m21, double m22) : m11_(m11), m21_(m21), m22_(m22) {}

    friend KurasovMatrix kurasov_matrix(const Couplings&);
    friend KurasovMatrix borel_matrix(const BorelParams&);

    double m11_;
    double m21_;
    double m22_;
};

/// Matching matrix of a regular interaction:
///   [ (1+c1)/(1-c1)      0          ]
///   [ c0/(1-c1^2)    (1-c1)/(1+c1)  ]
inline KurasovMatrix kurasov_matrix(const Couplings& c) {
    detail::require_regular(c, "kurasov_matrix");
    const double c0 = c.c0();
    const double c1 = c.c1();
    return KurasovMatrix((1.0 + c1) / (1.0 - c1), c0 / (1.0 - c1 * c1),
                         (1.0 - c1) / (1.0 + c1));
}

/// Non-abelian composition of two regular interactions collapsed onto one
/// point. `first` is the interaction hit first by a left-incident wave (the
/// leftmost one), so the matching matrices multiply as M(second) * M(first).
///
/// Throws CompositionSingular when 1 + c1*c1' = 0 and DecoupledResult when
/// the composite delta-prime strength lands on the decoupling band.
inline Couplings compose(const Couplings& first, const Couplings& second) {
    detail::require_regular(first, "compose");
    detail::require_regular(second, "compose");
    const double v0 = first.c0(), v1 = first.c1();
    const double w0 = second.c0(), w1 = second.c1();

    const double denom = 1.0 + v1 * w1;
    if (std::abs(denom) < 1e-12)
        throw CompositionSingular("compose: 1 + c1*c1' vanishes, no composite couplings");

    const double u1 = (v1 + w1) / denom;
    const double u0 = (v0 * (1.0 - w1) * (1.0 - w1) + w0 * (1.0 + v1) * (1.0 + v1)) /
                      (denom * denom);
    if (!std::isfinite(u0) || !std::isfinite(u1))
        throw CompositionSingular("compose: composite couplings overflow");
    if (std::abs(1.0 - u1 * u1) <= singularity_tolerance)
        throw DecoupledResult("compose: composite interaction is decoupled (|u1| = 1)");
    return Couplings::regular(u0, u1);
}

/// Group inverse, (c0, c1) -> (-c0, -c1).
inline Couplings inverse(const Couplings& c) {
    detail::require_regular(c, "inverse");
    return Couplings::regular(-c.c0(), -c.c1());
}

/// Trace of the matching matrix, 2(1+c1^2)/(1-c1^2). Independent of c0,
/// equal to 2 only at c1 = 0, and tends to -2 as |c1| grows.
inline double trace(const Couplings& c) {
    detail::require_regular(c, "trace");
    const double c1 = c.c1();
    return 2.0 * (1.0 + c1 * c1) / (1.0 - c1 * c1);
}

/// The single nonzero entry (2,1) of M(a)*M(b) - M(b)*M(a):
/// 4(a0*b1 - b0*a1) / ((1-a1^2)(1-b1^2)). Vanishes iff a0*b1 = b0*a1.
inline double commutator_defect(const Couplings& a, const Couplings& b) {
    detail::require_regular(a, "commutator_defect");
    detail::require_regular(b, "commutator_defect");
    return 4.0 * (a.c0() * b.c1() - b.c0() * a.c1()) /
           ((1.0 - a.c1() * a.c1()) * (1.0 - b.c1() * b.c1()));
}

/// Connected component of the matching-matrix group.
enum class GroupComponent {
    Plus,   ///< positive diagonal, contains the identity
    Minus,  ///< negative diagonal
};

/// Coordinates (alpha, beta) on the lower-triangular subalgebra spanned by
/// h = diag(1,-1) and f = [[0,0],[1,0]], plus the component sign. The group
/// element is +-exp(alpha*h + beta*f).
struct BorelParams {
    double alpha = 0.0;
    double beta = 0.0;
    GroupComponent component = GroupComponent::Plus;
};

/// +-exp(alpha*h + beta*f) in closed form:
///   [ e^alpha               0        ]
///   [ beta*sinh(alpha)/alpha  e^-alpha ]
/// with the overall sign given by the component.
inline KurasovMatrix borel_matrix(const BorelParams& p) {
    const double s = (p.component == GroupComponent::Plus) ? 1.0 : -1.0;
    return KurasovMatrix(s * std::exp(p.alpha), s * p.beta * detail::sinhc(p.alpha),
                         s * std::exp(-p.alpha));
}

/// Couplings of the exponentiated group element:
///   Plus:  c1 = tanh(alpha/2), c0 = 2(beta/alpha) tanh(alpha/2)
///   Minus: c1 = coth(alpha/2), c0 = 2(beta/alpha) coth(alpha/2)
/// The alpha -> 0 limit of the Plus branch is the pure-delta interaction
/// (c0 = beta, c1 = 0); the Minus branch has a genuine pole at alpha = 0.
inline Couplings exp_map(const BorelParams& p) {
    const double half = 0.5 * p.alpha;
    if (p.component == GroupComponent::Plus) {
        const double c1 = std::tanh(half);
        const double c0 = p.beta * detail::sinhc(half) / std::cosh(half);
        return Couplings::regular(c0, c1);
    }
    if (p.alpha == 0.0)
        throw std::domain_error("exp_map: Minus component is singular at alpha = 0");
    const double sh = std::sinh(half);
    const double c1 = std::cosh(half) / sh;
    const double c0 = p.beta * std::cosh(half) / (half * sh);
    return Couplings::regular(c0, c1);
}

/// Inverse of exp_map. |c1| < 1 lands on the Plus component, |c1| > 1 on
/// Minus; the band |c1| = 1 is the decoupling limit and is rejected.
inline BorelParams log_map(const Couplings& c) {
    detail::require_regular(c, "log_map");
    const double c0 = c.c0();
    const double c1 = c.c1();
    if (std::abs(c1) < 1.0) {
        const double alpha = 2.0 * std::atanh(c1);
        const double beta = c0 * detail::atanhc(c1);
        return BorelParams{alpha, beta, GroupComponent::Plus};
    }
    const double alpha = 2.0 * std::atanh(1.0 / c1);
    const double beta = alpha * c0 / (2.0 * c1);
    return BorelParams{alpha, beta, GroupComponent::Minus};
}

/// Composition law in group coordinates; same operand convention as
/// compose(): the result represents M(p2) * M(p1).
///
///   alpha = alpha1 + alpha2
///   beta  = (beta2 sinhc(alpha2) e^{alpha1} + beta1 sinhc(alpha1) e^{-alpha2})
///           / sinhc(alpha1 + alpha2)
///
/// All the removable alpha -> 0 singularities are handled by sinhc.
inline BorelParams compose_params(const BorelParams& p1, const BorelParams& p2) {
    if (std::abs(p1.alpha) > 700.0 || std::abs(p2.alpha) > 700.0 ||
        std::abs(p1.alpha + p2.alpha) > 700.0)
        throw std::domain_error("compose_params: |alpha| too large, exp overflow");
    const double alpha = p1.alpha + p2.alpha;
    const double beta = (p2.beta * detail::sinhc(p2.alpha) * std::exp(p1.alpha) +
                         p1.beta * detail::sinhc(p1.alpha) * std::exp(-p2.alpha)) /
                        detail::sinhc(alpha);
    const bool minus = (p1.component == GroupComponent::Minus) !=
                       (p2.component == GroupComponent::Minus);
    return BorelParams{alpha, beta,
                       minus ? GroupComponent::Minus : GroupComponent::Plus};
}

/// Unitary 2x2 matrix expressing the matching conditions on the spinor
/// boundary data (phi -+ i phi'); regular for every interaction, including
/// the decoupled ones.
class BoundaryUnitary {
public:
    const Eigen::Matrix2cd& matrix() const { return m_; }
    std::complex<double> entry(int row, int col) const { return m_(row, col); }

private:
    explicit BoundaryUnitary(Eigen::Matrix2cd m) : m_(std::move(m)) {}
    friend BoundaryUnitary to_boundary_unitary(const Couplings&);

    Eigen::Matrix2cd m_;
};

/// Boundary-unitary view of an interaction. For regular couplings this is
/// the scattering-style reshuffle of g M g^{-1} with g = [[1,-i],[1,i]]; the
/// decoupling limits give the antidiagonal forms that impose Dirichlet on
/// one side and a Robin condition with coefficient 4/c0 on the other.
inline BoundaryUnitary to_boundary_unitary(const Couplings& c) {
    using namespace std::complex_literals;
    const double c0 = c.c0();
    Eigen::Matrix2cd u;
    switch (c.kind()) {
        case CouplingKind::DecoupledPlus: {
            const std::complex<double> phase = (4.0 + 1i * c0) / (4.0 - 1i * c0);
            u << 0.0, -1.0, phase, 0.0;
            break;
        }
        case CouplingKind::DecoupledMinus: {
            const std::complex<double> phase = (4.0 + 1i * c0) / (4.0 - 1i * c0);
            u << 0.0, phase, -1.0, 0.0;
            break;
        }
        case CouplingKind::Regular: {
            const double c1 = c.c1();
            const std::complex<double> denom = 2.0 * (1.0 + c1 * c1) - 1i * c0;
            u << 2.0 * (1.0 - c1 * c1) / denom, (-4.0 * c1 + 1i * c0) / denom,
                (4.0 * c1 + 1i * c0) / denom, 2.0 * (1.0 - c1 * c1) / denom;
            break;
        }
    }
    return BoundaryUnitary(u);
}

}  // namespace deltaprime
