#pragma once

// Spectra of the eight configurations in which at least one delta-prime
// coupling sits on a decoupling value c1 = +-1 (an opaque wall imposing
// Dirichlet on one side and a Robin condition on the other).
//
// When both walls are opaque the interval between them confines a ladder of
// real levels, solutions of a transcendental phase equation
//     k q + sum_j arctan(4k / a_j) = n pi
// over the wall couplings a_j facing the interval. The phase function is
// not monotone when a wall coupling is small and negative, so roots are
// enumerated by splitting at its (analytically known) critical points and
// bisecting each monotone piece; this guarantees ordered, complete ladders.
//
// When only one wall is opaque the other side still scatters, and poles of
// the analytically continued S-matrix follow from a purely outgoing
// condition: complex zeros of  e^{2ikq} - RHS(k)  with a case-dependent
// rational RHS.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "deltaprime/couplings.hpp"
#include "deltaprime/errors.hpp"
#include "deltaprime/spectra.hpp"

namespace deltaprime {

/// Which of the eight decoupling configurations applies; the letters give
/// the kinds of the interaction at the origin and the one at q, in order
/// (P: c1 = +1, M: c1 = -1, Reg: regular).
enum class DecouplingTag { PP, PM, MP, MM, PReg, MReg, RegP, RegM };

inline const char* to_string(DecouplingTag tag) {
    switch (tag) {
        case DecouplingTag::PP: return "PP";
        case DecouplingTag::PM: return "PM";
        case DecouplingTag::MP: return "MP";
        case DecouplingTag::MM: return "MM";
        case DecouplingTag::PReg: return "PReg";
        case DecouplingTag::MReg: return "MReg";
        case DecouplingTag::RegP: return "RegP";
        case DecouplingTag::RegM: return "RegM";
    }
    return "?";
}

inline bool is_double_decoupling(DecouplingTag tag) {
    return tag == DecouplingTag::PP || tag == DecouplingTag::PM ||
           tag == DecouplingTag::MP || tag == DecouplingTag::MM;
}

/// A tagged decoupling configuration; construction checks that the stored
/// couplings actually have the kinds the tag claims.
class DecouplingCase {
public:
    static DecouplingCase make(DecouplingTag tag, const Couplings& v, const Couplings& w,
                               double q) {
        if (!(q > 0.0) || !std::isfinite(q))
            throw std::domain_error("DecouplingCase: q must be positive");
        const auto expect = [&](const Couplings& c, CouplingKind kind, const char* which) {
            if (c.kind() != kind)
                throw std::domain_error(std::string("DecouplingCase: interaction ") + which +
                                        " does not match tag " + to_string(tag));
        };
        using K = CouplingKind;
        switch (tag) {
            case DecouplingTag::PP: expect(v, K::DecoupledPlus, "v"); expect(w, K::DecoupledPlus, "w"); break;
            case DecouplingTag::PM: expect(v, K::DecoupledPlus, "v"); expect(w, K::DecoupledMinus, "w"); break;
            case DecouplingTag::MP: expect(v, K::DecoupledMinus, "v"); expect(w, K::DecoupledPlus, "w"); break;
            case DecouplingTag::MM: expect(v, K::DecoupledMinus, "v"); expect(w, K::DecoupledMinus, "w"); break;
            case DecouplingTag::PReg: expect(v, K::DecoupledPlus, "v"); expect(w, K::Regular, "w"); break;
            case DecouplingTag::MReg: expect(v, K::DecoupledMinus, "v"); expect(w, K::Regular, "w"); break;
            case DecouplingTag::RegP: expect(v, K::Regular, "v"); expect(w, K::DecoupledPlus, "w"); break;
            case DecouplingTag::RegM: expect(v, K::Regular, "v"); expect(w, K::DecoupledMinus, "w"); break;
        }
        return DecouplingCase(tag, v, w, q);
    }

    DecouplingTag tag() const { return tag_; }
    const Couplings& v() const { return v_; }
    const Couplings& w() const { return w_; }
    double q() const { return q_; }

private:
    DecouplingCase(DecouplingTag tag, const Couplings& v, const Couplings& w, double q)
        : tag_(tag), v_(v), w_(w), q_(q) {}

    DecouplingTag tag_;
    Couplings v_;
    Couplings w_;
    double q_;
};

namespace detail {

/// Phase function kq + sum arctan(4k/a) for k > 0; a = 0 contributes the
/// constant pi/2 (a Neumann-type wall).
struct PhaseEquation {
    double q;
    std::vector<double> walls;  // couplings a_j of the walls facing the interval

    double value(double k) const {
        double s = k * q;
        for (double a : walls)
            s += (a == 0.0) ? std::numbers::pi / 2.0 : std::atan(4.0 * k / a);
        return s;
    }

    double derivative(double k) const {
        double s = q;
        for (double a : walls)
            if (a != 0.0) s += 4.0 * a / (a * a + 16.0 * k * k);
        return s;
    }

    /// Positive critical points of the phase, roots of a polynomial in k^2
    /// of degree equal to the number of nonzero wall couplings.
    std::vector<double> critical_points() const {
        std::vector<double> nz;
        for (double a : walls)
            if (a != 0.0) nz.push_back(a);
        std::vector<double> crit;
        if (nz.size() == 1) {
            const double a = nz[0];
            const double x = -(q * a * a + 4.0 * a) / (16.0 * q);
            if (x > 0.0) crit.push_back(std::sqrt(x));
        } else if (nz.size() == 2) {
            const double a = nz[0], b = nz[1];
            const double c2 = 256.0 * q;
            const double c1 = 16.0 * q * (a * a + b * b) + 64.0 * (a + b);
            const double c0 = q * a * a * b * b + 4.0 * a * b * b + 4.0 * b * a * a;
            const double disc = c1 * c1 - 4.0 * c2 * c0;
            if (disc >= 0.0) {
                const double r = std::sqrt(disc);
                for (double x : {(-c1 - r) / (2.0 * c2), (-c1 + r) / (2.0 * c2)})
                    if (x > 0.0) crit.push_back(std::sqrt(x));
            }
        }
        std::sort(crit.begin(), crit.end());
        return crit;
    }
};

/// All roots of phase(k) = n pi on (0, bound], enumerated by bisection on
/// the monotone pieces between critical points.
inline std::vector<double> phase_ladder(const PhaseEquation& eq, double bound) {
    std::vector<double> pieces{1e-12};
    for (double c : eq.critical_points())
        if (c > 1e-12 && c < bound) pieces.push_back(c);
    pieces.push_back(bound);

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        const double lo = pieces[i], hi = pieces[i + 1];
        const double plo = eq.value(lo), phi = eq.value(hi);
        const double lo_level = std::min(plo, phi) / std::numbers::pi;
        const double hi_level = std::max(plo, phi) / std::numbers::pi;
        for (long n = static_cast<long>(std::ceil(lo_level));
             n <= static_cast<long>(std::floor(hi_level)); ++n) {
            const double level = std::numbers::pi * static_cast<double>(n);
            double a = lo, b = hi;
            double fa = plo - level, fb = phi - level;
            if (fa == 0.0) { roots.push_back(a); continue; }
            if (fb == 0.0) { roots.push_back(b); continue; }
            if (fa * fb > 0.0) continue;
            while (true) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double fm = eq.value(m) - level;
                if (fa * fm <= 0.0) {
                    b = m; fb = fm;
                } else {
                    a = m; fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                roots.end());
    while (!roots.empty() && roots.front() <= 1e-9) roots.erase(roots.begin());
    return roots;
}

/// Lambert-form residual of a confined level: |e^{2ikq} - prod (a-4ik)/(a+4ik)|.
inline double wall_residual(double k, double q, const std::vector<double>& walls) {
    using namespace std::complex_literals;
    std::complex<double> rhs = 1.0;
    for (double a : walls) rhs *= (a - 4i * k) / (a + 4i * k);
    return std::abs(std::exp(2i * k * q) - rhs);
}

}  // namespace detail

/// Real energy levels of the interval confined between two opaque walls,
/// in (0, search_bound]. The MP case (Dirichlet on both interval sides) is
/// the exact ladder k_n = n pi / q; the other cases solve their
/// transcendental phase equations. Points carry kind Unclassified: they are
/// genuine confined levels, outside the bound/antibound/resonance taxonomy
/// of determinant zeros.
inline std::vector<SpectralPoint> double_decoupled_spectrum(const DecouplingCase& dc,
                                                            double search_bound) {
    if (!is_double_decoupling(dc.tag()))
        throw std::domain_error("double_decoupled_spectrum: tag is not a double-decoupling case");
    if (!(search_bound > 0.0))
        throw std::domain_error("double_decoupled_spectrum: search_bound must be positive");
    const double q = dc.q();

    // Wall couplings whose Robin condition faces the interval [0, q]:
    // a Plus wall at the origin and a Minus wall at q look inward.
    std::vector<double> walls;
    switch (dc.tag()) {
        case DecouplingTag::PP: walls = {dc.v().c0()}; break;
        case DecouplingTag::PM: walls = {dc.v().c0(), dc.w().c0()}; break;
        case DecouplingTag::MP: walls = {}; break;
        case DecouplingTag::MM: walls = {dc.w().c0()}; break;
        default: break;
    }

    std::vector<double> ks;
    if (walls.empty()) {
        for (long n = 1; n * std::numbers::pi / q <= search_bound; ++n)
            ks.push_back(static_cast<double>(n) * std::numbers::pi / q);
    } else {
        ks = detail::phase_ladder(detail::PhaseEquation{q, walls}, search_bound);
    }

    std::vector<SpectralPoint> out;
    out.reserve(ks.size());
    for (double k : ks) {
        SpectralPoint p;
        p.k = {k, 0.0};
        p.z = {2.0 * k * q, 0.0};
        p.kind = SpectralKind::Unclassified;
        p.residual = detail::wall_residual(k, q, walls);
        out.push_back(p);
    }
    return out;
}

namespace detail {

struct MixedEquation {
    DecouplingTag tag;
    double v0, v1, w0, w1, q;

    static MixedEquation from(const DecouplingCase& dc) {
        return MixedEquation{dc.tag(), dc.v().c0(), dc.v().c1(), dc.w().c0(), dc.w().c1(),
                             dc.q()};
    }

    /// Rational right-hand side of the purely-outgoing pole condition.
    template <typename C>
    C rhs(C k) const {
        using R = typename C::value_type;
        const C I(R(0), R(1));
        const auto wall_v = [&] { return (R(v0) - R(4) * I * k) / (R(v0) + R(4) * I * k); };
        const auto wall_w = [&] { return (R(w0) - R(4) * I * k) / (R(w0) + R(4) * I * k); };
        const auto scatter_w = [&] {
            return (R(2) * k * R(1.0 + w1 * w1) + I * R(w0)) / (R(4) * k * R(w1) + I * R(w0));
        };
        const auto scatter_v = [&] {
            return -(R(2) * k * R(1.0 + v1 * v1) + I * R(v0)) / (R(4) * k * R(v1) - I * R(v0));
        };
        switch (tag) {
            case DecouplingTag::PReg: return wall_v() * scatter_w();
            case DecouplingTag::MReg: return scatter_w();
            case DecouplingTag::RegP: return scatter_v();
            case DecouplingTag::RegM: return wall_w() * scatter_v();
            default: throw std::domain_error("MixedEquation: not a mixed case");
        }
    }

    template <typename C>
    C rhs_derivative(C k) const {
        using R = typename C::value_type;
        const C I(R(0), R(1));
        const auto d_wall = [&](double a) {
            const C d = R(a) + R(4) * I * k;
            return -R(8) * I * R(a) / (d * d);
        };
        const auto d_scatter_w = [&] {
            const C d = R(4) * k * R(w1) + I * R(w0);
            return R(2) * I * R(w0) * R((1.0 - w1) * (1.0 - w1)) / (d * d);
        };
        const auto d_scatter_v = [&] {
            const C d = R(4) * k * R(v1) - I * R(v0);
            return R(2) * I * R(v0) * R((1.0 + v1) * (1.0 + v1)) / (d * d);
        };
        const auto wall_v = [&] { return (R(v0) - R(4) * I * k) / (R(v0) + R(4) * I * k); };
        const auto wall_w = [&] { return (R(w0) - R(4) * I * k) / (R(w0) + R(4) * I * k); };
        const auto scatter_w = [&] {
            return (R(2) * k * R(1.0 + w1 * w1) + I * R(w0)) / (R(4) * k * R(w1) + I * R(w0));
        };
        const auto scatter_v = [&] {
            return -(R(2) * k * R(1.0 + v1 * v1) + I * R(v0)) / (R(4) * k * R(v1) - I * R(v0));
        };
        switch (tag) {
            case DecouplingTag::PReg: return d_wall(v0) * scatter_w() + wall_v() * d_scatter_w();
            case DecouplingTag::MReg: return d_scatter_w();
            case DecouplingTag::RegP: return d_scatter_v();
            case DecouplingTag::RegM: return d_wall(w0) * scatter_v() + wall_w() * d_scatter_v();
            default: throw std::domain_error("MixedEquation: not a mixed case");
        }
    }

    template <typename C>
    C residual(C k) const {
        using R = typename C::value_type;
        const C I(R(0), R(1));
        return std::exp(R(2) * I * k * R(q)) - rhs(k);
    }

    template <typename C>
    C residual_derivative(C k) const {
        using R = typename C::value_type;
        const C I(R(0), R(1));
        return R(2) * I * R(q) * std::exp(R(2) * I * k * R(q)) - rhs_derivative(k);
    }

    template <typename C>
    bool on_pole(C k) const {
        using R = typename C::value_type;
        const C I(R(0), R(1));
        const C zero(R(0), R(0));
        switch (tag) {
            case DecouplingTag::PReg:
                return R(v0) + R(4) * I * k == zero || R(4) * k * R(w1) + I * R(w0) == zero;
            case DecouplingTag::MReg: return R(4) * k * R(w1) + I * R(w0) == zero;
            case DecouplingTag::RegP: return R(4) * k * R(v1) - I * R(v0) == zero;
            case DecouplingTag::RegM:
                return R(w0) + R(4) * I * k == zero || R(4) * k * R(v1) - I * R(v0) == zero;
            default: return false;
        }
    }
};

}  // namespace detail

/// Residual e^{2ikq} - RHS(k) of the purely-outgoing pole condition for the
/// four mixed (one wall, one regular) configurations. Zeros are the
/// bound/antibound/resonance poles of the analytically continued S-matrix.
inline std::complex<double> mixed_decoupled_residual(const DecouplingCase& dc,
                                                     std::complex<double> k) {
    if (is_double_decoupling(dc.tag()))
        throw std::domain_error("mixed_decoupled_residual: tag is not a mixed case");
    const auto eq = detail::MixedEquation::from(dc);
    if (eq.on_pole(k))
        throw PoleError("mixed_decoupled_residual: evaluated on a pole of the RHS");
    return eq.residual(k);
}

inline std::complex<double> mixed_decoupled_residual_derivative(const DecouplingCase& dc,
                                                                std::complex<double> k) {
    if (is_double_decoupling(dc.tag()))
        throw std::domain_error("mixed_decoupled_residual_derivative: tag is not a mixed case");
    const auto eq = detail::MixedEquation::from(dc);
    if (eq.on_pole(k))
        throw PoleError("mixed_decoupled_residual_derivative: evaluated on a pole of the RHS");
    return eq.residual_derivative(k);
}

/// The nonzero analytic pole of the collapsed (q -> 0) limit, available for
/// the PReg and RegM configurations:
///   PReg: k = -i (4 w0 + v0 (1 - w1)^2) / (4 (1 + w1)^2)
///   RegM: k = -i (4 v0 + w0 (1 + v1)^2) / (4 (1 - v1)^2)
/// Bound when the numerator combination is negative, antibound otherwise;
/// the k = 0 solution is discarded.
inline SpectralPoint mixed_limit_poles(const DecouplingCase& dc) {
    double numerator = 0.0;
    double denominator = 0.0;
    switch (dc.tag()) {
        case DecouplingTag::PReg: {
            const double w1 = dc.w().c1();
            numerator = 4.0 * dc.w().c0() + dc.v().c0() * (1.0 - w1) * (1.0 - w1);
            denominator = 4.0 * (1.0 + w1) * (1.0 + w1);
            break;
        }
        case DecouplingTag::RegM: {
            const double v1 = dc.v().c1();
            numerator = 4.0 * dc.v().c0() + dc.w().c0() * (1.0 + v1) * (1.0 + v1);
            denominator = 4.0 * (1.0 - v1) * (1.0 - v1);
            break;
        }
        default:
            throw std::domain_error(
                "mixed_limit_poles: only the PReg and RegM cases have a nonzero collapsed pole");
    }
    if (numerator == 0.0)
        throw std::domain_error("mixed_limit_poles: numerator vanishes, no pole");

    SpectralPoint p;
    p.k = {0.0, -numerator / denominator};
    p.z = {0.0, 0.0};
    p.kind = numerator < 0.0 ? SpectralKind::Bound : SpectralKind::Antibound;

    // Residual of the collapsed pole condition the point solves exactly.
    using namespace std::complex_literals;
    const std::complex<double> k = p.k;
    if (dc.tag() == DecouplingTag::PReg) {
        const double v0 = dc.v().c0(), w0 = dc.w().c0(), w1 = dc.w().c1();
        p.residual = std::abs((v0 + 4i * k) * (4.0 * k * w1 + 1i * w0) -
                              (v0 - 4i * k) * (2.0 * k * (1.0 + w1 * w1) + 1i * w0));
    } else {
        const double w0 = dc.w().c0(), v0 = dc.v().c0(), v1 = dc.v().c1();
        p.residual = std::abs((w0 + 4i * k) * (4.0 * k * v1 - 1i * v0) +
                              (w0 - 4i * k) * (2.0 * k * (1.0 + v1 * v1) + 1i * v0));
    }
    return p;
}

/// Newton search for complex poles of a mixed configuration over
/// cfg.window, here a window in the k-plane. Same dedup, origin exclusion,
/// classification and resonance pairing as find_zeros.
inline std::vector<SpectralPoint> mixed_decoupled_spectrum(const DecouplingCase& dc,
                                                           const SolverConfig& cfg,
                                                           SolverStats* stats = nullptr) {
    if (is_double_decoupling(dc.tag()))
        throw std::domain_error("mixed_decoupled_spectrum: tag is not a mixed case");
    cfg.validate();
    const auto eq = detail::MixedEquation::from(dc);
    const int n = cfg.grid_density;

    std::vector<detail::RawRoot> roots;
    SolverStats local;
    for (int i = 0; i < n; ++i) {
        const double kr = cfg.window.re_min +
                          (cfg.window.re_max - cfg.window.re_min) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double ki = cfg.window.im_min +
                              (cfg.window.im_max - cfg.window.im_min) * j / (n - 1);
            ++local.seeds;
            detail::cld k(kr, ki);
            if (eq.on_pole(k)) {
                ++local.nonconverged;
                continue;
            }
            double residual = 0.0;
            const bool ok = detail::newton_converge(
                [&](detail::cld kk) { return eq.residual(kk); },
                [&](detail::cld kk) { return eq.residual_derivative(kk); }, k,
                cfg.newton_tolerance, cfg.max_iterations, &residual);
            if (!ok) {
                ++local.nonconverged;
                continue;
            }
            ++local.converged;
            const std::complex<double> kd(static_cast<double>(k.real()),
                                          static_cast<double>(k.imag()));
            if (std::abs(kd) <= cfg.origin_exclusion_radius) {
                ++local.origin_excluded;
                continue;
            }
            if (!cfg.window.contains(kd)) {
                ++local.out_of_window;
                continue;
            }
            bool duplicate = false;
            for (detail::RawRoot& r : roots) {
                if (std::abs(r.k - k) < cfg.dedup_radius) {
                    duplicate = true;
                    if (residual < r.residual) r = detail::RawRoot{k, residual};
                    break;
                }
            }
            if (duplicate) {
                ++local.deduplicated;
                continue;
            }
            roots.push_back(detail::RawRoot{k, residual});
        }
    }

    std::vector<SpectralPoint> out =
        detail::classify_and_pair(roots, 2.0 * dc.q(), cfg, stats ? stats : &local);
    if (stats) {
        stats->seeds += local.seeds;
        stats->converged += local.converged;
        stats->nonconverged += local.nonconverged;
        stats->out_of_window += local.out_of_window;
        stats->origin_excluded += local.origin_excluded;
        stats->deduplicated += local.deduplicated;
    }
    return out;
}

}  // namespace deltaprime
