#pragma once

// Bound states, antibound states and resonances of the two-point system:
// complex zeros of the spectral determinant, the generalized-Lambert form of
// the zero condition in reduced variables, and a seeded Newton solver over a
// rectangular window of the z = 2kq plane.
//
// The determinant is the difference of two products that cancel at a zero;
// near far-out resonances the balancing terms grow large enough that double
// precision leaves a residual floor above the solver tolerance. Evaluation
// is therefore carried out in extended precision internally.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "deltaprime/couplings.hpp"
#include "deltaprime/errors.hpp"
#include "deltaprime/transfer.hpp"

namespace deltaprime {

namespace detail {

using cld = std::complex<long double>;

struct DeltaCoeffs {
    long double v0, v1, w0, w1, q;

    static DeltaCoeffs from(const TwoPointSystem& s) {
        return DeltaCoeffs{s.v().c0(), s.v().c1(), s.w().c0(), s.w().c1(), s.q()};
    }
};

inline cld delta_value(const DeltaCoeffs& c, cld k) {
    const cld I(0.0L, 1.0L);
    const cld e = std::exp(cld(0.0L, 2.0L) * k * c.q);
    const cld p = (c.v0 + 4.0L * I * k * c.v1) * (c.w0 - 4.0L * I * k * c.w1);
    const cld g = (2.0L * k * (1.0L + c.v1 * c.v1) + I * c.v0) *
                  (2.0L * k * (1.0L + c.w1 * c.w1) + I * c.w0);
    return e * p + g;
}

inline cld delta_derivative(const DeltaCoeffs& c, cld k) {
    const cld I(0.0L, 1.0L);
    const cld e = std::exp(cld(0.0L, 2.0L) * k * c.q);
    const cld pv = c.v0 + 4.0L * I * k * c.v1;
    const cld pw = c.w0 - 4.0L * I * k * c.w1;
    const cld dp = 4.0L * I * c.v1 * pw - 4.0L * I * c.w1 * pv;
    const cld gv = 2.0L * k * (1.0L + c.v1 * c.v1) + I * c.v0;
    const cld gw = 2.0L * k * (1.0L + c.w1 * c.w1) + I * c.w0;
    const cld dg = 2.0L * (1.0L + c.v1 * c.v1) * gw + 2.0L * (1.0L + c.w1 * c.w1) * gv;
    return e * (cld(0.0L, 2.0L) * c.q * pv * pw + dp) + dg;
}

}  // namespace detail

/// Spectral determinant
///   Delta(k) = e^{2ikq} (v0 + 4ik v1)(w0 - 4ik w1)
///            + (2k(1+v1^2) + i v0)(2k(1+w1^2) + i w0),
/// an entire function of k whose nonzero roots are the S-matrix poles.
/// Relates to the transfer matrix by T11 = Delta / (4k^2 (1-v1^2)(1-w1^2)).
inline std::complex<double> delta_determinant(const TwoPointSystem& s,
                                              std::complex<double> k) {
    detail::require_regular(s.v(), "delta_determinant");
    detail::require_regular(s.w(), "delta_determinant");
    const detail::cld value = detail::delta_value(detail::DeltaCoeffs::from(s),
                                                  detail::cld(k.real(), k.imag()));
    return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

/// Closed-form derivative of the spectral determinant.
inline std::complex<double> delta_determinant_derivative(const TwoPointSystem& s,
                                                         std::complex<double> k) {
    detail::require_regular(s.v(), "delta_determinant_derivative");
    detail::require_regular(s.w(), "delta_determinant_derivative");
    const detail::cld value = detail::delta_derivative(detail::DeltaCoeffs::from(s),
                                                       detail::cld(k.real(), k.imag()));
    return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

/// Reduced parameters of the zero condition in the variable z = 2kq:
/// sigma = q v0/(1+v1^2), tau = q w0/(1+w1^2), v = v1/(1+v1^2),
/// w = w1/(1+w1^2). The map x -> x/(1+x^2) keeps |v|, |w| <= 1/2.
struct ReducedParams {
    double sigma = 0.0;
    double tau = 0.0;
    double v = 0.0;
    double w = 0.0;
};

inline ReducedParams reduced_params(const TwoPointSystem& s) {
    detail::require_regular(s.v(), "reduced_params");
    detail::require_regular(s.w(), "reduced_params");
    if (!(s.q() > 0.0))
        throw std::domain_error("reduced_params: q must be positive (z degenerates at q = 0)");
    const double v1 = s.v().c1(), w1 = s.w().c1();
    return ReducedParams{s.q() * s.v().c0() / (1.0 + v1 * v1),
                         s.q() * s.w().c0() / (1.0 + w1 * w1), v1 / (1.0 + v1 * v1),
                         w1 / (1.0 + w1 * w1)};
}

/// Residual of the generalized Lambert form of the zero condition,
///   e^{iz} + ((z + i sigma)/(sigma + 2ivz)) ((z + i tau)/(tau - 2iwz)),
/// which vanishes exactly where the determinant does (apart from the
/// removable k = 0 factor). z = 0 itself solves the form but is the
/// discarded spurious origin solution.
inline std::complex<double> lambert_residual(std::complex<double> z, const ReducedParams& r) {
    using namespace std::complex_literals;
    const std::complex<double> d1 = r.sigma + 2i * r.v * z;
    const std::complex<double> d2 = r.tau - 2i * r.w * z;
    if (d1 == 0.0 || d2 == 0.0)
        throw PoleError("lambert_residual: evaluated on a pole of the rational part");
    return std::exp(1i * z) + ((z + 1i * r.sigma) / d1) * ((z + 1i * r.tau) / d2);
}

/// Real and imaginary parts of the zero condition after clearing
/// denominators, as two real residuals in (z_r, z_i). Both vanish at every
/// determinant zero; the first is even in z_r and the second odd.
inline std::pair<double, double> real_imag_residuals(double z_r, double z_i,
                                                     const ReducedParams& r) {
    const double p = 4.0 * r.v * r.w * z_r * z_r -
                     (2.0 * r.v * z_i - r.sigma) * (2.0 * r.w * z_i + r.tau);
    const double s = 2.0 * z_r * (r.tau * r.v + 4.0 * r.v * r.w * z_i - r.sigma * r.w);
    const double ez = std::exp(z_i);
    const double c = std::cos(z_r);
    const double sn = std::sin(z_r);
    const double first = p * c - s * sn - ((z_i + r.sigma) * (z_i + r.tau) - z_r * z_r) * ez;
    const double second = s * c + p * sn + z_r * (2.0 * z_i + r.sigma + r.tau) * ez;
    return {first, second};
}

/// Modulus compatibility condition: e^{2 z_i} minus the ratio of squared
/// moduli of the rational part. Necessary at every zero, not sufficient.
inline double compatibility_residual(double z_r, double z_i, const ReducedParams& r) {
    const double num = (4.0 * r.v * r.v * z_r * z_r +
                        (2.0 * r.v * z_i - r.sigma) * (2.0 * r.v * z_i - r.sigma)) *
                       (4.0 * r.w * r.w * z_r * z_r +
                        (2.0 * r.w * z_i + r.tau) * (2.0 * r.w * z_i + r.tau));
    const double den = (z_r * z_r + (z_i + r.sigma) * (z_i + r.sigma)) *
                       (z_r * z_r + (z_i + r.tau) * (z_i + r.tau));
    if (den == 0.0)
        throw PoleError("compatibility_residual: evaluated on a pole");
    return std::exp(2.0 * z_i) - num / den;
}

enum class SpectralKind { Bound, Antibound, Resonance, Unclassified };

inline const char* to_string(SpectralKind kind) {
    switch (kind) {
        case SpectralKind::Bound: return "bound";
        case SpectralKind::Antibound: return "antibound";
        case SpectralKind::Resonance: return "resonance";
        default: return "unclassified";
    }
}

/// One located zero of the spectral determinant. `z` is 2kq for separated
/// systems and 0 for collapsed-limit poles. Resonances carry the mirror
/// zero -conj(k) as `partner`.
struct SpectralPoint {
    std::complex<double> k;
    std::complex<double> z;
    SpectralKind kind = SpectralKind::Unclassified;
    double residual = 0.0;
    std::optional<std::complex<double>> partner;
};

/// Rectangle in the complex plane, closed on all sides.
struct Window {
    double re_min = -30.0;
    double re_max = 30.0;
    double im_min = -12.0;
    double im_max = 4.0;

    bool contains(std::complex<double> p) const {
        return p.real() >= re_min && p.real() <= re_max && p.imag() >= im_min &&
               p.imag() <= im_max;
    }
};

struct SolverConfig {
    Window window{};                       ///< seed window in the z-plane
    int grid_density = 64;                 ///< seeds per axis
    double newton_tolerance = 1e-11;       ///< |Delta| at an accepted root
    int max_iterations = 60;
    double dedup_radius = 1e-6;            ///< merge radius in z; also the axis band scale
    double origin_exclusion_radius = 1e-4; ///< drop roots with |z| below this

    void validate() const {
        if (grid_density < 2) throw std::domain_error("SolverConfig: grid_density >= 2");
        if (!(newton_tolerance > 0.0) || !(dedup_radius > 0.0) ||
            !(origin_exclusion_radius > 0.0) || max_iterations < 1)
            throw std::domain_error("SolverConfig: tolerances must be positive");
        if (!(window.re_min < window.re_max) || !(window.im_min < window.im_max))
            throw std::domain_error("SolverConfig: empty window");
    }
};

/// Solver diagnostics; non-convergent seeds are dropped, not reported.
struct SolverStats {
    int seeds = 0;
    int converged = 0;
    int nonconverged = 0;
    int out_of_window = 0;
    int origin_excluded = 0;
    int deduplicated = 0;
    int unpaired = 0;
};

/// Axis/pairing band: |Re k| below this counts as "on the imaginary axis".
inline double classification_band(std::complex<double> k, const SolverConfig& cfg) {
    return cfg.dedup_radius * (1.0 + std::abs(k));
}

/// Classify a single determinant zero by its position. Off-axis points in
/// the lower half plane are resonance candidates; the solver downgrades
/// them to Unclassified when the mirror partner is missing.
inline SpectralKind classify(std::complex<double> k, const SolverConfig& cfg) {
    if (!(std::abs(k) > cfg.origin_exclusion_radius))
        throw std::domain_error("classify: point inside the origin exclusion radius");
    const double band = classification_band(k, cfg);
    if (std::abs(k.real()) < band) {
        if (k.imag() > 0.0) return SpectralKind::Bound;
        if (k.imag() < 0.0) return SpectralKind::Antibound;
        return SpectralKind::Unclassified;
    }
    return k.imag() < 0.0 ? SpectralKind::Resonance : SpectralKind::Unclassified;
}

namespace detail {

struct RawRoot {
    cld k;
    double residual;
};

inline void sort_points(std::vector<SpectralPoint>& pts) {
    std::sort(pts.begin(), pts.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
        if (a.k.imag() != b.k.imag()) return a.k.imag() > b.k.imag();
        return a.k.real() < b.k.real();
    });
}

/// Resonance pairing and final ordering shared by the regular and
/// mixed-decoupling solvers.
inline std::vector<SpectralPoint> classify_and_pair(const std::vector<RawRoot>& roots,
                                                    double scale_to_z,
                                                    const SolverConfig& cfg,
                                                    SolverStats* stats) {
    std::vector<SpectralPoint> out;
    out.reserve(roots.size());
    for (const RawRoot& r : roots) {
        SpectralPoint p;
        p.k = {static_cast<double>(r.k.real()), static_cast<double>(r.k.imag())};
        p.z = scale_to_z * p.k;
        p.residual = r.residual;
        p.kind = classify(p.k, cfg);
        out.push_back(p);
    }
    for (SpectralPoint& p : out) {
        if (p.kind != SpectralKind::Resonance) continue;
        const std::complex<double> target = -std::conj(p.k);
        double best = std::numeric_limits<double>::infinity();
        std::complex<double> found;
        for (const SpectralPoint& other : out) {
            const double d = std::abs(other.k - target);
            if (d < best) {
                best = d;
                found = other.k;
            }
        }
        if (best <= classification_band(p.k, cfg)) {
            p.partner = found;
        } else {
            p.kind = SpectralKind::Unclassified;
            if (stats) ++stats->unpaired;
        }
    }
    sort_points(out);
    return out;
}

/// Newton iteration in extended precision. Returns true on convergence.
template <typename F, typename DF>
inline bool newton_converge(F&& f, DF&& df, cld& k, double tolerance, int max_iterations,
                            double* out_residual) {
    for (int it = 0; it < max_iterations; ++it) {
        const cld fv = f(k);
        if (!std::isfinite(static_cast<double>(fv.real())) ||
            !std::isfinite(static_cast<double>(fv.imag())))
            return false;
        const cld dv = df(k);
        if (dv == cld(0.0L, 0.0L)) return false;
        const cld step = fv / dv;
        k -= step;
        if (std::abs(step) < 1e-13L && std::abs(fv) < tolerance) {
            const double res = static_cast<double>(std::abs(f(k)));
            if (!(res < tolerance)) return false;
            *out_residual = res;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Locate, deduplicate and classify determinant zeros inside cfg.window
/// (given in the z = 2kq plane). Seeds a uniform grid and runs Newton with
/// the closed-form derivative; seeds that do not converge are dropped and
/// counted in `stats`. The spurious z = 0 solution is always filtered.
inline std::vector<SpectralPoint> find_zeros(const TwoPointSystem& s, const SolverConfig& cfg,
                                             SolverStats* stats = nullptr) {
    detail::require_regular(s.v(), "find_zeros");
    detail::require_regular(s.w(), "find_zeros");
    if (!(s.q() > 0.0)) throw std::domain_error("find_zeros: q must be positive");
    cfg.validate();

    const detail::DeltaCoeffs coeffs = detail::DeltaCoeffs::from(s);
    const long double to_k = 1.0L / (2.0L * static_cast<long double>(s.q()));
    const int n = cfg.grid_density;

    std::vector<detail::RawRoot> roots;
    SolverStats local;
    for (int i = 0; i < n; ++i) {
        const double zr = cfg.window.re_min +
                          (cfg.window.re_max - cfg.window.re_min) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double zi = cfg.window.im_min +
                              (cfg.window.im_max - cfg.window.im_min) * j / (n - 1);
            ++local.seeds;
            detail::cld k = detail::cld(zr, zi) * to_k;
            double residual = 0.0;
            const bool ok = detail::newton_converge(
                [&](detail::cld kk) { return detail::delta_value(coeffs, kk); },
                [&](detail::cld kk) { return detail::delta_derivative(coeffs, kk); }, k,
                cfg.newton_tolerance, cfg.max_iterations, &residual);
            if (!ok) {
                ++local.nonconverged;
                continue;
            }
            ++local.converged;
            const std::complex<double> z(static_cast<double>(2.0L * k.real() * coeffs.q),
                                         static_cast<double>(2.0L * k.imag() * coeffs.q));
            if (std::abs(z) <= cfg.origin_exclusion_radius) {
                ++local.origin_excluded;
                continue;
            }
            if (!cfg.window.contains(z)) {
                ++local.out_of_window;
                continue;
            }
            bool duplicate = false;
            for (detail::RawRoot& r : roots) {
                const detail::cld dz = 2.0L * coeffs.q * (r.k - k);
                if (std::abs(dz) < cfg.dedup_radius) {
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
        detail::classify_and_pair(roots, 2.0 * s.q(), cfg, stats ? stats : &local);
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

/// The single S-matrix pole of one regular interaction,
/// k = -i c0 / (2 (1 + c1^2)): bound for c0 < 0, antibound for c0 > 0.
inline SpectralPoint single_point_pole(const Couplings& c) {
    detail::require_regular(c, "single_point_pole");
    if (c.c0() == 0.0)
        throw std::domain_error("single_point_pole: transparent interaction has no pole");
    const double s = 1.0 + c.c1() * c.c1();
    SpectralPoint p;
    p.k = {0.0, -c.c0() / (2.0 * s)};
    p.z = {0.0, 0.0};
    p.kind = c.c0() < 0.0 ? SpectralKind::Bound : SpectralKind::Antibound;
    p.residual = std::abs(std::complex<double>(0.0, 1.0) * c.c0() +
                          2.0 * p.k * s);
    return p;
}

}  // namespace deltaprime
