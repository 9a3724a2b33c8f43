#pragma once

#include <stdexcept>
#include <string>

namespace deltaprime {

/// A regular-case operation was asked to act on a decoupled (opaque-wall)
/// interaction, or a coupling landed inside the singular band around
/// the critical delta-prime strengths +-1.
class SingularCoupling : public std::domain_error {
public:
    explicit SingularCoupling(const std::string& what) : std::domain_error(what) {}
};

/// The group composition law degenerates: 1 + c1*c1' = 0.
class CompositionSingular : public std::domain_error {
public:
    explicit CompositionSingular(const std::string& what) : std::domain_error(what) {}
};

/// Composing two regular interactions produced a coupling on (or numerically
/// inside) the decoupling band |c1| = 1; the result has no regular matching
/// matrix.
class DecoupledResult : public CompositionSingular {
public:
    explicit DecoupledResult(const std::string& what) : CompositionSingular(what) {}
};

/// A residual or map was evaluated exactly on one of its poles.
class PoleError : public std::domain_error {
public:
    explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace deltaprime
