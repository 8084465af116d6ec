#pragma once

#include <cstdint>
#include <variant>

namespace cmgiant {

// Mixing laws on the nonnegative reals, used as the random rate of a mixed
// Poisson degree law.

struct Dirac {
    double x = 0.0;
    bool operator==(const Dirac&) const = default;
};

/// Density alpha * scale^alpha * t^(-alpha-1) on (scale, inf).
/// Any alpha > 0 is representable; the mean is finite only for alpha > 1.
struct Pareto {
    double alpha = 2.0;
    double scale = 1.0;
    bool operator==(const Pareto&) const = default;
};

/// Law of exp(location + sqrt(scale2) * Z) with Z standard normal.
struct Lognormal {
    double location = 0.0;
    double scale2 = 1.0;
    bool operator==(const Lognormal&) const = default;
};

using MixingDistribution = std::variant<Dirac, Pareto, Lognormal>;

/// Throws std::invalid_argument when parameters leave the family's domain.
void validate(const MixingDistribution& mu);

double mean(const MixingDistribution& mu);
double second_moment(const MixingDistribution& mu);

/// Laplace transform E exp(-t X), t >= 0.
double laplace_transform(const MixingDistribution& mu, double t);

/// Mixed Poisson mass  E[ exp(-X) X^k / k! ].
double mixed_poisson_pmf(const MixingDistribution& mu, std::uint64_t k);

/// Size biasing mu*(dx) = x mu(dx) / m1(mu). Dirac and lognormal are closed
/// under it; Pareto(a, c)* = Pareto(a - 1, c), which has infinite mean when a <= 2.
MixingDistribution size_bias(const MixingDistribution& mu);

/// Law of r * X.
MixingDistribution scale(const MixingDistribution& mu, double r);

/// Left end of the support.
double support_lower(const MixingDistribution& mu);

}  // namespace cmgiant
