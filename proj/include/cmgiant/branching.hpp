#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cmgiant/distributions.hpp"
#include "cmgiant/mixing.hpp"

namespace cmgiant {

inline constexpr double kDefaultTol = 1e-10;

/// Smallest fixed point of a generating function together with solver diagnostics.
struct ExtinctionSolution {
    double eta = 1.0;
    std::uint64_t iterations = 0;
    /// |G(eta) - eta|.
    double residual = 0.0;
    bool used_bisection = false;
};

/// Smallest fixed point of G_d on [0, 1], i.e. the Galton-Watson extinction
/// probability with offspring law d.
///
/// Iterates s <- G(s) upward from 0. When the contraction ratio stays close to
/// one (near-critical laws) the solver switches to bisection on G(s) - s.
/// Laws with mean at most one return 1 without iterating, except delta_1 (0).
ExtinctionSolution solve_extinction(const DegreeDistribution& d, double tol = kDefaultTol);
double extinction_probability(const DegreeDistribution& d, double tol = kDefaultTol);

/// 1 - extinction_probability(d).
double survival(const DegreeDistribution& d, double tol = kDefaultTol);

struct ZetaReport {
    double zeta_cm = 0.0;
    /// Extinction probability of the downshifted size-biased law.
    double eta_circ = 1.0;
    /// G_p evaluated at eta_circ; zeta_cm = 1 - eta_root_gf.
    double eta_root_gf = 1.0;
    std::uint64_t iterations = 0;
    double residual = 0.0;
    /// Set when the input lies outside the limit theorem's hypotheses (p(2) = 1).
    std::optional<std::string> warning;
};

/// Limiting giant-component fraction of the configuration model with degree law d:
/// 1 - G_d(eta(d°)). Throws MathError unless 0 < m1(d) < inf.
ZetaReport zeta_cm(const DegreeDistribution& d, double tol = kDefaultTol);

// Upper bounds on zeta_cm from the mean and the lowest masses.

/// m1 / 2, not clamped.
double bound_mean_half(const DegreeDistribution& d);
/// 1 - p(0) - p(1)^2 / m1.
double bound_crude2(const DegreeDistribution& d);
/// 1 - p(0) - p(1) a - p(2) a^2 with a = p(1) / (m1 - 2 p(2)); empty when m1 <= 2 p(2).
std::optional<double> bound_crude3(const DegreeDistribution& d);

struct BoundsReport {
    double mean_half = 0.0;  // clamped to 1
    double crude2 = 0.0;
    std::optional<double> crude3;
    double zeta_cm = 0.0;
};
BoundsReport bounds(const DegreeDistribution& d, double tol = kDefaultTol);

/// lambda * zeta(Poisson(lambda)).
double poisson_mean_survival_product(double lambda, double tol = 1e-13);

/// Root of lambda * zeta(Poisson(lambda)) = 2, bisected over [2, 10] to width tol.
double lambda_cr(double tol = 1e-9);

struct TheoremCheck {
    bool hypothesis_icv = false;
    bool hypothesis_prefix_match = false;
    bool hypothesis_eta_small = false;
    bool conclusion_holds = false;
    std::uint64_t ell = 0;
    double zeta_p = 0.0;
    double zeta_q = 0.0;
    double eta_q_circ = 1.0;

    bool hypotheses_hold() const { return hypothesis_icv && hypothesis_prefix_match && hypothesis_eta_small; }
    /// True when every hypothesis holds but the conclusion fails.
    bool violated() const { return hypotheses_hold() && !conclusion_holds; }
};

/// Checks the monotonicity theorem for p <=_icv q sharing masses 0..ell with
/// eta(q°) <= exp(-2 / (ell + 1)); conclusion is zeta_cm(p) <= zeta_cm(q).
TheoremCheck verify_ordering_theorem(const FinitePmf& p, const FinitePmf& q, std::uint64_t ell);

/// Outcome of a grid check of G_{p°} >= G_{q°}.
struct GfOrderingVerdict {
    enum class Status { Holds, Fails, HypothesisViolated };
    Status status = Status::Holds;
    /// Grid point of the first failure, or nothing.
    std::optional<double> witness;
    std::string detail;

    bool holds() const { return status == Status::Holds; }
};

/// Grid check of G_{p°}(s) >= G_{q°}(s) - 1e-10 on [0, exp(-2 / (ell + 1))],
/// after confirming p <=_icv q and the shared prefix.
GfOrderingVerdict gf_circ_ordering_region(const FinitePmf& p, const FinitePmf& q, std::uint64_t ell,
                                          std::uint64_t grid = 1001);

/// icv relation between Dirac/Pareto mixing laws, decided in closed form.
bool mixing_icv(const MixingDistribution& mu, const MixingDistribution& nu);

/// Grid check of G_{MPoi(mu)°} >= G_{MPoi(nu)°} on [0, 1 - 2/c] where c >= 2
/// bounds both supports from below. Throws MathError if c < 2 or a mixing is
/// not Dirac/Pareto.
GfOrderingVerdict mpoi_icv_gf_ordering(const MixingDistribution& mu, const MixingDistribution& nu,
                                       std::uint64_t grid = 201);

}  // namespace cmgiant
