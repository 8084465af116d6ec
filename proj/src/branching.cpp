#include "cmgiant/branching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cmgiant/errors.hpp"
#include "cmgiant/orders.hpp"
#include "overloaded.hpp"

namespace cmgiant {

namespace {

constexpr std::uint64_t kMaxIterations = 1'000'000;
// Iteration gives way to bisection once this many steps have run with a
// step ratio above kStallRatio.
constexpr std::uint64_t kStallAfter = 50;
constexpr double kStallRatio = 0.9;
constexpr double kThresholdSlack = 1e-12;
constexpr double kConclusionSlack = 1e-9;
constexpr double kGfSlack = 1e-10;

ExtinctionSolution bisect_extinction(const DegreeDistribution& d, double lo, double tol,
                                     std::uint64_t iterations) {
    ExtinctionSolution out;
    out.used_bisection = true;
    double hi = 1.0 - tol;
    if (lo >= hi || gf_eval(d, hi) - hi >= 0.0) {
        // No crossing below 1 - tol: eta is within tol of 1.
        out.eta = 1.0;
        out.iterations = iterations + 1;
        out.residual = 0.0;
        return out;
    }
    // Invariant: G(lo) > lo, G(hi) < hi.
    while (hi - lo > tol && iterations < kMaxIterations) {
        const double mid = 0.5 * (lo + hi);
        if (gf_eval(d, mid) - mid > 0.0)
            lo = mid;
        else
            hi = mid;
        ++iterations;
    }
    out.eta = lo;
    out.iterations = iterations;
    out.residual = std::abs(gf_eval(d, lo) - lo);
    return out;
}

}  // namespace

ExtinctionSolution solve_extinction(const DegreeDistribution& d, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("extinction tolerance must be positive");
    if (moment(d, 1) <= 1.0) {
        // delta_1 never dies out; every other law with mean <= 1 does.
        if (pmf(d, 1) == 1.0) return ExtinctionSolution{0.0, 0, 0.0, false};
        return ExtinctionSolution{1.0, 0, 0.0, false};
    }

    double s = 0.0;
    double prev_step = 0.0;
    for (std::uint64_t it = 1; it <= kMaxIterations; ++it) {
        const double next = gf_eval(d, s);
        const double step = next - s;
        s = std::max(s, next);
        if (step <= 0.0) return ExtinctionSolution{s, it, std::abs(step), false};
        const double ratio = prev_step > 0.0 ? step / prev_step : 0.0;
        const double err_est = ratio < 1.0 ? step * ratio / (1.0 - ratio) : step * 1e6;
        if (prev_step > 0.0 && step <= tol && err_est <= tol) {
            return ExtinctionSolution{s, it, std::abs(gf_eval(d, s) - s), false};
        }
        if (it >= kStallAfter && ratio > kStallRatio) return bisect_extinction(d, s, tol, it);
        prev_step = step;
    }
    return bisect_extinction(d, s, tol, kMaxIterations);
}

double extinction_probability(const DegreeDistribution& d, double tol) { return solve_extinction(d, tol).eta; }

double survival(const DegreeDistribution& d, double tol) { return 1.0 - extinction_probability(d, tol); }

ZetaReport zeta_cm(const DegreeDistribution& d, double tol) {
    const double m1 = moment(d, 1);
    if (!(m1 > 0.0) || !std::isfinite(m1))
        throw MathError("zeta_cm needs a finite nonzero mean degree, got " + std::to_string(m1));
    ZetaReport rep;
    if (pmf(d, 2) == 1.0) rep.warning = "p(2) = 1 lies outside the giant-component limit theorem";
    const auto circ = downshift_size_bias(d);
    const auto sol = solve_extinction(circ, tol);
    rep.eta_circ = sol.eta;
    rep.iterations = sol.iterations;
    rep.residual = sol.residual;
    // G(1) = 1 exactly; summing the masses could leave a rounding-level giant.
    rep.eta_root_gf = sol.eta == 1.0 ? 1.0 : std::clamp(gf_eval(d, sol.eta), 0.0, 1.0);
    rep.zeta_cm = 1.0 - rep.eta_root_gf;
    return rep;
}

double bound_mean_half(const DegreeDistribution& d) {
    const double m1 = moment(d, 1);
    if (!std::isfinite(m1)) throw MathError("mean bound needs a finite mean");
    return m1 / 2.0;
}

double bound_crude2(const DegreeDistribution& d) {
    const double m1 = moment(d, 1);
    if (!std::isfinite(m1)) throw MathError("crude bound needs a finite mean");
    const double p0 = pmf(d, 0);
    if (m1 == 0.0) return 1.0 - p0;  // p(1) = 0 as well
    const double p1 = pmf(d, 1);
    return 1.0 - p0 - p1 * p1 / m1;
}

std::optional<double> bound_crude3(const DegreeDistribution& d) {
    const double m1 = moment(d, 1);
    const double p2 = pmf(d, 2);
    const double denom = m1 - 2.0 * p2;
    if (!(denom > 0.0)) return std::nullopt;
    const double p0 = pmf(d, 0);
    const double p1 = pmf(d, 1);
    const double a = std::isfinite(denom) ? p1 / denom : 0.0;
    return 1.0 - p0 - p1 * a - p2 * a * a;
}

BoundsReport bounds(const DegreeDistribution& d, double tol) {
    BoundsReport r;
    r.mean_half = std::min(1.0, bound_mean_half(d));
    r.crude2 = bound_crude2(d);
    r.crude3 = bound_crude3(d);
    r.zeta_cm = zeta_cm(d, tol).zeta_cm;
    return r;
}

double poisson_mean_survival_product(double lambda, double tol) {
    return lambda * survival(Poisson{lambda}, tol);
}

double lambda_cr(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("lambda_cr tolerance must be positive");
    double lo = 2.0, hi = 10.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (poisson_mean_survival_product(mid) < 2.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

TheoremCheck verify_ordering_theorem(const FinitePmf& p, const FinitePmf& q, std::uint64_t ell) {
    TheoremCheck c;
    c.ell = ell;
    c.hypothesis_icv = check_order(p, q, OrderRelation::ICV).holds;
    c.hypothesis_prefix_match = true;
    for (std::uint64_t i = 0; i <= ell; ++i)
        if (std::abs(p[i] - q[i]) > 1e-12) c.hypothesis_prefix_match = false;
    const DegreeDistribution dp(p), dq(q);
    c.eta_q_circ = extinction_probability(downshift_size_bias(dq));
    c.hypothesis_eta_small = c.eta_q_circ <= std::exp(-2.0 / static_cast<double>(ell + 1)) + kThresholdSlack;
    c.zeta_p = zeta_cm(dp).zeta_cm;
    c.zeta_q = zeta_cm(dq).zeta_cm;
    c.conclusion_holds = c.zeta_p <= c.zeta_q + kConclusionSlack;
    return c;
}

namespace {

GfOrderingVerdict grid_compare(const DegreeDistribution& a, const DegreeDistribution& b, double upper,
                               std::uint64_t grid) {
    if (grid < 2) throw std::invalid_argument("grid needs at least two points");
    for (std::uint64_t i = 0; i < grid; ++i) {
        const double s = upper * static_cast<double>(i) / static_cast<double>(grid - 1);
        const double ga = gf_eval(a, s);
        const double gb = gf_eval(b, s);
        if (ga < gb - kGfSlack) {
            return {GfOrderingVerdict::Status::Fails, s,
                    "G_p°(" + std::to_string(s) + ") = " + std::to_string(ga) + " < " + std::to_string(gb)};
        }
    }
    return {GfOrderingVerdict::Status::Holds, std::nullopt, {}};
}

}  // namespace

GfOrderingVerdict gf_circ_ordering_region(const FinitePmf& p, const FinitePmf& q, std::uint64_t ell,
                                          std::uint64_t grid) {
    if (!check_order(p, q, OrderRelation::ICV).holds)
        return {GfOrderingVerdict::Status::HypothesisViolated, std::nullopt, "p <=_icv q fails"};
    for (std::uint64_t i = 0; i <= ell; ++i) {
        if (std::abs(p[i] - q[i]) > 1e-12) {
            return {GfOrderingVerdict::Status::HypothesisViolated, std::nullopt,
                    "p(" + std::to_string(i) + ") != q(" + std::to_string(i) + ")"};
        }
    }
    const double upper = std::exp(-2.0 / static_cast<double>(ell + 1));
    return grid_compare(downshift_size_bias(DegreeDistribution(p)), downshift_size_bias(DegreeDistribution(q)),
                        upper, grid);
}

bool mixing_icv(const MixingDistribution& mu, const MixingDistribution& nu) {
    using detail::Overloaded;
    auto unsupported = [](const auto&, const auto&) -> bool {
        throw MathError("icv decision supports Dirac and Pareto mixing only");
    };
    return std::visit(
        Overloaded{
            [](const Dirac& a, const Dirac& b) { return a.x <= b.x; },
            [](const Pareto& a, const Pareto& b) {
                return pareto_order(a.alpha, a.scale, b.alpha, b.scale).icv;
            },
            // Jensen: E phi(Y) <= phi(E Y) <= phi(x) for increasing concave phi.
            [](const Pareto& a, const Dirac& b) { return mean(MixingDistribution{a}) <= b.x * (1 + 1e-12); },
            // delta_x <=_st Pareto(alpha, c) iff x <= c, and min(., x) separates otherwise.
            [](const Dirac& a, const Pareto& b) { return a.x <= b.scale; },
            unsupported,
        },
        mu, nu);
}

GfOrderingVerdict mpoi_icv_gf_ordering(const MixingDistribution& mu, const MixingDistribution& nu,
                                       std::uint64_t grid) {
    const double c = std::min(support_lower(mu), support_lower(nu));
    if (std::holds_alternative<Lognormal>(mu) || std::holds_alternative<Lognormal>(nu) || c < 2.0)
        throw MathError("mixing supports must lie in [c, inf) with c >= 2, got c = " + std::to_string(c));
    if (!mixing_icv(mu, nu)) return {GfOrderingVerdict::Status::HypothesisViolated, std::nullopt, "mu <=_icv nu fails"};
    const auto p_circ = downshift_size_bias(DegreeDistribution(MixedPoisson{mu}));
    const auto q_circ = downshift_size_bias(DegreeDistribution(MixedPoisson{nu}));
    return grid_compare(p_circ, q_circ, 1.0 - 2.0 / c, grid);
}

}  // namespace cmgiant
