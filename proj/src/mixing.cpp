#include "cmgiant/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cmgiant/errors.hpp"
#include "overloaded.hpp"

namespace cmgiant {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTol = 1e-13;
constexpr unsigned kQuadDepth = 20;

using detail::Overloaded;

// Absolute error floor, relative to the whole integral.
constexpr double kQuadFloor = 1e-15;

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// One fixed 31-point Kronrod rule on a finite interval.
template <class F>
double kronrod(const F& f, double a, double b) {
    return GK::integrate(f, a, b, 0, 0.0);
}

// Bisects until the two halves reproduce their parent within abs_tol. Boost's
// own adaptive driver compares Gauss and Kronrod estimates, whose difference
// has a relative floor near 1e-13 for the 31-point pair; comparing successive
// refinements does not.
template <class F>
double adapt(const F& f, double a, double b, double whole, double abs_tol, unsigned depth) {
    const double mid = 0.5 * (a + b);
    const double left = kronrod(f, a, mid);
    const double right = kronrod(f, mid, b);
    const double refined = left + right;
    if (depth == 0 || std::abs(refined - whole) <= abs_tol) return refined;
    const double sub_tol = abs_tol * 0.5;
    return adapt(f, a, mid, left, sub_tol, depth - 1) + adapt(f, mid, b, right, sub_tol, depth - 1);
}

// Integrates f over consecutive breakpoints; the last breakpoint may be +inf
// and the first -inf, mapped onto [0, 1) by z = end +- u / (1 - u). Each piece
// is refined to max(kQuadTol * |piece|, kQuadFloor * |total|).
template <class F>
double integrate_piecewise(F f, std::vector<double> breaks) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double a, double b) {
                                 return std::isfinite(a) && std::isfinite(b) &&
                                        std::abs(a - b) <= 1e-12 * (1 + std::abs(a));
                             }),
                 breaks.end());
    struct Piece {
        std::function<double(double)> g;
        double a, b, rough;
    };
    std::vector<Piece> pieces;
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i], hi = breaks[i + 1];
        Piece p;
        if (std::isinf(hi)) {
            p.g = [&f, lo](double u) {
                const double w = 1.0 / (1.0 - u);
                return f(lo + u * w) * w * w;
            };
            p.a = 0.0;
            p.b = 1.0;
        } else if (std::isinf(lo)) {
            p.g = [&f, hi](double u) {
                const double w = 1.0 / (1.0 - u);
                return f(hi - u * w) * w * w;
            };
            p.a = 0.0;
            p.b = 1.0;
        } else {
            p.g = [&f](double z) { return f(z); };
            p.a = lo;
            p.b = hi;
        }
        p.rough = kronrod(p.g, p.a, p.b);
        scale += std::abs(p.rough);
        pieces.push_back(std::move(p));
    }
    double total = 0.0;
    for (const auto& p : pieces) {
        const double tol = std::max(kQuadTol * std::abs(p.rough), kQuadFloor * scale);
        total += adapt(p.g, p.a, p.b, p.rough, tol, kQuadDepth);
    }
    return total;
}

// Breakpoints placed around a feature at log-position `center` of log-width `width`,
// expressed in the integration variable via `to_var` (monotone increasing).
template <class ToVar>
void add_feature(std::vector<double>& breaks, double center, double width, ToVar to_var) {
    for (double m : {-24.0, -8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0, 24.0}) {
        breaks.push_back(to_var(center + m * width));
    }
}

// E f(X) for X ~ Pareto(alpha, c), written with X = c e^Z, Z ~ Exp(alpha).
// log_f receives (log x, x). Features of f sit at log x = feature_log_x.
template <class LogF>
double pareto_expectation(const Pareto& par, LogF log_f, double feature_log_x, double feature_width) {
    const double a = par.alpha;
    const double log_c = std::log(par.scale);
    auto integrand = [&](double z) {
        const double log_x = log_c + z;
        const double lv = log_f(log_x, std::exp(log_x)) + std::log(a) - a * z;
        return std::exp(lv);
    };
    std::vector<double> breaks{0.0, kInf};
    for (double m : {0.25, 1.0, 4.0, 16.0, 64.0}) breaks.push_back(m / a);
    auto to_z = [&](double log_x) { return log_x - log_c; };
    add_feature(breaks, feature_log_x, feature_width, to_z);
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [](double z) { return !(z >= 0.0); }), breaks.end());
    return integrate_piecewise(integrand, std::move(breaks));
}

// E f(X) for X = exp(b + sigma Z), Z standard normal.
template <class LogF>
double lognormal_expectation(const Lognormal& ln, LogF log_f, double feature_log_x, double feature_width) {
    const double sigma = std::sqrt(ln.scale2);
    const double b = ln.location;
    constexpr double kLogSqrt2Pi = 0.91893853320467274178;
    auto integrand = [&](double z) {
        const double log_x = b + sigma * z;
        const double lv = log_f(log_x, std::exp(log_x)) - 0.5 * z * z - kLogSqrt2Pi;
        return std::exp(lv);
    };
    std::vector<double> breaks{-kInf, kInf};
    for (double z : {-12.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 12.0}) breaks.push_back(z);
    auto to_z = [&](double log_x) { return (log_x - b) / sigma; };
    add_feature(breaks, feature_log_x, feature_width, to_z);
    // Far outside +-40 the Gaussian weight underflows; keep the mesh finite there.
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [](double z) { return std::isfinite(z) && std::abs(z) > 40.0; }),
                 breaks.end());
    return integrate_piecewise(integrand, std::move(breaks));
}

// lgamma(k + 1) - k log k + k, without cancelling two O(k log k) terms.
double stirling_remainder(double k) {
    if (k < 64.0) return std::lgamma(k + 1.0) - k * std::log(k) + k;
    const double inv = 1.0 / k, inv2 = inv * inv;
    return 0.5 * std::log(2.0 * M_PI * k) + inv / 12.0 * (1.0 - inv2 / 30.0 * (1.0 - inv2 * 2.0 / 7.0));
}

// With x = k r this is -k (r - 1 - log r) - stirling_remainder(k). The naive
// k log x - x - lgamma(k + 1) loses ~1e-6 relative accuracy at k ~ 1e4, and
// that noise stalls the quadrature refinement.
double poisson_log_pmf(std::uint64_t k, double log_x, double x) {
    if (k == 0) return -x;
    const double kd = static_cast<double>(k);
    const double lr = log_x - std::log(kd);
    return -kd * (std::expm1(lr) - lr) - stirling_remainder(kd);
}

}  // namespace

void validate(const MixingDistribution& mu) {
    std::visit(Overloaded{
                   [](const Dirac& d) {
                       if (!(d.x >= 0.0) || !std::isfinite(d.x))
                           throw std::invalid_argument("dirac mixing needs a finite x >= 0");
                   },
                   [](const Pareto& p) {
                       if (!(p.alpha > 0.0) || !std::isfinite(p.alpha))
                           throw std::invalid_argument("pareto mixing needs alpha > 0");
                       if (!(p.scale > 0.0) || !std::isfinite(p.scale))
                           throw std::invalid_argument("pareto mixing needs scale > 0");
                   },
                   [](const Lognormal& l) {
                       if (!std::isfinite(l.location))
                           throw std::invalid_argument("lognormal mixing needs a finite location");
                       if (!(l.scale2 > 0.0) || !std::isfinite(l.scale2))
                           throw std::invalid_argument("lognormal mixing needs scale2 > 0");
                   },
               },
               mu);
}

double mean(const MixingDistribution& mu) {
    return std::visit(Overloaded{
                          [](const Dirac& d) { return d.x; },
                          [](const Pareto& p) { return p.alpha > 1.0 ? p.scale / (1.0 - 1.0 / p.alpha) : kInf; },
                          [](const Lognormal& l) { return std::exp(l.location + 0.5 * l.scale2); },
                      },
                      mu);
}

double second_moment(const MixingDistribution& mu) {
    return std::visit(Overloaded{
                          [](const Dirac& d) { return d.x * d.x; },
                          [](const Pareto& p) {
                              return p.alpha > 2.0 ? p.alpha * p.scale * p.scale / (p.alpha - 2.0) : kInf;
                          },
                          [](const Lognormal& l) { return std::exp(2.0 * l.location + 2.0 * l.scale2); },
                      },
                      mu);
}

double laplace_transform(const MixingDistribution& mu, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("laplace transform needs t >= 0");
    if (t == 0.0) return 1.0;
    auto log_f = [t](double, double x) { return -t * x; };
    const double feature = -std::log(t);  // where t x = 1
    return std::visit(Overloaded{
                          [&](const Dirac& d) { return std::exp(-t * d.x); },
                          [&](const Pareto& p) { return pareto_expectation(p, log_f, feature, 1.0); },
                          [&](const Lognormal& l) { return lognormal_expectation(l, log_f, feature, 1.0); },
                      },
                      mu);
}

double mixed_poisson_pmf(const MixingDistribution& mu, std::uint64_t k) {
    auto log_f = [k](double log_x, double x) { return poisson_log_pmf(k, log_x, x); };
    const double kd = std::max(1.0, static_cast<double>(k));
    const double feature = std::log(kd);
    const double width = 1.0 / std::sqrt(kd);
    return std::visit(Overloaded{
                          [&](const Dirac& d) {
                              if (d.x == 0.0) return k == 0 ? 1.0 : 0.0;
                              return std::exp(poisson_log_pmf(k, std::log(d.x), d.x));
                          },
                          [&](const Pareto& p) { return pareto_expectation(p, log_f, feature, width); },
                          [&](const Lognormal& l) { return lognormal_expectation(l, log_f, feature, width); },
                      },
                      mu);
}

MixingDistribution size_bias(const MixingDistribution& mu) {
    const double m = mean(mu);
    if (!(m > 0.0) || !std::isfinite(m))
        throw MathError("size biasing needs a finite nonzero mean, got " + std::to_string(m));
    return std::visit(Overloaded{
                          [](const Dirac& d) -> MixingDistribution { return d; },
                          [](const Pareto& p) -> MixingDistribution { return Pareto{p.alpha - 1.0, p.scale}; },
                          [](const Lognormal& l) -> MixingDistribution {
                              return Lognormal{l.location + l.scale2, l.scale2};
                          },
                      },
                      mu);
}

MixingDistribution scale(const MixingDistribution& mu, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("mixing scale factor must be positive");
    return std::visit(Overloaded{
                          [r](const Dirac& d) -> MixingDistribution { return Dirac{r * d.x}; },
                          [r](const Pareto& p) -> MixingDistribution { return Pareto{p.alpha, r * p.scale}; },
                          [r](const Lognormal& l) -> MixingDistribution {
                              return Lognormal{l.location + std::log(r), l.scale2};
                          },
                      },
                      mu);
}

double support_lower(const MixingDistribution& mu) {
    return std::visit(Overloaded{
                          [](const Dirac& d) { return d.x; },
                          [](const Pareto& p) { return p.scale; },
                          [](const Lognormal&) { return 0.0; },
                      },
                      mu);
}

}  // namespace cmgiant
