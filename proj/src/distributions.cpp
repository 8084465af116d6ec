#include "cmgiant/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>

#include "cmgiant/errors.hpp"
#include "overloaded.hpp"

namespace cmgiant {

namespace {

using detail::Overloaded;

constexpr double kInf = std::numeric_limits<double>::infinity();

double poisson_pmf(double lambda, std::uint64_t k) {
    if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

double binomial_pmf(std::uint64_t n, double p, std::uint64_t k) {
    if (k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    const double log_choose = std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
    return std::exp(log_choose + kd * std::log(p) + (nd - kd) * std::log1p(-p));
}

void check_unit(double s, const char* what) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void require_finite_positive_mean(double m, const char* op) {
    if (!(m > 0.0) || !std::isfinite(m))
        throw MathError(std::string(op) + " needs a finite nonzero mean, got " + std::to_string(m));
}

}  // namespace

// --- FinitePmf -------------------------------------------------------------

FinitePmf::FinitePmf(Masses masses) {
    double sum = 0.0;
    for (const auto& [k, w] : masses) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("pmf mass at " + std::to_string(k) + " is not a finite nonnegative number");
        if (w > 0.0) {
            masses_.emplace(k, w);
            sum += w;
        }
    }
    if (masses_.empty()) throw std::invalid_argument("pmf has no positive mass");
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw std::invalid_argument("pmf masses sum to " + std::to_string(sum) + ", not 1");
}

FinitePmf FinitePmf::point_mass(std::uint64_t k) { return FinitePmf(Masses{{k, 1.0}}); }

FinitePmf FinitePmf::from_dense(std::span<const double> weights, bool normalize) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    Masses m;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] != 0.0) m.emplace(k, normalize && sum > 0.0 ? weights[k] / sum : weights[k]);
    }
    if (normalize && !(sum > 0.0)) throw std::invalid_argument("weights must have positive sum");
    return FinitePmf(std::move(m));
}

double FinitePmf::operator[](std::uint64_t k) const {
    auto it = masses_.find(k);
    return it == masses_.end() ? 0.0 : it->second;
}

std::vector<double> FinitePmf::dense() const {
    std::vector<double> out(max_support() + 1, 0.0);
    for (const auto& [k, w] : masses_) out[k] = w;
    return out;
}

FinitePmf size_bias(const FinitePmf& p) {
    double m = 0.0;
    for (const auto& [k, w] : p.masses()) m += static_cast<double>(k) * w;
    require_finite_positive_mean(m, "size biasing");
    FinitePmf::Masses out;
    for (const auto& [k, w] : p.masses())
        if (k > 0) out.emplace(k, static_cast<double>(k) * w / m);
    return FinitePmf(std::move(out));
}

FinitePmf downshift_size_bias(const FinitePmf& p) {
    const auto biased = size_bias(p);
    FinitePmf::Masses out;
    for (const auto& [k, w] : biased.masses()) out.emplace(k - 1, w);
    return FinitePmf(std::move(out));
}

FinitePmf thin(const FinitePmf& p, double r) {
    check_unit(r, "thinning probability");
    if (r == 1.0) return p;
    if (r == 0.0) return FinitePmf::point_mass(0);
    const auto base = p.dense();
    std::vector<double> out(base.size(), 0.0);
    for (std::uint64_t l = 0; l < base.size(); ++l) {
        if (base[l] == 0.0) continue;
        for (std::uint64_t k = 0; k <= l; ++k) out[k] += base[l] * binomial_pmf(l, r, k);
    }
    // Binomial rows sum to one only up to rounding; restore exact normalization.
    return FinitePmf::from_dense(out, true);
}

// --- DegreeDistribution ----------------------------------------------------

bool operator==(const Thinned& a, const Thinned& b) {
    if (a.r != b.r) return false;
    if (a.base == b.base) return true;
    return a.base && b.base && *a.base == *b.base;
}

DegreeDistribution::DegreeDistribution(FinitePmf pmf) : v_(std::move(pmf)) {}

DegreeDistribution::DegreeDistribution(Poisson d) : v_(d) {
    if (!(d.lambda > 0.0) || !std::isfinite(d.lambda)) throw std::invalid_argument("poisson needs lambda > 0");
}

DegreeDistribution::DegreeDistribution(Binomial d) : v_(d) { check_unit(d.p, "binomial p"); }

DegreeDistribution::DegreeDistribution(MixedPoisson d) : v_(d) { validate(d.mixing); }

DegreeDistribution::DegreeDistribution(Thinned d) : v_(d) {
    if (!d.base) throw std::invalid_argument("thinned distribution needs a base");
    check_unit(d.r, "thinning probability");
}

DegreeDistribution DegreeDistribution::thinned(DegreeDistribution base, double r) {
    return DegreeDistribution(Thinned{std::make_shared<const DegreeDistribution>(std::move(base)), r});
}

DegreeDistribution thin(const DegreeDistribution& d, double r) {
    check_unit(r, "thinning probability");
    if (r == 1.0) return d;
    if (r == 0.0) return FinitePmf::point_mass(0);
    return std::visit(
        Overloaded{
            [r](const FinitePmf& p) -> DegreeDistribution {
                if (p.masses().size() == 1) return Binomial{p.max_support(), r};
                return thin(p, r);
            },
            [r](const Poisson& p) -> DegreeDistribution { return Poisson{p.lambda * r}; },
            [r](const Binomial& b) -> DegreeDistribution { return Binomial{b.n, b.p * r}; },
            [r](const MixedPoisson& m) -> DegreeDistribution {
                if (const auto* dirac = std::get_if<Dirac>(&m.mixing)) {
                    if (dirac->x == 0.0) return FinitePmf::point_mass(0);
                    return Poisson{dirac->x * r};
                }
                return MixedPoisson{scale(m.mixing, r)};
            },
            [r](const Thinned& t) -> DegreeDistribution { return thin(*t.base, t.r * r); },
        },
        d.variant());
}

double pmf(const DegreeDistribution& d, std::uint64_t k) {
    return std::visit(Overloaded{
                          [k](const FinitePmf& p) { return p[k]; },
                          [k](const Poisson& p) { return poisson_pmf(p.lambda, k); },
                          [k](const Binomial& b) { return binomial_pmf(b.n, b.p, k); },
                          [k](const MixedPoisson& m) { return mixed_poisson_pmf(m.mixing, k); },
                          [k](const Thinned& t) { return pmf(thin(*t.base, t.r), k); },
                      },
                      d.variant());
}

double gf_eval(const DegreeDistribution& d, double s) {
    check_unit(s, "generating function argument");
    return std::visit(Overloaded{
                          [s](const FinitePmf& p) {
                              const auto w = p.dense();
                              double acc = 0.0;
                              for (auto it = w.rbegin(); it != w.rend(); ++it) acc = acc * s + *it;
                              return acc;
                          },
                          [s](const Poisson& p) { return std::exp(p.lambda * (s - 1.0)); },
                          [s](const Binomial& b) {
                              return std::pow(1.0 - b.p + b.p * s, static_cast<double>(b.n));
                          },
                          [s](const MixedPoisson& m) { return laplace_transform(m.mixing, 1.0 - s); },
                          [s](const Thinned& t) { return gf_eval(*t.base, 1.0 - t.r + t.r * s); },
                      },
                      d.variant());
}

double gf_derivative(const DegreeDistribution& d, double s) {
    if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("generating function derivative needs s in [0, 1)");
    return std::visit(
        Overloaded{
            [s](const FinitePmf& p) {
                const auto w = p.dense();
                double acc = 0.0;
                for (std::size_t k = w.size() - 1; k >= 1; --k) acc = acc * s + static_cast<double>(k) * w[k];
                return acc;
            },
            [s](const Poisson& p) { return p.lambda * std::exp(p.lambda * (s - 1.0)); },
            [s](const Binomial& b) {
                if (b.n == 0) return 0.0;
                return static_cast<double>(b.n) * b.p * std::pow(1.0 - b.p + b.p * s, static_cast<double>(b.n - 1));
            },
            [s](const MixedPoisson& m) {
                // G'(s) = m1(mu) L_{mu*}(1 - s): no numerical differentiation.
                const double m1 = mean(m.mixing);
                if (m1 == 0.0) return 0.0;
                if (!std::isfinite(m1)) {
                    throw MathError("generating function derivative of an infinite-mean mixed Poisson law");
                }
                return m1 * laplace_transform(size_bias(m.mixing), 1.0 - s);
            },
            [s](const Thinned& t) {
                if (t.r == 0.0) return 0.0;
                return t.r * gf_derivative(*t.base, 1.0 - t.r + t.r * s);
            },
        },
        d.variant());
}

double moment(const DegreeDistribution& d, int i) {
    if (i != 1 && i != 2) throw std::invalid_argument("moment order must be 1 or 2");
    return std::visit(Overloaded{
                          [i](const FinitePmf& p) {
                              double acc = 0.0;
                              for (const auto& [k, w] : p.masses()) {
                                  const double kd = static_cast<double>(k);
                                  acc += (i == 1 ? kd : kd * kd) * w;
                              }
                              return acc;
                          },
                          [i](const Poisson& p) { return i == 1 ? p.lambda : p.lambda + p.lambda * p.lambda; },
                          [i](const Binomial& b) {
                              const double m = static_cast<double>(b.n) * b.p;
                              return i == 1 ? m : m * (1.0 - b.p) + m * m;
                          },
                          [i](const MixedPoisson& m) {
                              const double m1 = mean(m.mixing);
                              return i == 1 ? m1 : second_moment(m.mixing) + m1;
                          },
                          [i](const Thinned& t) {
                              const double m1 = moment(*t.base, 1);
                              if (i == 1) return t.r * m1;
                              const double m2 = moment(*t.base, 2);
                              if (!std::isfinite(m2)) return kInf;
                              return t.r * t.r * m2 + t.r * (1.0 - t.r) * m1;
                          },
                      },
                      d.variant());
}

double mean(const DegreeDistribution& d) { return moment(d, 1); }

double variance(const DegreeDistribution& d) {
    const double m1 = moment(d, 1);
    const double m2 = moment(d, 2);
    if (!std::isfinite(m2)) return kInf;
    return m2 - m1 * m1;
}

DegreeDistribution size_bias(const DegreeDistribution& d) {
    if (const auto* p = d.get_if<FinitePmf>()) return size_bias(*p);
    require_finite_positive_mean(mean(d), "size biasing");
    return size_bias(truncate(d, 1e-13));
}

DegreeDistribution downshift_size_bias(const DegreeDistribution& d) {
    require_finite_positive_mean(mean(d), "downshifted size biasing");
    return std::visit(Overloaded{
                          [](const FinitePmf& p) -> DegreeDistribution { return downshift_size_bias(p); },
                          [](const Poisson& p) -> DegreeDistribution { return p; },
                          [](const Binomial& b) -> DegreeDistribution {
                              if (b.n == 1) return FinitePmf::point_mass(0);
                              return Binomial{b.n - 1, b.p};
                          },
                          [](const MixedPoisson& m) -> DegreeDistribution {
                              return MixedPoisson{size_bias(m.mixing)};
                          },
                          [](const Thinned& t) -> DegreeDistribution {
                              // Downshifted size biasing commutes with thinning.
                              return DegreeDistribution::thinned(downshift_size_bias(*t.base), t.r);
                          },
                      },
                      d.variant());
}

FinitePmf truncate(const DegreeDistribution& d, double tail_tol) {
    if (!(tail_tol > 0.0)) throw std::invalid_argument("truncation tail tolerance must be positive");
    if (!std::isfinite(mean(d))) throw MathError("truncation needs a finite mean");
    if (const auto* p = d.get_if<FinitePmf>()) {
        double cum = 0.0;
        FinitePmf::Masses kept;
        for (const auto& [k, w] : p->masses()) {
            kept.emplace(k, w);
            cum += w;
            if (cum >= 1.0 - tail_tol) break;
        }
        for (auto& [k, w] : kept) w /= cum;
        return FinitePmf(std::move(kept));
    }
    // Thinned laws are summed in their simplified form so each mass is O(1) work.
    if (const auto* t = d.get_if<Thinned>()) return truncate(thin(*t->base, t->r), tail_tol);
    if (const auto* m = d.get_if<MixedPoisson>()) {
        // Poi(x) exceeds the cap with probability >= 1/2 once x >= 2 * cap, so
        // half the mixing tail there bounds the mass that truncation would lose.
        const double x = 2.0 * static_cast<double>(kTruncationCap);
        const double tail = std::visit(Overloaded{[&](const Dirac& dd) { return dd.x >= x ? 1.0 : 0.0; },
                                                  [&](const Pareto& pa) { return std::pow(std::min(1.0, pa.scale / x), pa.alpha); },
                                                  [&](const Lognormal& ln) {
                                                      return 0.5 * std::erfc((std::log(x) - ln.location) /
                                                                             std::sqrt(2.0 * ln.scale2));
                                                  }},
                                       m->mixing);
        if (0.5 * tail > tail_tol) {
            throw MathError("truncation needs K > " + std::to_string(kTruncationCap) + " to reach tail tolerance " +
                            std::to_string(tail_tol));
        }
    }
    std::vector<double> w;
    double cum = 0.0;
    for (std::uint64_t k = 0;; ++k) {
        if (k > kTruncationCap) {
            throw MathError("truncation needs K > " + std::to_string(kTruncationCap) +
                            " to reach tail tolerance " + std::to_string(tail_tol));
        }
        const double mass = pmf(d, k);
        w.push_back(mass);
        cum += mass;
        if (cum >= 1.0 - tail_tol) break;
        if (const auto* b = d.get_if<Binomial>(); b && k >= b->n) break;
    }
    return FinitePmf::from_dense(w, true);
}

}  // namespace cmgiant
