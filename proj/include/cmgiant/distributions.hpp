#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "cmgiant/mixing.hpp"

namespace cmgiant {

/// Probability mass function with finite support on the nonnegative integers.
///
/// Masses are nonnegative and sum to one within 1e-12. Zero masses are never
/// stored, so two pmfs compare equal iff their supports and masses agree.
class FinitePmf {
public:
    using Masses = std::map<std::uint64_t, double>;

    static constexpr double kSumTolerance = 1e-12;

    explicit FinitePmf(Masses masses);

    static FinitePmf point_mass(std::uint64_t k);
    /// Builds from weights indexed by k. With normalize, any finite nonnegative
    /// weights with positive sum are accepted and rescaled.
    static FinitePmf from_dense(std::span<const double> weights, bool normalize = false);

    double operator[](std::uint64_t k) const;
    const Masses& masses() const { return masses_; }
    std::uint64_t max_support() const { return masses_.rbegin()->first; }
    /// Masses for k = 0..max_support().
    std::vector<double> dense() const;

    bool operator==(const FinitePmf&) const = default;

private:
    Masses masses_;
};

struct Poisson {
    double lambda = 1.0;
    bool operator==(const Poisson&) const = default;
};

struct Binomial {
    std::uint64_t n = 1;
    double p = 0.5;
    bool operator==(const Binomial&) const = default;
};

struct MixedPoisson {
    MixingDistribution mixing;
    bool operator==(const MixedPoisson&) const = default;
};

class DegreeDistribution;

/// Lazy r-thinning wrapper: keep each unit of a base draw with probability r.
struct Thinned {
    std::shared_ptr<const DegreeDistribution> base;
    double r = 1.0;
};
bool operator==(const Thinned& a, const Thinned& b);

/// Degree law on the nonnegative integers. Immutable value type.
class DegreeDistribution {
public:
    using Variant = std::variant<FinitePmf, Poisson, Binomial, MixedPoisson, Thinned>;

    DegreeDistribution(FinitePmf pmf);
    DegreeDistribution(Poisson d);
    DegreeDistribution(Binomial d);
    DegreeDistribution(MixedPoisson d);
    DegreeDistribution(Thinned d);

    /// Wraps base as Thinned(base, r) without simplification; see thin().
    static DegreeDistribution thinned(DegreeDistribution base, double r);

    const Variant& variant() const { return v_; }
    template <class T>
    const T* get_if() const { return std::get_if<T>(&v_); }

    bool operator==(const DegreeDistribution& other) const { return v_ == other.v_; }

private:
    Variant v_;
};

double pmf(const DegreeDistribution& d, std::uint64_t k);

/// Generating function G(s) = sum_k s^k p(k), s in [0, 1].
double gf_eval(const DegreeDistribution& d, double s);

/// G'(s) for s in [0, 1).
double gf_derivative(const DegreeDistribution& d, double s);

/// Raw moment of order i in {1, 2}; +inf when divergent.
double moment(const DegreeDistribution& d, int i);
double mean(const DegreeDistribution& d);
double variance(const DegreeDistribution& d);

FinitePmf size_bias(const FinitePmf& p);
/// Finite pmfs are reweighted exactly; parametric laws are truncated first
/// (tail 1e-13), since their size biasing leaves the supported families.
DegreeDistribution size_bias(const DegreeDistribution& d);

/// Downshifted size biasing p°(k) = (k + 1) p(k + 1) / m1(p).
FinitePmf downshift_size_bias(const FinitePmf& p);
DegreeDistribution downshift_size_bias(const DegreeDistribution& d);

/// r-thinning with closed-form simplification for every supported family.
FinitePmf thin(const FinitePmf& p, double r);
DegreeDistribution thin(const DegreeDistribution& d, double r);

/// Smallest K with P(X <= K) >= 1 - tail_tol, masses renormalized.
FinitePmf truncate(const DegreeDistribution& d, double tail_tol);

inline constexpr std::uint64_t kTruncationCap = 1'000'000;

}  // namespace cmgiant
