#include "cmgiant/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "cmgiant/branching.hpp"
#include "cmgiant/errors.hpp"
#include "overloaded.hpp"

namespace cmgiant {

namespace {

using detail::Overloaded;
using Rng = std::mt19937_64;

class DegreeSampler {
public:
    explicit DegreeSampler(const DegreeDistribution& d) : d_(d) {
        if (const auto* p = d.get_if<FinitePmf>()) {
            double acc = 0.0;
            for (const auto& [k, w] : p->masses()) {
                acc += w;
                values_.push_back(k);
                cdf_.push_back(acc);
            }
            cdf_.back() = std::numeric_limits<double>::infinity();
        }
    }

    std::uint64_t operator()(Rng& rng) const { return draw(d_, rng); }

private:
    std::uint64_t draw(const DegreeDistribution& d, Rng& rng) const {
        return std::visit(
            Overloaded{
                [&](const FinitePmf& p) -> std::uint64_t {
                    if (&d == &d_) {
                        const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
                        return values_[static_cast<std::size_t>(it - cdf_.begin())];
                    }
                    return DegreeSampler(p)(rng);
                },
                [&](const Poisson& p) { return poisson(p.lambda, rng); },
                [&](const Binomial& b) { return std::binomial_distribution<std::uint64_t>(b.n, b.p)(rng); },
                [&](const MixedPoisson& m) { return poisson(draw_mixing(m.mixing, rng), rng); },
                [&](const Thinned& t) {
                    const std::uint64_t k = draw(*t.base, rng);
                    return k == 0 ? k : std::binomial_distribution<std::uint64_t>(k, t.r)(rng);
                },
            },
            d.variant());
    }

    static std::uint64_t poisson(double mean, Rng& rng) {
        if (!(mean > 0.0)) return 0;
        return std::poisson_distribution<std::uint64_t>(mean)(rng);
    }

    static double draw_mixing(const MixingDistribution& mu, Rng& rng) {
        return std::visit(Overloaded{
                              [](const Dirac& d) { return d.x; },
                              [&rng](const Pareto& p) {
                                  // 1 - U lies in (0, 1].
                                  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                                  return p.scale * std::pow(1.0 - u, -1.0 / p.alpha);
                              },
                              [&rng](const Lognormal& l) {
                                  const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
                                  return std::exp(l.location + std::sqrt(l.scale2) * z);
                              },
                          },
                          mu);
    }

    const DegreeDistribution& d_;
    std::vector<std::uint64_t> values_;
    std::vector<double> cdf_;
};

class UnionFind {
public:
    explicit UnionFind(std::uint32_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

    std::uint32_t largest() const {
        std::uint32_t best = 0;
        for (std::uint32_t i = 0; i < parent_.size(); ++i)
            if (parent_[i] == i) best = std::max(best, size_[i]);
        return best;
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
};

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

DegreeSequence::DegreeSequence(std::vector<std::uint64_t> degrees) : degrees_(std::move(degrees)) {
    total_ = std::accumulate(degrees_.begin(), degrees_.end(), std::uint64_t{0});
    if (total_ % 2 != 0) throw std::invalid_argument("degree sequence has an odd total");
}

std::vector<std::uint64_t> MultiGraph::degrees() const {
    std::vector<std::uint64_t> deg(n, 0);
    for (const auto& [u, v] : edges) {
        ++deg[u];
        ++deg[v];
    }
    return deg;
}

DegreeSequence sample_degree_sequence(const DegreeDistribution& d, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("degree sequence needs n >= 1");
    if (n > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("node count exceeds 2^32 - 1");
    Rng rng(seed);
    const DegreeSampler sampler(d);
    std::vector<std::uint64_t> deg(n);
    std::uint64_t total = 0;
    for (auto& k : deg) {
        k = sampler(rng);
        total += k;
    }
    if (total % 2 != 0) ++deg[std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng)];
    return DegreeSequence(std::move(deg));
}

MultiGraph match_stubs(const DegreeSequence& ds, std::uint64_t seed) {
    MultiGraph g;
    g.n = static_cast<std::uint32_t>(ds.size());
    std::vector<std::uint32_t> stubs;
    stubs.reserve(ds.total());
    for (std::uint32_t i = 0; i < g.n; ++i) stubs.insert(stubs.end(), ds.degrees()[i], i);
    Rng rng(seed);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    g.edges.reserve(stubs.size() / 2);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) g.edges.emplace_back(stubs[i], stubs[i + 1]);
    return g;
}

double largest_component_fraction(const MultiGraph& g) {
    if (g.n == 0) throw std::invalid_argument("largest component of an empty graph");
    UnionFind uf(g.n);
    for (const auto& [u, v] : g.edges)
        if (u != v) uf.unite(u, v);
    return static_cast<double>(uf.largest()) / static_cast<double>(g.n);
}

ComponentStats simulate_zeta(const DegreeDistribution& d, std::uint64_t n, std::uint64_t reps, std::uint64_t seed,
                             MultiGraph* last_graph) {
    if (n == 0 || reps == 0) throw std::invalid_argument("simulation needs n >= 1 and reps >= 1");
    ComponentStats stats;
    stats.n = n;
    stats.reps = reps;
    stats.fractions.assign(reps, 0.0);

    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i = next++; i < reps; i = next++) {
            const auto ds = sample_degree_sequence(d, n, mix_seed(seed, 2 * i));
            auto g = match_stubs(ds, mix_seed(seed, 2 * i + 1));
            stats.fractions[i] = largest_component_fraction(g);
            if (last_graph && i == reps - 1) *last_graph = std::move(g);
        }
    };
    const auto hw = std::max(1u, std::thread::hardware_concurrency());
    const auto n_threads = static_cast<unsigned>(std::min<std::uint64_t>(hw, reps));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    stats.mean = std::accumulate(stats.fractions.begin(), stats.fractions.end(), 0.0) / static_cast<double>(reps);
    if (reps > 1) {
        double ss = 0.0;
        for (double f : stats.fractions) ss += (f - stats.mean) * (f - stats.mean);
        stats.stddev = std::sqrt(ss / static_cast<double>(reps - 1));
    }
    try {
        stats.predicted_zeta = zeta_cm(d).zeta_cm;
    } catch (const std::exception&) {
        stats.predicted_zeta.reset();
    }
    stats.outside_regularity = !std::isfinite(moment(d, 2)) || pmf(d, 2) == 1.0;
    return stats;
}

void write_edge_list(std::ostream& os, const MultiGraph& g) {
    for (const auto& [u, v] : g.edges) os << (u + 1) << ' ' << (v + 1) << '\n';
}

}  // namespace cmgiant
