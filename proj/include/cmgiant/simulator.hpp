#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "cmgiant/distributions.hpp"

namespace cmgiant {

/// Degrees of nodes 0..n-1 with an even total.
class DegreeSequence {
public:
    explicit DegreeSequence(std::vector<std::uint64_t> degrees);

    const std::vector<std::uint64_t>& degrees() const { return degrees_; }
    std::size_t size() const { return degrees_.size(); }
    std::uint64_t total() const { return total_; }

private:
    std::vector<std::uint64_t> degrees_;
    std::uint64_t total_ = 0;
};

/// Undirected multigraph on nodes 0..n-1; loops and parallel edges allowed.
struct MultiGraph {
    using Edge = std::pair<std::uint32_t, std::uint32_t>;

    std::uint32_t n = 0;
    std::vector<Edge> edges;

    /// Degree of each node, a loop counting twice.
    std::vector<std::uint64_t> degrees() const;
};

struct ComponentStats {
    std::uint64_t n = 0;
    std::uint64_t reps = 0;
    std::vector<double> fractions;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for one replicate
    std::optional<double> predicted_zeta;
    /// Degree law has p(2) = 1 or infinite second moment.
    bool outside_regularity = false;
};

/// n i.i.d. draws from d. An odd total is fixed by adding one to a uniformly
/// chosen node. Deterministic in seed.
DegreeSequence sample_degree_sequence(const DegreeDistribution& d, std::uint64_t n, std::uint64_t seed);

/// Uniform perfect matching of the stubs: shuffle and pair consecutive entries.
MultiGraph match_stubs(const DegreeSequence& ds, std::uint64_t seed);

/// |C_max| / n.
double largest_component_fraction(const MultiGraph& g);

/// reps independent sample-match-measure replicates; replicate i is seeded from
/// (seed, i) so results do not depend on scheduling.
ComponentStats simulate_zeta(const DegreeDistribution& d, std::uint64_t n, std::uint64_t reps, std::uint64_t seed,
                             MultiGraph* last_graph = nullptr);

/// One "u v" line per edge, nodes 1-indexed.
void write_edge_list(std::ostream& os, const MultiGraph& g);

/// SplitMix64 finalizer, used to derive independent replicate seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cmgiant
