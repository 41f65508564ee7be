#ifndef RMH_SAMPLING_HPP
#define RMH_SAMPLING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rmh/hierarchy.hpp"
#include "rmh/rng.hpp"

namespace rmh {

struct BlockSummary;

/// Simple, hollow, undirected graph; edges stored with u < v.
struct GraphSample {
    long long vertex_count = 0;
    Membership membership;
    std::vector<std::pair<int, int>> edges;
};

/// One independent Beta(shape_a, shape_b) draw per tied group, broadcast to
/// the group's cells and clipped to [0.01, 0.99].
FlatModel draw_model_parameters(const ParameterGroups& groups,
                                std::vector<long long> block_sizes, double shape_a,
                                double shape_b, Seed seed);

/// Redraws `count` cells chosen uniformly without replacement from cells in
/// tied groups (|cells| >= 2), breaking their ties; everything else unchanged.
FlatModel corrupt_parameters(const FlatModel& model, const ParameterGroups& groups,
                             int count, double shape_a, double shape_b, Seed seed);

enum class PerturbMode { population, per_individual };

/// Base model plus small symmetric per-cell offsets, Normal(0, (sd*B)^2),
/// with base + offset clipped into [0.001, 0.999].  Population mode draws the
/// offsets once for every graph; per-individual mode draws fresh offsets per
/// graph index.
struct PerturbedModel {
    FlatModel base;
    double relative_sd = 0.0;
    PerturbMode mode = PerturbMode::population;
    Seed seed;
    std::vector<double> population_deviations;  // empty in per-individual mode

    /// Effective cell probabilities for one graph of the population.
    FlatModel effective(std::uint64_t graph_index = 0) const;

    /// Population-mode offsets; throws in per-individual mode.
    const std::vector<double>& deviations() const;
};

PerturbedModel perturb_parameters(const FlatModel& model, double relative_sd,
                                  PerturbMode mode, Seed seed);

/// Conditional SBM draw: each dyad i < j present independently with
/// probability B[tau_i, tau_j].  Deterministic given the seed.
GraphSample sample_conditional_sbm(const FlatModel& model, const Membership& tau,
                                   Seed seed);

GraphSample sample_conditional_sbm(const PerturbedModel& model, const Membership& tau,
                                   std::uint64_t graph_index, Seed seed);

/// Count-level draw: per-cell Binomial(dyads, p) with the canonical
/// membership implied by the model's block sizes.  Distributionally identical
/// to summarize(sample_conditional_sbm(...)) and used where only counts are
/// consumed.
BlockSummary sample_block_summary(const FlatModel& model, Seed seed);

/// Signal-to-noise ratio of the tied structure, as printed: max over groups
/// of the dyad-mean expectation divided by the summed squared deviations of
/// cell expectations from the group mean.  +inf when any group with positive
/// mean has zero deviation (exact repetition saturates the null).
double signal_to_noise(const PerturbedModel& model, const ParameterGroups& groups);

} // namespace rmh

#endif
