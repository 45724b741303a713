#pragma once

#include "iab/geometry.hpp"
#include "iab/network.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace iab {

enum class ConstraintKind { MinDistance, ForbiddenAreas };

/// Either a minimum inter-node distance or a set of forbidden disks.
struct PlacementConstraint {
    ConstraintKind kind = ConstraintKind::MinDistance;
    scalar_t min_distance = 0.0;          ///< meters, MinDistance only
    std::vector<DiskRegion> forbidden;    ///< ForbiddenAreas only

    static PlacementConstraint min_distance_of(scalar_t r_th);
    static PlacementConstraint forbidden_areas(std::vector<DiskRegion> disks);

    void validate(const DiskRegion& area) const;
    /// Independent check of a finished layout.
    bool satisfied_by(const PointList& nodes) const;
};

enum class StopMode { FixedIterations, NoImprovementWindow };

struct OptimizerConfig {
    std::size_t n_iterations = 20;
    std::size_t max_resample_attempts = 10000;
    std::size_t mc_trials_per_candidate = 50;
    std::optional<PointList> donors_fixed;
    StopMode stop_mode = StopMode::FixedIterations;
    std::size_t window = 10;
    /// Seeds for candidate scoring; shared by all candidates. Defaults to a
    /// derivation of the master seed.
    std::optional<EvaluationSeeds> candidate_seeds;
    unsigned parallelism = 1;

    void validate() const;
};

struct CandidateRecord {
    std::size_t iteration = 0;
    scalar_t coverage = 0.0;
};

struct PlacementResult {
    Deployment locations;
    scalar_t coverage = 0.0;
    scalar_t std_error = 0.0;
    std::vector<CandidateRecord> candidate_history;
};

/// Sequential placement: each node is drawn uniformly on the area and redrawn
/// until it is farther than r_th from every node already placed. `placed`
/// holds nodes whose positions are fixed in advance; they are checked against
/// but not returned.
PointList sample_min_distance_layout(std::size_t n_nodes, const DiskRegion& area, scalar_t r_th,
                                     std::size_t max_attempts, Rng& rng, const PointList& placed = {});

/// Uniform placement where any node inside a forbidden disk is redrawn.
/// Points on a disk boundary count as outside.
PointList sample_forbidden_area_layout(std::size_t n_nodes, const DiskRegion& area,
                                       const std::vector<DiskRegion>& forbidden, std::size_t max_attempts, Rng& rng);

/// Draws one layout that satisfies the constraint, donors first.
Deployment sample_constrained_deployment(const PlacementConstraint& constraint, std::size_t n_donors,
                                         std::size_t n_children, const DiskRegion& area, std::size_t max_attempts,
                                         Rng& rng, const std::optional<PointList>& donors_fixed = std::nullopt);

/// Rejection-sampling search: draws independent constrained candidates,
/// scores each by Monte-Carlo coverage and keeps the best (earliest on ties).
PlacementResult optimize_placement(const PlacementConstraint& constraint, std::size_t n_donors,
                                   std::size_t n_children, const Scenario& scenario, const RadioConfig& radio,
                                   const ChannelConfig& channel, const OptimizerConfig& config,
                                   std::uint64_t master_seed);

/// Hexagonal baseline; the first point (the region center) is the donor.
Deployment baseline_hexagonal(std::size_t n_nodes, const DiskRegion& area, std::size_t n_donors = 1);

/// Uniform baseline without coverage optimization. With forbidden disks the
/// nodes are rejected into the unconstrained region.
Deployment baseline_random(std::size_t n_donors, std::size_t n_children, const DiskRegion& area, Rng& rng,
                           const std::vector<DiskRegion>& forbidden = {}, std::size_t max_attempts = 10000);

}  // namespace iab
