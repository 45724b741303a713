#include "iab/optimizer.hpp"

#include <string>

namespace iab {

PlacementConstraint PlacementConstraint::min_distance_of(scalar_t r_th) {
    PlacementConstraint c;
    c.kind = ConstraintKind::MinDistance;
    c.min_distance = r_th;
    return c;
}

PlacementConstraint PlacementConstraint::forbidden_areas(std::vector<DiskRegion> disks) {
    PlacementConstraint c;
    c.kind = ConstraintKind::ForbiddenAreas;
    c.forbidden = std::move(disks);
    return c;
}

void PlacementConstraint::validate(const DiskRegion& area) const {
    if (kind == ConstraintKind::MinDistance) {
        if (!(min_distance >= 0) || !std::isfinite(min_distance)) {
            throw Error("PlacementConstraint: minimum distance must be finite and non-negative");
        }
        return;
    }
    for (const auto& d : forbidden) {
        if ((d.center - area.center).norm() >= d.radius + area.radius) {
            throw Error("PlacementConstraint: forbidden disk does not intersect the network area");
        }
    }
}

bool PlacementConstraint::satisfied_by(const PointList& nodes) const {
    if (kind == ConstraintKind::MinDistance) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                if (!((nodes[i] - nodes[j]).norm() > min_distance)) return false;
            }
        }
        return true;
    }
    for (const auto& p : nodes) {
        for (const auto& d : forbidden) {
            if (d.contains_strictly(p)) return false;
        }
    }
    return true;
}

void OptimizerConfig::validate() const {
    if (n_iterations < 1) {
        throw Error("OptimizerConfig: n_iterations must be at least 1");
    }
    if (max_resample_attempts < 1) {
        throw Error("OptimizerConfig: max_resample_attempts must be at least 1");
    }
    if (mc_trials_per_candidate < 1) {
        throw Error("OptimizerConfig: mc_trials_per_candidate must be at least 1");
    }
    if (stop_mode == StopMode::NoImprovementWindow && window < 1) {
        throw Error("OptimizerConfig: improvement window must be at least 1");
    }
}

PointList sample_min_distance_layout(std::size_t n_nodes, const DiskRegion& area, scalar_t r_th,
                                     std::size_t max_attempts, Rng& rng, const PointList& placed) {
    if (n_nodes + placed.size() < 1) {
        throw Error("sample_min_distance_layout: at least one node is required");
    }
    // Each node proposes from its own stream, so node k's proposals do not
    // depend on how many redraws earlier nodes needed.
    const std::uint64_t base = rng();
    const scalar_t r2 = r_th * r_th;
    PointList all = placed;
    PointList out;
    out.reserve(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        Rng proposals = make_stream(base, {i});
        bool ok = false;
        for (std::size_t attempt = 0; attempt < max_attempts && !ok; ++attempt) {
            const Point2D p = sample_uniform_in_disk(area, proposals);
            ok = std::all_of(all.begin(), all.end(), [&](const Point2D& q) { return (p - q).squaredNorm() > r2; });
            if (ok) {
                all.push_back(p);
                out.push_back(p);
            }
        }
        if (!ok) {
            throw InfeasibleError("minimum-distance placement: node " + std::to_string(i) + " could not be placed " +
                                      "farther than " + std::to_string(r_th) + " m from the others after " +
                                      std::to_string(max_attempts) + " attempts",
                                  i);
        }
    }
    return out;
}

PointList sample_forbidden_area_layout(std::size_t n_nodes, const DiskRegion& area,
                                       const std::vector<DiskRegion>& forbidden, std::size_t max_attempts, Rng& rng) {
    const auto allowed = [&](const Point2D& p) {
        return std::none_of(forbidden.begin(), forbidden.end(), [&](const DiskRegion& d) { return d.contains_strictly(p); });
    };
    // Draw all nodes, then redraw the ones that landed in a forbidden disk.
    // Per-node streams keep the first draw of every node independent of the
    // forbidden set.
    const std::uint64_t base = rng();
    std::vector<Rng> proposals;
    PointList nodes;
    nodes.reserve(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        proposals.push_back(make_stream(base, {i}));
        nodes.push_back(sample_uniform_in_disk(area, proposals.back()));
    }
    for (std::size_t i = 0; i < n_nodes; ++i) {
        std::size_t attempts = 0;
        while (!allowed(nodes[i])) {
            if (++attempts > max_attempts) {
                throw InfeasibleError("forbidden-area placement: node " + std::to_string(i) +
                                          " stayed inside a forbidden area after " + std::to_string(max_attempts) +
                                          " attempts",
                                      i);
            }
            nodes[i] = sample_uniform_in_disk(area, proposals[i]);
        }
    }
    return nodes;
}

Deployment sample_constrained_deployment(const PlacementConstraint& constraint, std::size_t n_donors,
                                         std::size_t n_children, const DiskRegion& area, std::size_t max_attempts,
                                         Rng& rng, const std::optional<PointList>& donors_fixed) {
    Deployment d;
    const std::size_t free_donors = donors_fixed ? 0 : n_donors;
    PointList sampled;
    if (constraint.kind == ConstraintKind::MinDistance) {
        sampled = sample_min_distance_layout(free_donors + n_children, area, constraint.min_distance, max_attempts,
                                             rng, donors_fixed.value_or(PointList{}));
    } else {
        sampled = sample_forbidden_area_layout(free_donors + n_children, area, constraint.forbidden, max_attempts, rng);
    }
    if (donors_fixed) {
        d.donors = *donors_fixed;
        d.children = std::move(sampled);
    } else {
        d.donors.assign(sampled.begin(), sampled.begin() + static_cast<std::ptrdiff_t>(n_donors));
        d.children.assign(sampled.begin() + static_cast<std::ptrdiff_t>(n_donors), sampled.end());
    }
    return d;
}

PlacementResult optimize_placement(const PlacementConstraint& constraint, std::size_t n_donors,
                                   std::size_t n_children, const Scenario& scenario, const RadioConfig& radio,
                                   const ChannelConfig& channel, const OptimizerConfig& config,
                                   std::uint64_t master_seed) {
    config.validate();
    constraint.validate(scenario.area);
    if (config.donors_fixed ? config.donors_fixed->empty() : n_donors == 0) {
        throw Error("optimize_placement: at least one donor is required");
    }
    const EvaluationSeeds seeds =
        config.candidate_seeds.value_or(EvaluationSeeds::from_master(derive_seed(master_seed, {tag(StreamTag::Evaluation)})));

    PlacementResult result;
    std::size_t since_improvement = 0;
    for (std::size_t it = 0; it < config.n_iterations; ++it) {
        Rng rng = make_stream(master_seed, {tag(StreamTag::Candidate), it});
        Deployment candidate = sample_constrained_deployment(constraint, n_donors, n_children, scenario.area,
                                                             config.max_resample_attempts, rng, config.donors_fixed);
        const CoverageEstimate est = evaluate_topology(candidate, scenario, radio, channel,
                                                       config.mc_trials_per_candidate, seeds, config.parallelism);
        result.candidate_history.push_back({it, est.value});
        if (it == 0 || est.value > result.coverage) {
            result.locations = std::move(candidate);
            result.coverage = est.value;
            result.std_error = est.std_error;
            since_improvement = 0;
        } else if (config.stop_mode == StopMode::NoImprovementWindow && ++since_improvement >= config.window) {
            break;
        }
    }
    return result;
}

Deployment baseline_hexagonal(std::size_t n_nodes, const DiskRegion& area, std::size_t n_donors) {
    if (n_donors < 1 || n_donors > n_nodes) {
        throw Error("baseline_hexagonal: donor count must lie in [1, n_nodes]");
    }
    const PointList points = hexagonal_layout(n_nodes, area);
    Deployment d;
    d.donors.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(n_donors));
    d.children.assign(points.begin() + static_cast<std::ptrdiff_t>(n_donors), points.end());
    return d;
}

Deployment baseline_random(std::size_t n_donors, std::size_t n_children, const DiskRegion& area, Rng& rng,
                           const std::vector<DiskRegion>& forbidden, std::size_t max_attempts) {
    const PointList nodes = sample_forbidden_area_layout(n_donors + n_children, area, forbidden, max_attempts, rng);
    Deployment d;
    d.donors.assign(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(n_donors));
    d.children.assign(nodes.begin() + static_cast<std::ptrdiff_t>(n_donors), nodes.end());
    return d;
}

}  // namespace iab
