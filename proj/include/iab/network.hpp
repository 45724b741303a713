#pragma once

#include "iab/channel.hpp"
#include "iab/geometry.hpp"
#include "iab/random.hpp"
#include "iab/types.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace iab {

enum class NodeKind { Donor, Child, Ue };

struct Node {
    Point2D position = Point2D::Zero();
    NodeKind kind = NodeKind::Ue;
    scalar_t tx_power = 0.0;  ///< watts; zero for UEs
    AntennaPattern pattern;   ///< transmit pattern (DU side for IAB nodes)
    /// Receive pattern when it differs from `pattern` (the MT side of a child).
    std::optional<AntennaPattern> receive_pattern;

    const AntennaPattern& rx_pattern() const { return receive_pattern ? *receive_pattern : pattern; }
};

/// Donors, children and UEs of one network realization.
/// Transmitters are indexed donors first, then children.
struct Topology {
    std::vector<Node> donors;
    std::vector<Node> children;
    std::vector<Node> ues;
    BlockageField blockage;
    DiskRegion area;

    std::size_t transmitter_count() const { return donors.size() + children.size(); }
    const Node& transmitter(std::size_t k) const {
        return k < donors.size() ? donors[k] : children[k - donors.size()];
    }
    bool is_donor(std::size_t tx) const { return tx < donors.size(); }
    std::size_t child_tx_index(std::size_t child) const { return donors.size() + child; }

    void validate() const;
};

/// Close-in path loss, fading law and the optional extra inverse-distance
/// factor that the literal received-power expression carries.
struct ChannelConfig {
    PathLossParams path_loss = PathLossParams::close_in(28.0, 2.0, 3.0);
    FadingModel fading;
    bool literal_distance_term = false;

    void validate() const;
};

/// How a donor's backhaul band is shared. EqualSplit divides it among the
/// donor's children and then among each child's UEs; PerChild lets every
/// child reuse the whole band (beam-separated backhaul links).
enum class BackhaulSharing { EqualSplit, PerChild };

struct RadioConfig {
    scalar_t bandwidth = 2.0e9;                 ///< Hz
    scalar_t beta = 0.5;                        ///< backhaul share of the band
    scalar_t noise_power_density = 0.0;         ///< W/Hz, noise figure included
    scalar_t rate_threshold = 75.0e6;           ///< bits/s
    BackhaulSharing backhaul_sharing = BackhaulSharing::EqualSplit;

    /// Thermal noise -174 dBm/Hz plus a receiver noise figure.
    static scalar_t noise_density_from_db(scalar_t thermal_dbm_per_hz, scalar_t noise_figure_db);
    RadioConfig();

    scalar_t access_bandwidth() const { return (1.0 - beta) * bandwidth; }
    scalar_t backhaul_bandwidth() const { return beta * bandwidth; }

    void validate() const;
};

struct Association {
    std::vector<std::size_t> ue_serving;    ///< transmitter index per UE
    std::vector<std::size_t> child_parent;  ///< donor index per child
};

/// Per-trial LOS flags and distance-dependent path gains for every
/// transmitter-to-UE and transmitter-to-child link.
class LinkGeometry {
public:
    LinkGeometry(const Topology& topology, const ChannelConfig& channel);

    bool ue_los(std::size_t tx, std::size_t ue) const { return ue_los_(tx, ue); }
    bool child_los(std::size_t tx, std::size_t child) const { return child_los_(tx, child); }
    scalar_t ue_path_gain(std::size_t tx, std::size_t ue) const { return ue_gain_(tx, ue); }
    scalar_t child_path_gain(std::size_t tx, std::size_t child) const { return child_gain_(tx, child); }

private:
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> ue_los_;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> child_los_;
    LinkMatrix ue_gain_;
    LinkMatrix child_gain_;
};

/// Composite distance gain of one link: close-in model, times 1/d in literal mode.
scalar_t link_path_gain(scalar_t distance, bool los, const ChannelConfig& channel);

/// Small-scale fading coefficient for each (transmitter, receiver) pair.
struct FadingDraws {
    LinkMatrix access;    ///< transmitters x UEs
    LinkMatrix backhaul;  ///< transmitters x children

    /// All-ones draws.
    static FadingDraws unit(const Topology& topology);
    /// One independent stream per receiver, derived from the seed and the receiver index.
    static FadingDraws sample(const Topology& topology, const LinkGeometry& links, const FadingModel& model,
                              std::uint64_t seed);
};

/// Steering direction of every transmitter for one trial: each active node
/// points its beam at one of its own receivers. Nodes without receivers are idle.
struct BeamPlan {
    std::vector<std::optional<Point2D>> target;

    bool active(std::size_t tx) const { return target[tx].has_value(); }

    /// First receiver of each transmitter (UEs in index order, then children).
    static BeamPlan first_receiver(const Topology& topology, const Association& association);
    /// Uniformly chosen receiver per transmitter, one stream per transmitter.
    static BeamPlan sample(const Topology& topology, const Association& association, std::uint64_t seed);
};

struct TrialDraws {
    FadingDraws fading;
    BeamPlan beams;
};

/// Max long-term received power association (fading excluded, boresight gains).
/// Ties go to the lowest transmitter index, so donors win ties against children.
Association associate(const Topology& topology, const LinkGeometry& links);
Association associate(const Topology& topology, const ChannelConfig& channel);

/// Transmit and receive gains of an interfering link: main lobe when the
/// other end lies inside the beam each side has steered toward its own peer.
scalar_t interference_tx_gain(const Node& tx, const std::optional<Point2D>& tx_target, const Point2D& victim);
scalar_t interference_rx_gain(const Node& rx, const Point2D& rx_peer, const Point2D& interferer);

/// Desired-signal power at a UE from its serving node.
scalar_t ue_signal(std::size_t ue, const Topology& topology, const Association& association,
                   const LinkGeometry& links, const FadingDraws& fading);
/// Desired-signal power at a child from its parent donor.
scalar_t backhaul_signal(std::size_t child, const Topology& topology, const Association& association,
                         const LinkGeometry& links, const FadingDraws& fading);

/// Aggregate interference at a UE from every active transmitter except its server.
scalar_t ue_interference(std::size_t ue, const Topology& topology, const Association& association,
                         const LinkGeometry& links, const TrialDraws& draws);

/// Aggregate interference at a child's backhaul receiver from every active
/// transmitter except its parent and itself.
scalar_t backhaul_interference(std::size_t child, const Topology& topology, const Association& association,
                               const LinkGeometry& links, const TrialDraws& draws);

scalar_t sinr(scalar_t signal, scalar_t interference, scalar_t noise);

/// Per-UE downlink rates (bits/s) under equal-share scheduling.
std::vector<scalar_t> ue_rates(const Topology& topology, const Association& association, const RadioConfig& radio,
                               const LinkGeometry& links, const TrialDraws& draws);
/// Convenience form: builds the link geometry and draws fading and beams from `rng`.
std::vector<scalar_t> ue_rates(const Topology& topology, const Association& association, const RadioConfig& radio,
                               const ChannelConfig& channel, Rng& rng);

/// Fraction of rate samples meeting the threshold. Throws on an empty sample.
scalar_t service_coverage(std::span<const scalar_t> rates, scalar_t threshold);

// --- Monte-Carlo evaluation -------------------------------------------------

/** Power and antenna settings shared by all nodes of one kind. */
struct NodeRadio {
    scalar_t tx_power = 0.0;
    AntennaPattern pattern;
    std::optional<AntennaPattern> receive_pattern;
};

/// Everything about a network except the IAB node positions.
struct Scenario {
    DiskRegion area{Point2D::Zero(), 707.1};
    NodeRadio donor;
    NodeRadio child;
    NodeRadio ue;
    scalar_t ue_density = 100.0;        ///< per km^2
    scalar_t blockage_density = 500.0;  ///< per km^2
    scalar_t wall_length = 10.0;        ///< m
    std::optional<PointList> fixed_ues;
    std::optional<BlockageField> fixed_blockage;

    void validate() const;
};

/// IAB node positions.
struct Deployment {
    PointList donors;
    PointList children;
};

/// Independent seeds for the three per-trial random ingredients. Sharing one
/// of them between evaluations gives common random numbers for that part.
struct EvaluationSeeds {
    std::uint64_t blockage = 0;
    std::uint64_t users = 0;
    std::uint64_t fading = 0;

    static EvaluationSeeds from_master(std::uint64_t master);
};

struct CoverageEstimate {
    scalar_t value = 0.0;      ///< mean of per-trial coverage
    scalar_t std_error = 0.0;  ///< standard error of the mean
    std::size_t trials = 0;    ///< trials with at least one UE
    std::vector<scalar_t> per_trial;
};

/// Builds the topology of one trial: UEs and walls are drawn from the trial's
/// streams unless the scenario fixes them.
Topology build_trial_topology(const Deployment& deployment, const Scenario& scenario, const EvaluationSeeds& seeds,
                              std::size_t trial);

struct TrialOutcome {
    std::vector<scalar_t> rates;
    Association association;
};

/// Runs one trial end to end.
TrialOutcome simulate_trial(const Deployment& deployment, const Scenario& scenario, const RadioConfig& radio,
                            const ChannelConfig& channel, const EvaluationSeeds& seeds, std::size_t trial);

/// Supplies the deployment used in a given trial.
using DeploymentProvider = std::function<Deployment(std::size_t trial)>;

/// Runs `trials` trials (in parallel when parallelism != 1; 0 picks the
/// hardware concurrency) and stores every trial's rates by index.
std::vector<std::vector<scalar_t>> simulate_trials(const DeploymentProvider& deployments, const Scenario& scenario,
                                                   const RadioConfig& radio, const ChannelConfig& channel,
                                                   const EvaluationSeeds& seeds, std::size_t trials,
                                                   unsigned parallelism = 1);

/// Mean and standard error of the per-trial coverage at `threshold`.
CoverageEstimate summarize_coverage(const std::vector<std::vector<scalar_t>>& trial_rates, scalar_t threshold);

/// Monte-Carlo coverage of a fixed deployment. Deterministic given the seeds.
CoverageEstimate evaluate_topology(const Deployment& deployment, const Scenario& scenario, const RadioConfig& radio,
                                   const ChannelConfig& channel, std::size_t trials, const EvaluationSeeds& seeds,
                                   unsigned parallelism = 1);
CoverageEstimate evaluate_topology(const Deployment& deployment, const Scenario& scenario, const RadioConfig& radio,
                                   const ChannelConfig& channel, std::size_t trials, std::uint64_t master_seed,
                                   unsigned parallelism = 1);

/// Mean and standard error of the mean.
std::pair<scalar_t, scalar_t> mean_and_std_error(std::span<const scalar_t> samples);

/// Runs fn(0..count-1) over `parallelism` worker threads; results must be
/// written by index so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, unsigned parallelism, const std::function<void(std::size_t)>& fn);

}  // namespace iab
