#include "iab/network.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace iab {

void Topology::validate() const {
    if (donors.empty()) {
        throw Error("Topology: at least one donor is required");
    }
    const auto check = [&](const std::vector<Node>& nodes, const char* what) {
        for (const auto& n : nodes) {
            if (!n.position.allFinite()) {
                throw Error(std::string("Topology: non-finite ") + what + " position");
            }
            if (!area.contains(n.position)) {
                throw Error(std::string("Topology: ") + what + " outside the network area");
            }
            if (!(n.tx_power >= 0)) {
                throw Error(std::string("Topology: negative ") + what + " transmit power");
            }
        }
    };
    check(donors, "donor");
    check(children, "child");
    check(ues, "UE");
}

void ChannelConfig::validate() const {
    path_loss.validate();
    fading.validate();
}

scalar_t RadioConfig::noise_density_from_db(scalar_t thermal_dbm_per_hz, scalar_t noise_figure_db) {
    return dbm_to_watts(thermal_dbm_per_hz + noise_figure_db);
}

RadioConfig::RadioConfig() : noise_power_density(noise_density_from_db(-174.0, 7.0)) {}

void RadioConfig::validate() const {
    if (!(bandwidth > 0)) {
        throw Error("RadioConfig: bandwidth must be positive");
    }
    if (!(beta >= 0 && beta <= 1)) {
        throw Error("RadioConfig: beta must lie in [0, 1]");
    }
    if (!(noise_power_density > 0)) {
        throw Error("RadioConfig: noise power density must be positive");
    }
    if (!(rate_threshold >= 0)) {
        throw Error("RadioConfig: rate threshold must be non-negative");
    }
}

scalar_t link_path_gain(scalar_t distance, bool los, const ChannelConfig& channel) {
    const scalar_t d = std::max(distance, scalar_t(1));
    scalar_t g = path_loss(d, los, channel.path_loss);
    if (channel.literal_distance_term) {
        g /= d;
    }
    return g;
}

namespace {

bool link_los(const Point2D& a, const Point2D& b, const BlockageField& field) {
    return a == b || field.line_of_sight(a, b);
}

}  // namespace

LinkGeometry::LinkGeometry(const Topology& topology, const ChannelConfig& channel) {
    const auto ntx = static_cast<Eigen::Index>(topology.transmitter_count());
    const auto nue = static_cast<Eigen::Index>(topology.ues.size());
    const auto nch = static_cast<Eigen::Index>(topology.children.size());
    ue_los_.resize(ntx, nue);
    ue_gain_.resize(ntx, nue);
    child_los_.resize(ntx, nch);
    child_gain_.resize(ntx, nch);

    for (Eigen::Index k = 0; k < ntx; ++k) {
        const Point2D& p = topology.transmitter(static_cast<std::size_t>(k)).position;
        for (Eigen::Index u = 0; u < nue; ++u) {
            const Point2D& q = topology.ues[static_cast<std::size_t>(u)].position;
            const bool los = link_los(p, q, topology.blockage);
            ue_los_(k, u) = los;
            ue_gain_(k, u) = link_path_gain((p - q).norm(), los, channel);
        }
        for (Eigen::Index c = 0; c < nch; ++c) {
            if (static_cast<std::size_t>(k) == topology.child_tx_index(static_cast<std::size_t>(c))) {
                child_los_(k, c) = true;
                child_gain_(k, c) = 0.0;
                continue;
            }
            const Point2D& q = topology.children[static_cast<std::size_t>(c)].position;
            const bool los = link_los(p, q, topology.blockage);
            child_los_(k, c) = los;
            child_gain_(k, c) = link_path_gain((p - q).norm(), los, channel);
        }
    }
}

FadingDraws FadingDraws::unit(const Topology& topology) {
    const auto ntx = static_cast<Eigen::Index>(topology.transmitter_count());
    return FadingDraws{LinkMatrix::Ones(ntx, static_cast<Eigen::Index>(topology.ues.size())),
                       LinkMatrix::Ones(ntx, static_cast<Eigen::Index>(topology.children.size()))};
}

FadingDraws FadingDraws::sample(const Topology& topology, const LinkGeometry& links, const FadingModel& model,
                                std::uint64_t seed) {
    FadingDraws draws = unit(topology);
    if (model.kind == FadingKind::DeterministicUnit) {
        return draws;
    }
    const auto ntx = draws.access.rows();
    for (Eigen::Index u = 0; u < draws.access.cols(); ++u) {
        Rng rng = make_stream(seed, {0, static_cast<std::uint64_t>(u)});
        for (Eigen::Index k = 0; k < ntx; ++k) {
            draws.access(k, u) = sample_fading(model, links.ue_los(k, u), rng);
        }
    }
    for (Eigen::Index c = 0; c < draws.backhaul.cols(); ++c) {
        Rng rng = make_stream(seed, {1, static_cast<std::uint64_t>(c)});
        for (Eigen::Index k = 0; k < ntx; ++k) {
            draws.backhaul(k, c) = sample_fading(model, links.child_los(k, c), rng);
        }
    }
    return draws;
}

namespace {

/// Receivers of each transmitter: served UEs, then (donors only) children.
std::vector<std::vector<Point2D>> receivers_of(const Topology& topology, const Association& association) {
    std::vector<std::vector<Point2D>> rx(topology.transmitter_count());
    for (std::size_t u = 0; u < association.ue_serving.size(); ++u) {
        rx[association.ue_serving[u]].push_back(topology.ues[u].position);
    }
    for (std::size_t c = 0; c < association.child_parent.size(); ++c) {
        rx[association.child_parent[c]].push_back(topology.children[c].position);
    }
    return rx;
}

}  // namespace

BeamPlan BeamPlan::first_receiver(const Topology& topology, const Association& association) {
    const auto rx = receivers_of(topology, association);
    BeamPlan plan;
    plan.target.resize(rx.size());
    for (std::size_t k = 0; k < rx.size(); ++k) {
        if (!rx[k].empty()) plan.target[k] = rx[k].front();
    }
    return plan;
}

BeamPlan BeamPlan::sample(const Topology& topology, const Association& association, std::uint64_t seed) {
    const auto rx = receivers_of(topology, association);
    BeamPlan plan;
    plan.target.resize(rx.size());
    for (std::size_t k = 0; k < rx.size(); ++k) {
        if (rx[k].empty()) continue;
        Rng rng = make_stream(seed, {static_cast<std::uint64_t>(k)});
        std::uniform_int_distribution<std::size_t> pick(0, rx[k].size() - 1);
        plan.target[k] = rx[k][pick(rng)];
    }
    return plan;
}

Association associate(const Topology& topology, const LinkGeometry& links) {
    Association a;
    const std::size_t ntx = topology.transmitter_count();

    a.ue_serving.resize(topology.ues.size());
    for (std::size_t u = 0; u < topology.ues.size(); ++u) {
        const scalar_t rx_gain = topology.ues[u].rx_pattern().main_lobe_gain;
        scalar_t best = -1.0;
        for (std::size_t k = 0; k < ntx; ++k) {
            const Node& tx = topology.transmitter(k);
            const scalar_t p = received_power(tx.tx_power, 1.0, links.ue_path_gain(k, u), tx.pattern.main_lobe_gain, rx_gain);
            if (p > best) {
                best = p;
                a.ue_serving[u] = k;
            }
        }
    }

    a.child_parent.resize(topology.children.size());
    for (std::size_t c = 0; c < topology.children.size(); ++c) {
        const scalar_t rx_gain = topology.children[c].rx_pattern().main_lobe_gain;
        scalar_t best = -1.0;
        for (std::size_t d = 0; d < topology.donors.size(); ++d) {
            const Node& tx = topology.donors[d];
            const scalar_t p =
                received_power(tx.tx_power, 1.0, links.child_path_gain(d, c), tx.pattern.main_lobe_gain, rx_gain);
            if (p > best) {
                best = p;
                a.child_parent[c] = d;
            }
        }
    }
    return a;
}

Association associate(const Topology& topology, const ChannelConfig& channel) {
    return associate(topology, LinkGeometry(topology, channel));
}

scalar_t interference_tx_gain(const Node& tx, const std::optional<Point2D>& tx_target, const Point2D& victim) {
    if (!tx_target) {
        return tx.pattern.side_lobe_gain;
    }
    return antenna_gain(tx.pattern, angle_between(victim - tx.position, *tx_target - tx.position));
}

scalar_t interference_rx_gain(const Node& rx, const Point2D& rx_peer, const Point2D& interferer) {
    return antenna_gain(rx.rx_pattern(), angle_between(interferer - rx.position, rx_peer - rx.position));
}

scalar_t ue_signal(std::size_t ue, const Topology& topology, const Association& association,
                   const LinkGeometry& links, const FadingDraws& fading) {
    const std::size_t k = association.ue_serving[ue];
    const Node& tx = topology.transmitter(k);
    return received_power(tx.tx_power, fading.access(k, ue), links.ue_path_gain(k, ue), tx.pattern.main_lobe_gain,
                          topology.ues[ue].rx_pattern().main_lobe_gain);
}

scalar_t backhaul_signal(std::size_t child, const Topology& topology, const Association& association,
                         const LinkGeometry& links, const FadingDraws& fading) {
    const std::size_t d = association.child_parent[child];
    const Node& tx = topology.donors[d];
    return received_power(tx.tx_power, fading.backhaul(d, child), links.child_path_gain(d, child),
                          tx.pattern.main_lobe_gain, topology.children[child].rx_pattern().main_lobe_gain);
}

scalar_t ue_interference(std::size_t ue, const Topology& topology, const Association& association,
                         const LinkGeometry& links, const TrialDraws& draws) {
    const std::size_t server = association.ue_serving[ue];
    const Node& victim = topology.ues[ue];
    const Point2D& peer = topology.transmitter(server).position;
    scalar_t total = 0.0;
    for (std::size_t k = 0; k < topology.transmitter_count(); ++k) {
        if (k == server || !draws.beams.active(k)) continue;
        const Node& tx = topology.transmitter(k);
        total += received_power(tx.tx_power, draws.fading.access(k, ue), links.ue_path_gain(k, ue),
                                interference_tx_gain(tx, draws.beams.target[k], victim.position),
                                interference_rx_gain(victim, peer, tx.position));
    }
    return total;
}

scalar_t backhaul_interference(std::size_t child, const Topology& topology, const Association& association,
                               const LinkGeometry& links, const TrialDraws& draws) {
    const std::size_t parent = association.child_parent[child];
    const std::size_t self = topology.child_tx_index(child);
    const Node& victim = topology.children[child];
    const Point2D& peer = topology.donors[parent].position;
    scalar_t total = 0.0;
    for (std::size_t k = 0; k < topology.transmitter_count(); ++k) {
        if (k == parent || k == self || !draws.beams.active(k)) continue;
        const Node& tx = topology.transmitter(k);
        total += received_power(tx.tx_power, draws.fading.backhaul(k, child), links.child_path_gain(k, child),
                                interference_tx_gain(tx, draws.beams.target[k], victim.position),
                                interference_rx_gain(victim, peer, tx.position));
    }
    return total;
}

scalar_t sinr(scalar_t signal, scalar_t interference, scalar_t noise) {
    if (!(noise > 0)) {
        throw Error("sinr: noise power must be positive");
    }
    return signal / (interference + noise);
}

std::vector<scalar_t> ue_rates(const Topology& topology, const Association& association, const RadioConfig& radio,
                               const LinkGeometry& links, const TrialDraws& draws) {
    const std::size_t ntx = topology.transmitter_count();
    std::vector<std::size_t> ues_at(ntx, 0);
    for (std::size_t k : association.ue_serving) ++ues_at[k];
    std::vector<std::size_t> children_of(topology.donors.size(), 0);
    for (std::size_t d : association.child_parent) ++children_of[d];

    const scalar_t access_band = radio.access_bandwidth();
    const scalar_t backhaul_band = radio.backhaul_bandwidth();

    // backhaul spectral efficiency per child, computed once
    std::vector<scalar_t> backhaul_se(topology.children.size(), 0.0);
    if (backhaul_band > 0) {
        const scalar_t noise = radio.noise_power_density * backhaul_band;
        for (std::size_t c = 0; c < topology.children.size(); ++c) {
            const scalar_t s = backhaul_signal(c, topology, association, links, draws.fading);
            const scalar_t i = backhaul_interference(c, topology, association, links, draws);
            backhaul_se[c] = std::log2(1.0 + sinr(s, i, noise));
        }
    }

    std::vector<scalar_t> rates(topology.ues.size(), 0.0);
    if (access_band <= 0) {
        return rates;
    }
    const scalar_t noise = radio.noise_power_density * access_band;
    for (std::size_t u = 0; u < topology.ues.size(); ++u) {
        const std::size_t k = association.ue_serving[u];
        const scalar_t s = ue_signal(u, topology, association, links, draws.fading);
        const scalar_t i = ue_interference(u, topology, association, links, draws);
        const scalar_t share = static_cast<scalar_t>(ues_at[k]);
        const scalar_t access_rate = access_band / share * std::log2(1.0 + sinr(s, i, noise));
        if (topology.is_donor(k)) {
            rates[u] = access_rate;
        } else {
            const std::size_t c = k - topology.donors.size();
            const scalar_t siblings = radio.backhaul_sharing == BackhaulSharing::EqualSplit
                                          ? static_cast<scalar_t>(children_of[association.child_parent[c]])
                                          : 1.0;
            const scalar_t backhaul_rate = backhaul_band / (siblings * share) * backhaul_se[c];
            rates[u] = std::min(access_rate, backhaul_rate);
        }
    }
    return rates;
}

std::vector<scalar_t> ue_rates(const Topology& topology, const Association& association, const RadioConfig& radio,
                               const ChannelConfig& channel, Rng& rng) {
    const LinkGeometry links(topology, channel);
    const std::uint64_t seed = rng();
    TrialDraws draws{FadingDraws::sample(topology, links, channel.fading, derive_seed(seed, {tag(StreamTag::Fading)})),
                     BeamPlan::sample(topology, association, derive_seed(seed, {tag(StreamTag::Scheduling)}))};
    return ue_rates(topology, association, radio, links, draws);
}

scalar_t service_coverage(std::span<const scalar_t> rates, scalar_t threshold) {
    if (rates.empty()) {
        throw Error("service_coverage: no rate samples");
    }
    const auto hits = std::count_if(rates.begin(), rates.end(), [&](scalar_t r) { return r >= threshold; });
    return static_cast<scalar_t>(hits) / static_cast<scalar_t>(rates.size());
}

void Scenario::validate() const {
    if (!(ue_density >= 0) || !(blockage_density >= 0)) {
        throw Error("Scenario: densities must be non-negative");
    }
    if (!(wall_length > 0)) {
        throw Error("Scenario: wall length must be positive");
    }
    donor.pattern.validate();
    child.pattern.validate();
    ue.pattern.validate();
    if (child.receive_pattern) child.receive_pattern->validate();
    if (!(donor.tx_power >= 0) || !(child.tx_power >= 0)) {
        throw Error("Scenario: transmit powers must be non-negative");
    }
}

EvaluationSeeds EvaluationSeeds::from_master(std::uint64_t master) {
    return {derive_seed(master, {tag(StreamTag::Blockage)}), derive_seed(master, {tag(StreamTag::Users)}),
            derive_seed(master, {tag(StreamTag::Fading)})};
}

namespace {

Node make_node(const Point2D& p, NodeKind kind, const NodeRadio& radio) {
    return Node{p, kind, kind == NodeKind::Ue ? 0.0 : radio.tx_power, radio.pattern, radio.receive_pattern};
}

}  // namespace

Topology build_trial_topology(const Deployment& deployment, const Scenario& scenario, const EvaluationSeeds& seeds,
                              std::size_t trial) {
    Topology t;
    t.area = scenario.area;
    for (const auto& p : deployment.donors) t.donors.push_back(make_node(p, NodeKind::Donor, scenario.donor));
    for (const auto& p : deployment.children) t.children.push_back(make_node(p, NodeKind::Child, scenario.child));

    if (scenario.fixed_blockage) {
        t.blockage = *scenario.fixed_blockage;
    } else if (scenario.blockage_density > 0) {
        Rng rng = make_stream(seeds.blockage, {tag(StreamTag::Blockage), trial});
        t.blockage = generate_blockages(scenario.area, scenario.blockage_density, scenario.wall_length, rng);
    }

    PointList ues;
    if (scenario.fixed_ues) {
        ues = *scenario.fixed_ues;
    } else {
        Rng rng = make_stream(seeds.users, {tag(StreamTag::Users), trial});
        ues = sample_fhppp(scenario.area, scenario.ue_density, rng);
    }
    for (const auto& p : ues) t.ues.push_back(make_node(p, NodeKind::Ue, scenario.ue));
    return t;
}

TrialOutcome simulate_trial(const Deployment& deployment, const Scenario& scenario, const RadioConfig& radio,
                            const ChannelConfig& channel, const EvaluationSeeds& seeds, std::size_t trial) {
    const Topology topology = build_trial_topology(deployment, scenario, seeds, trial);
    if (topology.donors.empty()) {
        throw Error("simulate_trial: deployment has no donor");
    }
    if (topology.ues.empty()) {
        return {};
    }
    const LinkGeometry links(topology, channel);
    Association association = associate(topology, links);
    const TrialDraws draws{
        FadingDraws::sample(topology, links, channel.fading, derive_seed(seeds.fading, {tag(StreamTag::Fading), trial})),
        BeamPlan::sample(topology, association, derive_seed(seeds.fading, {tag(StreamTag::Scheduling), trial}))};
    return {ue_rates(topology, association, radio, links, draws), std::move(association)};
}

void parallel_for(std::size_t count, unsigned parallelism, const std::function<void(std::size_t)>& fn) {
    unsigned workers = parallelism == 0 ? std::max(1u, std::thread::hardware_concurrency()) : parallelism;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<std::vector<scalar_t>> simulate_trials(const DeploymentProvider& deployments, const Scenario& scenario,
                                                   const RadioConfig& radio, const ChannelConfig& channel,
                                                   const EvaluationSeeds& seeds, std::size_t trials,
                                                   unsigned parallelism) {
    std::vector<std::vector<scalar_t>> out(trials);
    parallel_for(trials, parallelism, [&](std::size_t t) {
        out[t] = simulate_trial(deployments(t), scenario, radio, channel, seeds, t).rates;
    });
    return out;
}

std::pair<scalar_t, scalar_t> mean_and_std_error(std::span<const scalar_t> samples) {
    if (samples.empty()) {
        return {0.0, 0.0};
    }
    const scalar_t n = static_cast<scalar_t>(samples.size());
    const scalar_t mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    if (samples.size() < 2) {
        return {mean, 0.0};
    }
    scalar_t ss = 0.0;
    for (scalar_t x : samples) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

CoverageEstimate summarize_coverage(const std::vector<std::vector<scalar_t>>& trial_rates, scalar_t threshold) {
    CoverageEstimate est;
    for (const auto& rates : trial_rates) {
        if (!rates.empty()) est.per_trial.push_back(service_coverage(rates, threshold));
    }
    est.trials = est.per_trial.size();
    std::tie(est.value, est.std_error) = mean_and_std_error(est.per_trial);
    return est;
}

CoverageEstimate evaluate_topology(const Deployment& deployment, const Scenario& scenario, const RadioConfig& radio,
                                   const ChannelConfig& channel, std::size_t trials, const EvaluationSeeds& seeds,
                                   unsigned parallelism) {
    if (trials == 0) {
        throw Error("evaluate_topology: at least one trial is required");
    }
    const auto rates = simulate_trials([&](std::size_t) { return deployment; }, scenario, radio, channel, seeds,
                                       trials, parallelism);
    return summarize_coverage(rates, radio.rate_threshold);
}

CoverageEstimate evaluate_topology(const Deployment& deployment, const Scenario& scenario, const RadioConfig& radio,
                                   const ChannelConfig& channel, std::size_t trials, std::uint64_t master_seed,
                                   unsigned parallelism) {
    return evaluate_topology(deployment, scenario, radio, channel, trials, EvaluationSeeds::from_master(master_seed),
                             parallelism);
}

}  // namespace iab
