#include "iab/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace iab {

using nlohmann::json;

namespace {

constexpr std::pair<ScenarioKind, const char*> kScenarioNames[] = {
    {ScenarioKind::SymmetricLine, "symmetric-line"},
    {ScenarioKind::SymmetricRing, "symmetric-ring"},
    {ScenarioKind::MinDistanceSweep, "min-distance-sweep"},
    {ScenarioKind::ForbiddenAreaSweep, "forbidden-area-sweep"},
    {ScenarioKind::RateCdf, "rate-cdf"},
};

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string label_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// --- JSON reading helpers ---------------------------------------------------

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw ConfigError("config: '" + where + "' must be an object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!keys.count(key)) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: '" + where + "." + key + "' has the wrong type");
    }
}

void read_list(const json& j, const char* key, std::vector<double>& out, const std::string& where) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (v.is_number()) {
        out = {v.get<double>()};
        return;
    }
    read(j, key, out, where);
}

AntennaSpec read_antenna(const json& j, AntennaSpec spec, const std::string& where) {
    reject_unknown(j, where, {"tx_power_dbm", "main_lobe_dbi", "front_to_back_db", "beamwidth_deg"});
    read(j, "tx_power_dbm", spec.tx_power_dbm, where);
    read(j, "main_lobe_dbi", spec.main_lobe_dbi, where);
    read(j, "front_to_back_db", spec.front_to_back_db, where);
    read(j, "beamwidth_deg", spec.beamwidth_deg, where);
    return spec;
}

json antenna_json(const AntennaSpec& a) {
    return {{"tx_power_dbm", a.tx_power_dbm},
            {"main_lobe_dbi", a.main_lobe_dbi},
            {"front_to_back_db", a.front_to_back_db},
            {"beamwidth_deg", a.beamwidth_deg}};
}

const char* sharing_name(BackhaulSharing s) { return s == BackhaulSharing::EqualSplit ? "equal-split" : "per-child"; }
const char* fading_name(FadingKind k) { return k == FadingKind::Nakagami ? "nakagami" : "deterministic-unit"; }
const char* stop_name(StopMode m) { return m == StopMode::FixedIterations ? "fixed-iterations" : "no-improvement-window"; }

}  // namespace

std::string to_string(ScenarioKind kind) {
    for (const auto& [k, name] : kScenarioNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

ScenarioKind scenario_from_string(const std::string& name) {
    for (const auto& [k, n] : kScenarioNames) {
        if (name == n) return k;
    }
    throw ConfigError("unknown scenario '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> scenario_catalog() {
    return {
        {"symmetric-line", "donor at the center, children on a line at +-s; coverage versus s"},
        {"symmetric-ring", "donor at the center, children evenly spaced on a ring of radius s; coverage versus s"},
        {"rate-cdf", "empirical CDF of UE rates for each (s, antenna gain) pair"},
        {"min-distance-sweep", "minimum inter-node distance optimizer (blind and blockage-aware) versus hexagonal"},
        {"forbidden-area-sweep", "forbidden-area optimizer versus random placement, versus forbidden disk radius"},
    };
}

AntennaPattern AntennaSpec::pattern() const {
    return AntennaPattern::from_dbi(main_lobe_dbi, main_lobe_dbi - front_to_back_db, beamwidth_deg);
}

void ExperimentConfig::validate() const {
    const auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (trials < 1) fail("trials must be at least 1");
    if (!(area_radius_m > 0)) fail("area_radius_m must be positive");
    if (!(wall_length_m > 0)) fail("wall_length_m must be positive");
    if (!(blockage_density >= 0) || !(child_density >= 0)) fail("densities must be non-negative");
    if (ue_densities.empty()) fail("at least one UE density is required");
    for (double d : ue_densities) {
        if (!(d >= 0)) fail("densities must be non-negative");
    }
    if (donors < 1) fail("at least one donor is required");
    if (!(bandwidth_mhz > 0)) fail("bandwidth_mhz must be positive");
    if (!(beta >= 0 && beta <= 1)) fail("beta must lie in [0, 1]");
    if (rate_thresholds_mbps.empty()) fail("at least one rate threshold is required");
    for (double r : rate_thresholds_mbps) {
        if (!(r >= 0)) fail("rate thresholds must be non-negative");
    }
    if (sweep_values.empty()) fail("sweep.values must not be empty");
    for (double v : sweep_values) {
        if (!std::isfinite(v) || v < 0) fail("sweep values must be finite and non-negative");
    }
    if (layout != "line" && layout != "ring") fail("layout must be 'line' or 'ring'");
    if (iterations < 1) fail("optimizer.iterations must be at least 1");
    if (max_resample_attempts < 1) fail("optimizer.max_resample_attempts must be at least 1");
    if (trials_per_candidate < 1) fail("optimizer.trials_per_candidate must be at least 1");
    if (stop_mode == StopMode::NoImprovementWindow && window < 1) fail("optimizer.window must be at least 1");

    try {
        for (const auto* a : {&donor_antenna, &child_antenna, &ue_antenna}) a->pattern();
        if (child_mt_antenna) child_mt_antenna->pattern();
        channel().validate();
        radio_for(rate_thresholds_mbps.front()).validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(e.what());
    }

    switch (scenario) {
    case ScenarioKind::SymmetricLine:
    case ScenarioKind::SymmetricRing:
    case ScenarioKind::RateCdf: {
        if (!children || *children < 1) fail("symmetric scenarios need 'children' >= 1");
        const bool line = scenario == ScenarioKind::SymmetricLine ||
                          (scenario == ScenarioKind::RateCdf && layout == "line");
        const double reach = line ? static_cast<double>((*children + 1) / 2) : 1.0;
        const auto& distances = scenario == ScenarioKind::RateCdf ? cdf_distances_m : sweep_values;
        if (distances.empty()) fail("rate_cdf.distances_m must not be empty");
        for (double s : distances) {
            if (!(s > 0)) fail("inter-node distances must be positive");
            if (s * reach > area_radius_m) fail("a child would lie outside the network area");
        }
        if (scenario == ScenarioKind::RateCdf && cdf_gains_dbi.empty()) fail("rate_cdf.gains_dbi must not be empty");
        break;
    }
    case ScenarioKind::MinDistanceSweep:
    case ScenarioKind::ForbiddenAreaSweep:
        if (rate_thresholds_mbps.size() != 1) fail("optimizer sweeps take exactly one rate threshold");
        if (scenario == ScenarioKind::ForbiddenAreaSweep) {
            if (forbidden_count < 1) fail("forbidden_areas.count must be at least 1");
            if (!(forbidden_ring_fraction >= 0 && forbidden_ring_fraction < 1)) {
                fail("forbidden_areas.center_ring_fraction must lie in [0, 1)");
            }
        }
        break;
    }
}

std::size_t ExperimentConfig::child_count() const {
    if (children) return *children;
    const double area_km2 = kPi * area_radius_m * area_radius_m / kSquareMetersPerKm2;
    return static_cast<std::size_t>(std::llround(child_density * area_km2));
}

Scenario ExperimentConfig::scenario_for(double ue_density) const {
    Scenario s;
    s.area = DiskRegion(Point2D::Zero(), area_radius_m);
    s.donor = {dbm_to_watts(donor_antenna.tx_power_dbm), donor_antenna.pattern(), std::nullopt};
    s.child = {dbm_to_watts(child_antenna.tx_power_dbm), child_antenna.pattern(),
               child_mt_antenna ? std::optional<AntennaPattern>(child_mt_antenna->pattern()) : std::nullopt};
    s.ue = {0.0, ue_antenna.pattern(), std::nullopt};
    s.ue_density = ue_density;
    s.blockage_density = blockage_density;
    s.wall_length = wall_length_m;
    return s;
}

RadioConfig ExperimentConfig::radio_for(double threshold_mbps) const {
    RadioConfig r;
    r.bandwidth = bandwidth_mhz * 1e6;
    r.beta = beta;
    r.noise_power_density = RadioConfig::noise_density_from_db(thermal_noise_dbm_hz, noise_figure_db);
    r.rate_threshold = threshold_mbps * 1e6;
    r.backhaul_sharing = backhaul_sharing;
    return r;
}

ChannelConfig ExperimentConfig::channel() const {
    ChannelConfig c;
    c.path_loss = PathLossParams::close_in(carrier_ghz, exponent_los, exponent_nlos);
    c.fading = FadingModel{fading, m_los, m_nlos};
    c.literal_distance_term = literal_distance_term;
    return c;
}

OptimizerConfig ExperimentConfig::optimizer() const {
    OptimizerConfig o;
    o.n_iterations = iterations;
    o.max_resample_attempts = max_resample_attempts;
    o.mc_trials_per_candidate = trials_per_candidate;
    o.stop_mode = stop_mode;
    o.window = window;
    o.parallelism = parallelism;
    if (fixed_donor_at_center) o.donors_fixed = PointList{Point2D::Zero()};
    return o;
}

std::vector<DiskRegion> ExperimentConfig::forbidden_disks(double radius_m) const {
    std::vector<DiskRegion> disks;
    if (radius_m <= 0) return disks;
    const double ring = forbidden_ring_fraction * area_radius_m;
    for (std::size_t k = 0; k < forbidden_count; ++k) {
        const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(forbidden_count);
        disks.emplace_back(ring * Point2D(std::cos(a), std::sin(a)), radius_m);
    }
    return disks;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    reject_unknown(j, "config",
                   {"scenario", "seed", "trials", "parallelism", "output", "area_radius_m", "wall_length_m", "densities",
                    "donors", "children", "layout", "radio", "channel", "antennas", "sweep", "optimizer", "rate_cdf",
                    "forbidden_areas"});
    if (!j.contains("scenario")) throw ConfigError("config: 'scenario' is required");
    std::string scenario;
    read(j, "scenario", scenario, "config");
    c.scenario = scenario_from_string(scenario);
    read(j, "seed", c.seed, "config");
    read(j, "trials", c.trials, "config");
    read(j, "parallelism", c.parallelism, "config");
    read(j, "output", c.output, "config");
    read(j, "area_radius_m", c.area_radius_m, "config");
    read(j, "wall_length_m", c.wall_length_m, "config");
    read(j, "donors", c.donors, "config");
    read(j, "layout", c.layout, "config");
    if (j.contains("children") && !j.at("children").is_null()) {
        std::size_t n = 0;
        read(j, "children", n, "config");
        c.children = n;
    }

    if (j.contains("densities")) {
        const json& d = j.at("densities");
        reject_unknown(d, "densities", {"blockage_per_km2", "child_per_km2", "ue_per_km2"});
        read(d, "blockage_per_km2", c.blockage_density, "densities");
        read(d, "child_per_km2", c.child_density, "densities");
        read_list(d, "ue_per_km2", c.ue_densities, "densities");
    }
    if (j.contains("radio")) {
        const json& r = j.at("radio");
        reject_unknown(r, "radio", {"bandwidth_mhz", "beta", "thermal_noise_dbm_hz", "noise_figure_db",
                                    "rate_thresholds_mbps", "backhaul_sharing"});
        read(r, "bandwidth_mhz", c.bandwidth_mhz, "radio");
        read(r, "beta", c.beta, "radio");
        read(r, "thermal_noise_dbm_hz", c.thermal_noise_dbm_hz, "radio");
        read(r, "noise_figure_db", c.noise_figure_db, "radio");
        read_list(r, "rate_thresholds_mbps", c.rate_thresholds_mbps, "radio");
        std::string sharing = sharing_name(c.backhaul_sharing);
        read(r, "backhaul_sharing", sharing, "radio");
        if (sharing == "equal-split") c.backhaul_sharing = BackhaulSharing::EqualSplit;
        else if (sharing == "per-child") c.backhaul_sharing = BackhaulSharing::PerChild;
        else throw ConfigError("config: radio.backhaul_sharing must be 'equal-split' or 'per-child'");
    }
    if (j.contains("channel")) {
        const json& ch = j.at("channel");
        reject_unknown(ch, "channel", {"carrier_ghz", "exponent_los", "exponent_nlos", "fading", "m_los", "m_nlos",
                                       "literal_distance_term"});
        read(ch, "carrier_ghz", c.carrier_ghz, "channel");
        read(ch, "exponent_los", c.exponent_los, "channel");
        read(ch, "exponent_nlos", c.exponent_nlos, "channel");
        read(ch, "m_los", c.m_los, "channel");
        read(ch, "m_nlos", c.m_nlos, "channel");
        read(ch, "literal_distance_term", c.literal_distance_term, "channel");
        std::string fading = fading_name(c.fading);
        read(ch, "fading", fading, "channel");
        if (fading == "nakagami") c.fading = FadingKind::Nakagami;
        else if (fading == "deterministic-unit") c.fading = FadingKind::DeterministicUnit;
        else throw ConfigError("config: channel.fading must be 'nakagami' or 'deterministic-unit'");
    }
    if (j.contains("antennas")) {
        const json& a = j.at("antennas");
        reject_unknown(a, "antennas", {"donor", "child", "child_mt", "ue"});
        if (a.contains("donor")) c.donor_antenna = read_antenna(a.at("donor"), c.donor_antenna, "antennas.donor");
        if (a.contains("child")) c.child_antenna = read_antenna(a.at("child"), c.child_antenna, "antennas.child");
        if (a.contains("child_mt") && !a.at("child_mt").is_null()) {
            c.child_mt_antenna = read_antenna(a.at("child_mt"), c.child_antenna, "antennas.child_mt");
        }
        if (a.contains("ue")) c.ue_antenna = read_antenna(a.at("ue"), c.ue_antenna, "antennas.ue");
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown(s, "sweep", {"values"});
        read_list(s, "values", c.sweep_values, "sweep");
    }
    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        reject_unknown(o, "optimizer", {"iterations", "max_resample_attempts", "trials_per_candidate", "stop_mode",
                                        "window", "fixed_donor_at_center", "blockage_aware"});
        read(o, "iterations", c.iterations, "optimizer");
        read(o, "max_resample_attempts", c.max_resample_attempts, "optimizer");
        read(o, "trials_per_candidate", c.trials_per_candidate, "optimizer");
        read(o, "window", c.window, "optimizer");
        read(o, "fixed_donor_at_center", c.fixed_donor_at_center, "optimizer");
        read(o, "blockage_aware", c.blockage_aware, "optimizer");
        std::string stop = stop_name(c.stop_mode);
        read(o, "stop_mode", stop, "optimizer");
        if (stop == "fixed-iterations") c.stop_mode = StopMode::FixedIterations;
        else if (stop == "no-improvement-window") c.stop_mode = StopMode::NoImprovementWindow;
        else throw ConfigError("config: optimizer.stop_mode must be 'fixed-iterations' or 'no-improvement-window'");
    }
    if (j.contains("rate_cdf")) {
        const json& r = j.at("rate_cdf");
        reject_unknown(r, "rate_cdf", {"distances_m", "gains_dbi"});
        read_list(r, "distances_m", c.cdf_distances_m, "rate_cdf");
        read_list(r, "gains_dbi", c.cdf_gains_dbi, "rate_cdf");
    }
    if (j.contains("forbidden_areas")) {
        const json& f = j.at("forbidden_areas");
        reject_unknown(f, "forbidden_areas", {"count", "center_ring_fraction"});
        read(f, "count", c.forbidden_count, "forbidden_areas");
        read(f, "center_ring_fraction", c.forbidden_ring_fraction, "forbidden_areas");
    }
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["scenario"] = to_string(c.scenario);
    j["seed"] = c.seed;
    j["trials"] = c.trials;
    j["parallelism"] = c.parallelism;
    j["output"] = c.output;
    j["area_radius_m"] = c.area_radius_m;
    j["wall_length_m"] = c.wall_length_m;
    j["densities"] = {{"blockage_per_km2", c.blockage_density},
                      {"child_per_km2", c.child_density},
                      {"ue_per_km2", c.ue_densities}};
    j["donors"] = c.donors;
    j["children"] = c.children ? json(*c.children) : json(nullptr);
    j["layout"] = c.layout;
    j["radio"] = {{"bandwidth_mhz", c.bandwidth_mhz},
                  {"beta", c.beta},
                  {"thermal_noise_dbm_hz", c.thermal_noise_dbm_hz},
                  {"noise_figure_db", c.noise_figure_db},
                  {"rate_thresholds_mbps", c.rate_thresholds_mbps},
                  {"backhaul_sharing", sharing_name(c.backhaul_sharing)}};
    j["channel"] = {{"carrier_ghz", c.carrier_ghz},
                    {"exponent_los", c.exponent_los},
                    {"exponent_nlos", c.exponent_nlos},
                    {"fading", fading_name(c.fading)},
                    {"m_los", c.m_los},
                    {"m_nlos", c.m_nlos},
                    {"literal_distance_term", c.literal_distance_term}};
    j["antennas"] = {{"donor", antenna_json(c.donor_antenna)},
                     {"child", antenna_json(c.child_antenna)},
                     {"child_mt", c.child_mt_antenna ? antenna_json(*c.child_mt_antenna) : json(nullptr)},
                     {"ue", antenna_json(c.ue_antenna)}};
    j["sweep"] = {{"values", c.sweep_values}};
    j["optimizer"] = {{"iterations", c.iterations},
                      {"max_resample_attempts", c.max_resample_attempts},
                      {"trials_per_candidate", c.trials_per_candidate},
                      {"stop_mode", stop_name(c.stop_mode)},
                      {"window", c.window},
                      {"fixed_donor_at_center", c.fixed_donor_at_center},
                      {"blockage_aware", c.blockage_aware}};
    j["rate_cdf"] = {{"distances_m", c.cdf_distances_m}, {"gains_dbi", c.cdf_gains_dbi}};
    j["forbidden_areas"] = {{"count", c.forbidden_count}, {"center_ring_fraction", c.forbidden_ring_fraction}};
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("config") && j.contains("artifact")) {
        return config_from_json(j.at("config"));
    }
    return config_from_json(j);
}

// --- results ----------------------------------------------------------------

const ResultRow& ResultTable::at(double sweep_value, const std::string& strategy) const {
    for (const auto& r : rows) {
        if (r.sweep_value == sweep_value && r.strategy == strategy) return r;
    }
    throw Error("ResultTable: no row for " + format_number(sweep_value) + " / " + strategy);
}

void ResultTable::write_csv(std::ostream& out) const {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << format_number(r.sweep_value) << ',' << r.strategy << ',' << r.metric << ',' << format_number(r.value)
            << ',' << r.trials << ',' << format_number(r.std_error) << '\n';
    }
}

// --- scenarios --------------------------------------------------------------

namespace {

EvaluationSeeds final_seeds(const ExperimentConfig& c) {
    return EvaluationSeeds::from_master(derive_seed(c.seed, {tag(StreamTag::Evaluation)}));
}

/// Scoring seeds for optimizer candidates: independent of the final
/// evaluation, except for the blockage fields in blockage-aware mode.
EvaluationSeeds candidate_seeds(const ExperimentConfig& c, bool blockage_aware) {
    EvaluationSeeds s = EvaluationSeeds::from_master(derive_seed(c.seed, {tag(StreamTag::Candidate)}));
    if (blockage_aware) s.blockage = final_seeds(c).blockage;
    return s;
}

std::string density_prefix(const ExperimentConfig& c, double density) {
    return c.ue_densities.size() > 1 ? "ue" + label_number(density) + "_" : "";
}

ResultRow coverage_row(double x, std::string label, const CoverageEstimate& est) {
    return {x, std::move(label), "coverage", est.value, est.trials, est.std_error};
}

ResultRow infeasible_row(double x, std::string label) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {x, std::move(label), "infeasible", nan, 0, nan};
}

std::vector<std::string> symmetric_labels(const ExperimentConfig& c) {
    std::vector<std::string> out;
    for (double d : c.ue_densities) {
        for (double rho : c.rate_thresholds_mbps) out.push_back(density_prefix(c, d) + "rho" + label_number(rho) + "Mbps");
    }
    return out;
}

ResultTable run_symmetric(const ExperimentConfig& c, const std::string& shape) {
    c.validate();
    ResultTable table;
    const EvaluationSeeds seeds = final_seeds(c);
    const ChannelConfig channel = c.channel();
    for (double s : c.sweep_values) {
        const Scenario base = c.scenario_for(c.ue_densities.front());
        const Deployment d = symmetric_deployment(shape, *c.children, s, base.area);
        for (double density : c.ue_densities) {
            const Scenario scenario = c.scenario_for(density);
            const auto rates = simulate_trials([&](std::size_t) { return d; }, scenario,
                                               c.radio_for(c.rate_thresholds_mbps.front()), channel, seeds, c.trials,
                                               c.parallelism);
            for (double rho : c.rate_thresholds_mbps) {
                table.rows.push_back(coverage_row(s, density_prefix(c, density) + "rho" + label_number(rho) + "Mbps",
                                                  summarize_coverage(rates, rho * 1e6)));
            }
        }
    }
    return table;
}

std::string cdf_label(const ExperimentConfig& c, double density, double s, double g) {
    return density_prefix(c, density) + "s" + label_number(s) + "m_g" + label_number(g) + "dBi";
}

std::vector<std::string> sweep_labels(const ExperimentConfig& c, std::initializer_list<const char*> names) {
    std::vector<std::string> out;
    for (double d : c.ue_densities) {
        for (const char* n : names) out.push_back(density_prefix(c, d) + n);
    }
    return out;
}

}  // namespace

Deployment symmetric_deployment(const std::string& shape, std::size_t children, double s, const DiskRegion& area) {
    Deployment d;
    d.donors = {area.center};
    for (std::size_t k = 0; k < children; ++k) {
        if (shape == "ring") {
            const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(children);
            d.children.push_back(area.center + s * Point2D(std::cos(a), std::sin(a)));
        } else if (shape == "line") {
            const double step = static_cast<double>(k / 2 + 1);
            const double side = k % 2 == 0 ? 1.0 : -1.0;
            d.children.push_back(area.center + Point2D(side * step * s, 0.0));
        } else {
            throw ConfigError("unknown layout shape '" + shape + "'");
        }
    }
    return d;
}

std::vector<std::string> strategy_labels(const ExperimentConfig& c) {
    switch (c.scenario) {
    case ScenarioKind::SymmetricLine:
    case ScenarioKind::SymmetricRing:
        return symmetric_labels(c);
    case ScenarioKind::RateCdf: {
        std::vector<std::string> out;
        for (double density : c.ue_densities)
            for (double s : c.cdf_distances_m)
                for (double g : c.cdf_gains_dbi) out.push_back(cdf_label(c, density, s, g));
        return out;
    }
    case ScenarioKind::MinDistanceSweep:
        return sweep_labels(c, {"alg1", "alg1_blockage_aware", "hexagonal"});
    case ScenarioKind::ForbiddenAreaSweep:
        return sweep_labels(c, {"alg2", "random_unconstrained", "random"});
    }
    return {};
}

ResultTable run_symmetric_line(const ExperimentConfig& config) { return run_symmetric(config, "line"); }
ResultTable run_symmetric_ring(const ExperimentConfig& config) { return run_symmetric(config, "ring"); }

ResultTable run_rate_cdf(const ExperimentConfig& c) {
    c.validate();
    ResultTable table;
    const EvaluationSeeds seeds = final_seeds(c);
    const ChannelConfig channel = c.channel();
    const RadioConfig radio = c.radio_for(c.rate_thresholds_mbps.front());

    // rows are emitted in grid order, so keep every curve first
    std::vector<std::pair<std::string, std::vector<std::vector<double>>>> curves;
    for (double density : c.ue_densities) {
        for (double s : c.cdf_distances_m) {
            for (double g : c.cdf_gains_dbi) {
                ExperimentConfig variant = c;
                variant.donor_antenna.main_lobe_dbi = g;
                variant.child_antenna.main_lobe_dbi = g;
                if (variant.child_mt_antenna) variant.child_mt_antenna->main_lobe_dbi = g;
                const Scenario scenario = variant.scenario_for(density);
                const Deployment d = symmetric_deployment(c.layout, *c.children, s, scenario.area);
                curves.emplace_back(cdf_label(c, density, s, g),
                                    simulate_trials([&](std::size_t) { return d; }, scenario, radio, channel, seeds,
                                                    c.trials, c.parallelism));
            }
        }
    }
    for (double r_mbps : c.sweep_values) {
        const double r = r_mbps * 1e6;
        for (const auto& [label, trial_rates] : curves) {
            std::vector<double> per_trial;
            for (const auto& rates : trial_rates) {
                if (rates.empty()) continue;
                const auto below = std::count_if(rates.begin(), rates.end(), [&](double x) { return x <= r; });
                per_trial.push_back(static_cast<double>(below) / static_cast<double>(rates.size()));
            }
            const auto [mean, se] = mean_and_std_error(per_trial);
            table.rows.push_back({r_mbps, label, "cdf", mean, per_trial.size(), se});
        }
    }
    return table;
}

ResultTable run_min_distance_sweep(const ExperimentConfig& c) {
    c.validate();
    ResultTable table;
    const EvaluationSeeds seeds = final_seeds(c);
    const ChannelConfig channel = c.channel();
    const RadioConfig radio = c.radio_for(c.rate_thresholds_mbps.front());
    const std::size_t n_children = c.child_count();
    const OptimizerConfig base = c.optimizer();

    for (double r_th : c.sweep_values) {
        for (std::size_t di = 0; di < c.ue_densities.size(); ++di) {
            const double density = c.ue_densities[di];
            const Scenario scenario = c.scenario_for(density);
            const std::string prefix = density_prefix(c, density);
            const PlacementConstraint constraint = PlacementConstraint::min_distance_of(r_th);
            // Both optimizer modes see the same candidate sequence.
            const std::uint64_t search_seed = derive_seed(c.seed, {tag(StreamTag::Layout), di});

            for (const bool aware : {false, true}) {
                const std::string label = prefix + (aware ? "alg1_blockage_aware" : "alg1");
                OptimizerConfig oc = base;
                oc.candidate_seeds = candidate_seeds(c, aware);
                try {
                    const PlacementResult best =
                        optimize_placement(constraint, c.donors, n_children, scenario, radio, channel, oc, search_seed);
                    table.rows.push_back(coverage_row(
                        r_th, label,
                        evaluate_topology(best.locations, scenario, radio, channel, c.trials, seeds, c.parallelism)));
                } catch (const InfeasibleError&) {
                    table.rows.push_back(infeasible_row(r_th, label));
                }
            }
            const Deployment hex = baseline_hexagonal(c.donors + n_children, scenario.area, c.donors);
            table.rows.push_back(coverage_row(
                r_th, prefix + "hexagonal",
                evaluate_topology(hex, scenario, radio, channel, c.trials, seeds, c.parallelism)));
        }
    }
    return table;
}

ResultTable run_forbidden_area_sweep(const ExperimentConfig& c) {
    c.validate();
    ResultTable table;
    const EvaluationSeeds seeds = final_seeds(c);
    const ChannelConfig channel = c.channel();
    const RadioConfig radio = c.radio_for(c.rate_thresholds_mbps.front());
    const std::size_t n_children = c.child_count();
    OptimizerConfig oc = c.optimizer();
    oc.candidate_seeds = candidate_seeds(c, c.blockage_aware);

    for (double radius : c.sweep_values) {
        const std::vector<DiskRegion> disks = c.forbidden_disks(radius);
        for (std::size_t di = 0; di < c.ue_densities.size(); ++di) {
            const double density = c.ue_densities[di];
            const Scenario scenario = c.scenario_for(density);
            const std::string prefix = density_prefix(c, density);
            const std::uint64_t search_seed = derive_seed(c.seed, {tag(StreamTag::Layout), di});

            try {
                const PlacementResult best = optimize_placement(PlacementConstraint::forbidden_areas(disks), c.donors,
                                                                n_children, scenario, radio, channel, oc, search_seed);
                table.rows.push_back(coverage_row(
                    radius, prefix + "alg2",
                    evaluate_topology(best.locations, scenario, radio, channel, c.trials, seeds, c.parallelism)));
            } catch (const InfeasibleError&) {
                table.rows.push_back(infeasible_row(radius, prefix + "alg2"));
            }

            // Random baselines draw a fresh layout per trial. Both use the same
            // layout stream, so the constrained one differs only in the nodes
            // it had to move out of the forbidden disks.
            const std::uint64_t layout_seed = derive_seed(c.seed, {tag(StreamTag::Layout), 1000 + di});
            const auto random_layouts = [&](const std::vector<DiskRegion>& forbidden) -> DeploymentProvider {
                return [&, forbidden](std::size_t t) {
                    Rng rng = make_stream(layout_seed, {t});
                    return baseline_random(c.donors, n_children, scenario.area, rng, forbidden,
                                           c.max_resample_attempts);
                };
            };
            try {
                const auto rates = simulate_trials(random_layouts(disks), scenario, radio, channel, seeds, c.trials,
                                                   c.parallelism);
                table.rows.push_back(
                    coverage_row(radius, prefix + "random_unconstrained", summarize_coverage(rates, radio.rate_threshold)));
            } catch (const InfeasibleError&) {
                table.rows.push_back(infeasible_row(radius, prefix + "random_unconstrained"));
            }
            const auto rates = simulate_trials(random_layouts({}), scenario, radio, channel, seeds, c.trials,
                                               c.parallelism);
            table.rows.push_back(coverage_row(radius, prefix + "random", summarize_coverage(rates, radio.rate_threshold)));
        }
    }
    return table;
}

ResultTable run_experiment(const ExperimentConfig& config) {
    switch (config.scenario) {
    case ScenarioKind::SymmetricLine: return run_symmetric_line(config);
    case ScenarioKind::SymmetricRing: return run_symmetric_ring(config);
    case ScenarioKind::RateCdf: return run_rate_cdf(config);
    case ScenarioKind::MinDistanceSweep: return run_min_distance_sweep(config);
    case ScenarioKind::ForbiddenAreaSweep: return run_forbidden_area_sweep(config);
    }
    throw ConfigError("unknown scenario");
}

void write_outputs(const ResultTable& table, const ExperimentConfig& config, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "results.csv", std::ios::binary);
        if (!out) throw Error("cannot write " + (dir / "results.csv").string());
        table.write_csv(out);
    }
    json manifest;
    manifest["artifact"] = kArtifactName;
    manifest["version"] = kArtifactVersion;
    manifest["seed"] = config.seed;
    manifest["rows"] = table.rows.size();
    manifest["strategies"] = strategy_labels(config);
    manifest["config"] = config_to_json(config);
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
}

}  // namespace iab
