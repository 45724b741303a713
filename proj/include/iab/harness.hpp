#pragma once

#include "iab/network.hpp"
#include "iab/optimizer.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace iab {

/// Raised for malformed or invalid experiment configurations.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class ScenarioKind { SymmetricLine, SymmetricRing, MinDistanceSweep, ForbiddenAreaSweep, RateCdf };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);
/// Every scenario name with a one-line description.
std::vector<std::pair<std::string, std::string>> scenario_catalog();

/** Antenna and power settings of one node kind, in configuration units. */
struct AntennaSpec {
    double tx_power_dbm = 24.0;
    double main_lobe_dbi = 24.0;
    double front_to_back_db = 20.0;  ///< side-lobe level below the main lobe
    double beamwidth_deg = 30.0;

    AntennaPattern pattern() const;
};

struct ExperimentConfig {
    ScenarioKind scenario = ScenarioKind::SymmetricLine;
    std::uint64_t seed = 1;
    std::size_t trials = 200;
    unsigned parallelism = 1;
    std::string output = "results";

    double area_radius_m = 707.1;
    double wall_length_m = 10.0;
    double blockage_density = 500.0;        ///< per km^2
    double child_density = 20.0;            ///< per km^2, sweeps only
    std::vector<double> ue_densities{100.0};///< per km^2
    std::size_t donors = 1;
    std::optional<std::size_t> children;    ///< overrides child_density when set
    std::string layout = "line";            ///< rate-cdf geometry: line or ring

    // radio
    double bandwidth_mhz = 2000.0;
    double beta = 0.5;
    double thermal_noise_dbm_hz = -174.0;
    double noise_figure_db = 7.0;
    std::vector<double> rate_thresholds_mbps{75.0};
    BackhaulSharing backhaul_sharing = BackhaulSharing::EqualSplit;

    // channel
    double carrier_ghz = 28.0;
    double exponent_los = 2.0;
    double exponent_nlos = 3.0;
    FadingKind fading = FadingKind::Nakagami;
    double m_los = 3.0;
    double m_nlos = 2.0;
    bool literal_distance_term = false;

    AntennaSpec donor_antenna;
    AntennaSpec child_antenna;
    std::optional<AntennaSpec> child_mt_antenna;
    AntennaSpec ue_antenna{0.0, 0.0, 0.0, 30.0};

    std::vector<double> sweep_values;       ///< s, r_th, c (m) or rate grid (Mbps)

    // optimizer
    std::size_t iterations = 20;
    std::size_t max_resample_attempts = 10000;
    std::size_t trials_per_candidate = 50;
    StopMode stop_mode = StopMode::FixedIterations;
    std::size_t window = 10;
    bool fixed_donor_at_center = false;
    bool blockage_aware = false;            ///< forbidden-area sweep optimizer mode

    // rate-cdf
    std::vector<double> cdf_distances_m{100.0, 400.0};
    std::vector<double> cdf_gains_dbi{24.0, 28.0};

    // forbidden-area sweep
    std::size_t forbidden_count = 5;
    double forbidden_ring_fraction = 0.5;   ///< disk centers on a ring of this fraction of the area radius

    void validate() const;

    std::size_t child_count() const;
    Scenario scenario_for(double ue_density) const;
    RadioConfig radio_for(double threshold_mbps) const;
    ChannelConfig channel() const;
    OptimizerConfig optimizer() const;
    /// Forbidden disks of radius c; empty for c = 0.
    std::vector<DiskRegion> forbidden_disks(double radius_m) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
/// Reads a configuration file or a run manifest (its "config" member).
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResultRow {
    double sweep_value = 0.0;
    std::string strategy;
    std::string metric;
    double value = 0.0;
    std::size_t trials = 0;
    double std_error = 0.0;
};

struct ResultTable {
    std::vector<ResultRow> rows;

    /// Row lookup; throws when absent.
    const ResultRow& at(double sweep_value, const std::string& strategy) const;
    void write_csv(std::ostream& out) const;
};

inline constexpr const char* kCsvHeader = "sweep_value,strategy,metric,value,trials,stderr";

ResultTable run_symmetric_line(const ExperimentConfig& config);
ResultTable run_symmetric_ring(const ExperimentConfig& config);
ResultTable run_rate_cdf(const ExperimentConfig& config);
ResultTable run_min_distance_sweep(const ExperimentConfig& config);
ResultTable run_forbidden_area_sweep(const ExperimentConfig& config);
ResultTable run_experiment(const ExperimentConfig& config);

/// Children at distance s from a donor at the area center: alternating
/// sides of a line (pairs at +-s, +-2s, ...) or evenly spaced on a ring.
Deployment symmetric_deployment(const std::string& shape, std::size_t children, double s, const DiskRegion& area);

/// Strategy labels, in output order, for a configuration.
std::vector<std::string> strategy_labels(const ExperimentConfig& config);

/// Writes results.csv and manifest.json into `dir`, creating it if needed.
void write_outputs(const ResultTable& table, const ExperimentConfig& config, const std::filesystem::path& dir);

inline constexpr const char* kArtifactName = "iab-planner";
inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace iab
