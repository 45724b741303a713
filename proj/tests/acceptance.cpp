// Acceptance suite: one PASS/FAIL line per criterion, with details below it.
// Tolerances are fixed here and must not be loosened to make a run pass.

#include "iab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace iab;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kTrialsPerPoint = 200;
constexpr double kStrictSe = 2.0;   // "> 2 combined standard errors"
constexpr double kSlackSe = 1.0;    // "within 1 SE slack"
constexpr double kRateRelTol = 1e-9;
constexpr double kErrorLawFactor = 1.5;
constexpr int kReplicates = 30;

const fs::path kConfigs = fs::path(IAB_SOURCE_DIR) / "configs";

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

ExperimentConfig shipped(const std::string& name) {
    ExperimentConfig c = load_config(kConfigs / name);
    c.trials = kTrialsPerPoint;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + IAB_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// --- criteria ---------------------------------------------------------------

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "iab_acceptance_determinism";
    fs::remove_all(root);
    const std::vector<std::pair<std::string, std::string>> runs{
        {"symmetric_line.json", "sweep"},
        {"symmetric_ring.json", "sweep --parallelism 2"},
        {"rate_cdf.json", "sweep"},
        {"min_distance_sweep.json", "run --value 100 --trials 20"},
        {"forbidden_area_sweep.json", "run --value 150 --trials 20"},
    };
    for (const auto& [file, mode] : runs) {
        const std::string base = mode + " --config \"" + (kConfigs / file).string() + "\" --seed 4242 --out ";
        const fs::path a = root / (file + ".a"), b = root / (file + ".b");
        const int ra = run_cli(base + "\"" + a.string() + "\"");
        const int rb = run_cli(base + "\"" + b.string() + "\"");
        const bool ran = ra == 0 && rb == 0 && !slurp(a / "results.csv").empty();
        o.require(ran && slurp(a / "results.csv") == slurp(b / "results.csv"),
                  file + " (" + mode + "): byte-identical results.csv");
        // manifests differ only in the output directory they record
        const auto manifest = [](const fs::path& dir) {
            auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
            j["config"].erase("output");
            return j.dump();
        };
        o.require(ran && manifest(a) == manifest(b), file + " (" + mode + "): identical manifest apart from output path");
    }
    fs::remove_all(root);
    return o;
}

Outcome geometry_oracles() {
    Outcome o;
    const DiskRegion area(Point2D::Zero(), 707.1);
    Rng rng = make_stream(2024, {1});

    int los_mismatch = 0;
    for (int i = 0; i < 1000; ++i) {
        const BlockageField field = generate_blockages(area, 500.0, 10.0, rng);
        const Point2D tx = sample_uniform_in_disk(area, rng);
        const Point2D rx = sample_uniform_in_disk(area, rng);
        bool brute = true;
        for (const auto& w : field.walls()) {
            const auto [a, b] = w.endpoints();
            if (segments_intersect(tx, rx, a, b)) {
                brute = false;
                break;
            }
        }
        los_mismatch += is_los(tx, rx, field) != brute;
    }
    o.require(los_mismatch == 0, fmt("is_los vs exhaustive scan: %d mismatches in 1000 instances", los_mismatch));

    int dist_mismatch = 0;
    std::uniform_int_distribution<int> count(2, 150);
    for (int i = 0; i < 1000; ++i) {
        PointList pts;
        const int n = count(rng);
        for (int k = 0; k < n; ++k) pts.push_back(sample_uniform_in_disk(area, rng));
        double best = INFINITY;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                best = std::min(best, std::hypot(pts[a].x() - pts[b].x(), pts[a].y() - pts[b].y()));
        dist_mismatch += std::abs(min_pairwise_distance(pts) - best) > 1e-9 * best;
    }
    o.require(dist_mismatch == 0,
              fmt("min_pairwise_distance vs O(n^2) scan: %d mismatches in 1000 instances", dist_mismatch));

    const double lambda_a = 500.0 * area.area() / kSquareMetersPerKm2;
    double total = 0;
    for (int i = 0; i < 1000; ++i) total += static_cast<double>(sample_fhppp(area, 500.0, rng).size());
    const double mean = total / 1000;
    const double bound = 3.0 * std::sqrt(lambda_a / 1000);
    o.require(std::abs(mean - lambda_a) < bound,
              fmt("FHPPP mean count %.3f vs %.3f (|diff| %.3f < 3 sigma %.3f)", mean, lambda_a,
                  std::abs(mean - lambda_a), bound));
    return o;
}

Outcome rate_oracle() {
    Outcome o;
    const double tx_dbm = 24.0, g_dbi = 24.0, d = 150.0, w = 1e9, beta = 0.5;
    Scenario sc;
    sc.area = DiskRegion(Point2D::Zero(), 707.1);
    sc.donor = {dbm_to_watts(tx_dbm), AntennaPattern::from_dbi(g_dbi, g_dbi - 20, 30.0), std::nullopt};
    sc.ue = {0.0, AntennaPattern::omni(0.0), std::nullopt};
    sc.blockage_density = 0.0;
    sc.fixed_ues = PointList{Point2D(d, 0.0)};
    ChannelConfig ch;
    ch.fading.kind = FadingKind::DeterministicUnit;
    RadioConfig radio;
    radio.bandwidth = w;
    radio.beta = beta;

    const TrialOutcome t = simulate_trial(Deployment{{Point2D::Zero()}, {}}, sc, radio, ch, EvaluationSeeds{}, 0);

    // by hand: P_t G_tx G_rx / L(d) over N0 (1-beta) W
    const double p_w = std::pow(10.0, (tx_dbm - 30) / 10);
    const double loss_db = 32.4 + 20 * std::log10(28.0) + 20 * std::log10(d);
    const double s = p_w * std::pow(10.0, g_dbi / 10) * std::pow(10.0, -loss_db / 10);
    const double n = std::pow(10.0, (-174.0 + 7.0 - 30) / 10) * (1 - beta) * w;
    const double expected = (1 - beta) * w * std::log2(1 + s / n);
    const double rel = t.rates.size() == 1 ? std::abs(t.rates[0] - expected) / expected : INFINITY;
    o.require(rel < kRateRelTol, fmt("rate %.12g vs hand value %.12g (relative error %.2e)",
                                     t.rates.empty() ? NAN : t.rates[0], expected, rel));
    return o;
}

Outcome interior_maximum() {
    Outcome o;
    for (const char* file : {"symmetric_line.json", "symmetric_ring.json"}) {
        const ExperimentConfig c = shipped(file);
        o.require(c.sweep_values.size() == 8, fmt("%s: grid of %zu s-values", file, c.sweep_values.size()));
        const ResultTable t = run_experiment(c);
        for (const auto& label : strategy_labels(c)) {
            std::size_t arg = 0;
            for (std::size_t i = 1; i < c.sweep_values.size(); ++i)
                if (t.at(c.sweep_values[i], label).value > t.at(c.sweep_values[arg], label).value) arg = i;
            const ResultRow& peak = t.at(c.sweep_values[arg], label);
            const ResultRow& lo = t.at(c.sweep_values.front(), label);
            const ResultRow& hi = t.at(c.sweep_values.back(), label);
            const double m_lo = peak.value - lo.value, m_hi = peak.value - hi.value;
            const double need_lo = kStrictSe * combined(peak.std_error, lo.std_error);
            const double need_hi = kStrictSe * combined(peak.std_error, hi.std_error);
            const bool interior = arg != 0 && arg + 1 != c.sweep_values.size();
            o.require(interior && m_lo > need_lo && m_hi > need_hi,
                      fmt("%s %s: argmax s=%g cov %.4f; margin to s=%g %.4f (need %.4f), to s=%g %.4f (need %.4f)", file,
                          label.c_str(), peak.sweep_value, peak.value, lo.sweep_value, m_lo, need_lo, hi.sweep_value,
                          m_hi, need_hi));
        }
    }
    return o;
}

Outcome rate_cdf_ordering() {
    Outcome o;
    ExperimentConfig c = shipped("rate_cdf.json");
    c.sweep_values = {200.0};
    const ResultTable t = run_experiment(c);
    const auto above = [&](const char* label) {
        const ResultRow& r = t.at(200.0, label);
        return std::pair{1.0 - r.value, r.std_error};
    };
    const auto [p24_400, se24_400] = above("s400m_g24dBi");
    const auto [p28_400, se28_400] = above("s400m_g28dBi");
    const auto [p24_100, se24_100] = above("s100m_g24dBi");
    const auto [p28_100, se28_100] = above("s100m_g28dBi");
    const double need = kStrictSe * combined(se24_400, se28_400);
    o.require(p28_400 - p24_400 > need, fmt("s=400 m: P(rate > 200 Mbps) 28 dBi %.4f vs 24 dBi %.4f (diff %.4f, need %.4f)",
                                            p28_400, p24_400, p28_400 - p24_400, need));
    o.require(p28_400 - p24_400 > p28_100 - p24_100,
              fmt("gain effect at s=400 m %.4f > at s=100 m %.4f (s=100 m: 28 dBi %.4f, 24 dBi %.4f)",
                  p28_400 - p24_400, p28_100 - p24_100, p28_100, p24_100));
    return o;
}

Outcome min_distance_ordering() {
    Outcome o;
    const ExperimentConfig c = shipped("min_distance_sweep.json");
    o.require(c.sweep_values.size() == 5 && c.iterations == 20,
              fmt("5-point r_th grid (%zu), N_it = 20 (%zu)", c.sweep_values.size(), c.iterations));
    const ResultTable t = run_experiment(c);
    for (double density : c.ue_densities) {
        const std::string prefix = c.ue_densities.size() > 1 ? fmt("ue%g_", density) : "";
        for (const char* mode : {"alg1", "alg1_blockage_aware"}) {
            const std::string label = prefix + mode;
            int strict = 0;
            bool dominates = true, monotone = true;
            std::string trace;
            for (std::size_t i = 0; i < c.sweep_values.size(); ++i) {
                const double r = c.sweep_values[i];
                const ResultRow& a = t.at(r, label);
                const ResultRow& h = t.at(r, prefix + "hexagonal");
                dominates = dominates && a.metric == "coverage" && a.value >= h.value;
                strict += a.value - h.value > kStrictSe * combined(a.std_error, h.std_error);
                if (i > 0) {
                    const ResultRow& prev = t.at(c.sweep_values[i - 1], label);
                    monotone = monotone && a.value <= prev.value + kSlackSe * combined(a.std_error, prev.std_error);
                }
                trace += fmt(" %g:%.4f/%.4f", r, a.value, h.value);
            }
            o.require(dominates, label + " >= hexagonal at every r_th (alg/hex):" + trace);
            o.require(strict >= 3, fmt("%s strictly better by > 2 SE at %d of 5 points", label.c_str(), strict));
            o.require(monotone, label + " non-increasing in r_th within 1 SE per step");
        }
    }
    return o;
}

Outcome forbidden_area_ordering() {
    Outcome o;
    const ExperimentConfig c = shipped("forbidden_area_sweep.json");
    o.require(c.sweep_values == std::vector<double>{100, 150, 200}, "grid c in {100, 150, 200} m");
    const bool has_densities = std::find(c.ue_densities.begin(), c.ue_densities.end(), 200.0) != c.ue_densities.end() &&
                               std::find(c.ue_densities.begin(), c.ue_densities.end(), 400.0) != c.ue_densities.end();
    o.require(has_densities, "UE densities include 200 and 400 per km^2");
    if (!has_densities) return o;
    const ResultTable t = run_experiment(c);
    for (double cval : c.sweep_values) {
        for (double density : c.ue_densities) {
            const std::string p = fmt("ue%g_", density);
            const ResultRow& alg = t.at(cval, p + "alg2");
            const ResultRow& ru = t.at(cval, p + "random_unconstrained");
            const ResultRow& r = t.at(cval, p + "random");
            o.require(alg.value >= ru.value - kSlackSe * combined(alg.std_error, ru.std_error),
                      fmt("c=%g UE %g: alg2 %.4f >= random_unconstrained %.4f (slack %.4f)", cval, density, alg.value,
                          ru.value, kSlackSe * combined(alg.std_error, ru.std_error)));
            o.require(ru.value >= r.value - kSlackSe * combined(ru.std_error, r.std_error),
                      fmt("c=%g UE %g: random_unconstrained %.4f >= random %.4f (slack %.4f)", cval, density, ru.value,
                          r.value, kSlackSe * combined(ru.std_error, r.std_error)));
        }
        const double lo = t.at(cval, "ue200_alg2").value, hi = t.at(cval, "ue400_alg2").value;
        o.require(lo > hi, fmt("c=%g: alg2 at UE 200 %.4f > at UE 400 %.4f", cval, lo, hi));
    }
    return o;
}

Outcome optimizer_property() {
    Outcome o;
    ExperimentConfig c = shipped("min_distance_sweep.json");
    const Scenario scenario = c.scenario_for(c.ue_densities.front());
    const RadioConfig radio = c.radio_for(c.rate_thresholds_mbps.front());
    const ChannelConfig channel = c.channel();
    const std::size_t n_children = c.child_count();
    const double r_th = 100.0;
    const auto min_dist = PlacementConstraint::min_distance_of(r_th);
    const std::vector<std::size_t> budgets{1, 2, 5, 10, 20};

    std::vector<double> means(budgets.size(), 0.0);
    int violations = 0, checked = 0;
    const auto check_min_distance = [&](const Deployment& d) {
        PointList all = d.donors;
        all.insert(all.end(), d.children.begin(), d.children.end());
        bool ok = all.size() == c.donors + n_children;
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                ok = ok && std::hypot(all[i].x() - all[j].x(), all[i].y() - all[j].y()) > r_th;
        violations += !ok;
        ++checked;
    };
    for (int rep = 0; rep < kReplicates; ++rep) {
        for (std::size_t b = 0; b < budgets.size(); ++b) {
            OptimizerConfig oc = c.optimizer();
            oc.n_iterations = budgets[b];
            oc.mc_trials_per_candidate = 20;
            const PlacementResult res = optimize_placement(min_dist, c.donors, n_children, scenario, radio, channel, oc,
                                                           derive_seed(77, {static_cast<std::uint64_t>(rep)}));
            means[b] += res.coverage / kReplicates;
            check_min_distance(res.locations);
        }
    }
    std::string trace;
    bool nondecreasing = true;
    for (std::size_t b = 0; b < budgets.size(); ++b) {
        trace += fmt(" N_it=%zu:%.4f", budgets[b], means[b]);
        if (b > 0) nondecreasing = nondecreasing && means[b] >= means[b - 1];
    }
    o.require(nondecreasing, "mean best coverage over 30 repeats non-decreasing:" + trace);

    // forbidden areas, five disks at the largest radius
    const ExperimentConfig fc = shipped("forbidden_area_sweep.json");
    const auto disks = fc.forbidden_disks(200.0);
    const Scenario fs_scenario = fc.scenario_for(fc.ue_densities.front());
    for (int rep = 0; rep < kReplicates; ++rep) {
        OptimizerConfig oc = fc.optimizer();
        oc.n_iterations = 5;
        oc.mc_trials_per_candidate = 5;
        const PlacementResult res =
            optimize_placement(PlacementConstraint::forbidden_areas(disks), fc.donors, fc.child_count(), fs_scenario,
                               fc.radio_for(75.0), fc.channel(), oc, derive_seed(78, {static_cast<std::uint64_t>(rep)}));
        bool ok = res.locations.donors.size() == fc.donors && res.locations.children.size() == fc.child_count();
        for (const auto* set : {&res.locations.donors, &res.locations.children})
            for (const auto& p : *set)
                for (const auto& d : disks)
                    ok = ok && std::hypot(p.x() - d.center.x(), p.y() - d.center.y()) >= d.radius;
        violations += !ok;
        ++checked;
    }
    o.require(violations == 0, fmt("%d of %d returned layouts violate their constraint", violations, checked));
    return o;
}

Outcome error_law() {
    Outcome o;
    ExperimentConfig c = shipped("symmetric_ring.json");
    const Scenario scenario = c.scenario_for(c.ue_densities.front());
    const RadioConfig radio = c.radio_for(50.0);
    const ChannelConfig channel = c.channel();
    const Deployment d = symmetric_deployment("ring", *c.children, 400.0, scenario.area);

    const auto spread = [&](std::size_t trials) {
        std::vector<double> values;
        for (int rep = 0; rep < kReplicates; ++rep) {
            const std::uint64_t seed = derive_seed(31337, {trials, static_cast<std::uint64_t>(rep)});
            values.push_back(evaluate_topology(d, scenario, radio, channel, trials, seed).value);
        }
        const auto [mean, se] = mean_and_std_error(values);
        (void)mean;
        return se * std::sqrt(static_cast<double>(values.size()));
    };
    const double sd50 = spread(50), sd200 = spread(200);
    const double ratio = sd50 / sd200;
    const double expected = std::sqrt(200.0 / 50.0);
    o.require(ratio > expected / kErrorLawFactor && ratio < expected * kErrorLawFactor,
              fmt("sd(50 trials) %.5f / sd(200 trials) %.5f = %.3f, expected %.1f within factor %.1f", sd50, sd200, ratio,
                  expected, kErrorLawFactor));
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"C1", "determinism: repeated CLI runs give byte-identical tables", 600, determinism},
        {"C2", "geometry oracles: LOS, minimum distance, FHPPP mean", 30, geometry_oracles},
        {"C3", "rate formula: single donor, single UE, hand-derived value", 5, rate_oracle},
        {"C4", "symmetric deployment: interior coverage maximum in s", 300, interior_maximum},
        {"C5", "rate CDF: antenna gain ordering at 200 Mbps", 300, rate_cdf_ordering},
        {"C6", "minimum-distance sweep: alg1 vs hexagonal", 900, min_distance_ordering},
        {"C7", "forbidden-area sweep: alg2 vs random baselines", 900, forbidden_area_ordering},
        {"C8", "optimizer: best coverage grows with N_it, constraints hold", 600, optimizer_property},
        {"C9", "Monte-Carlo error scales as 1/sqrt(trials)", 600, error_law},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.require(secs < c.budget_s, fmt("runtime %.1f s (budget %.0f s)", secs, c.budget_s));
        failed += !out.pass;
        std::cout << (out.pass ? "PASS " : "FAIL ") << c.id << "  " << c.name << '\n';
        for (const auto& n : out.notes) std::cout << "        " << n << '\n';
        std::cout.flush();
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
