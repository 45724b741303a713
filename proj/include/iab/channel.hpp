#pragma once

#include "iab/random.hpp"
#include "iab/types.hpp"

namespace iab {

/// Two-level sectored antenna: main-lobe gain inside the half-power
/// beamwidth, side-lobe gain elsewhere. Gains are linear power ratios.
struct AntennaPattern {
    scalar_t main_lobe_gain = 1.0;
    scalar_t side_lobe_gain = 1.0;
    scalar_t half_power_beamwidth = kPi / 6;  ///< radians

    static AntennaPattern from_dbi(scalar_t main_dbi, scalar_t side_dbi, scalar_t beamwidth_deg);
    static AntennaPattern omni(scalar_t gain_dbi = 0.0);

    void validate() const;
};

/** Close-in free-space reference path loss model. */
struct PathLossParams {
    scalar_t carrier_frequency_ghz = 28.0;
    scalar_t exponent_los = 2.0;
    scalar_t exponent_nlos = 3.0;
    /// Loss at the 1 m reference distance in dB.
    scalar_t reference_intercept_db = 0.0;

    /// Intercept 32.4 + 20 log10(f_GHz) dB, the free-space loss at 1 m.
    static PathLossParams close_in(scalar_t carrier_ghz, scalar_t exponent_los, scalar_t exponent_nlos);

    void validate() const;
};

enum class FadingKind { DeterministicUnit, Nakagami };

/** Small-scale fading power law; Nakagami draws are Gamma(m, 1/m) with unit mean. */
struct FadingModel {
    FadingKind kind = FadingKind::Nakagami;
    scalar_t m_los = 3.0;
    scalar_t m_nlos = 2.0;

    void validate() const;
};

/// One evaluated link. Records every factor of the received-power product.
struct LinkBudget {
    bool los = true;
    scalar_t path_gain = 1.0;
    scalar_t tx_gain = 1.0;
    scalar_t rx_gain = 1.0;
    scalar_t fading = 1.0;
    scalar_t tx_power = 0.0;
    scalar_t received_power = 0.0;  ///< watts

    static LinkBudget compose(scalar_t tx_power, bool los, scalar_t path_gain, scalar_t tx_gain,
                              scalar_t rx_gain, scalar_t fading);
};

/// Wraps an angle to (-pi, pi].
scalar_t wrap_angle(scalar_t angle);

/// Unsigned angle between two directions, in [0, pi].
scalar_t angle_between(const Point2D& a, const Point2D& b);

/// Sectored gain for an angular offset from boresight. The beam edge is inclusive.
scalar_t antenna_gain(const AntennaPattern& pattern, scalar_t offset_angle);

/// Close-in path gain (linear, <= 1 for loss >= 0). Distances below 1 m are clamped to 1 m.
scalar_t path_loss(scalar_t distance, bool los, const PathLossParams& params);

/// Fading power coefficient for one link.
scalar_t sample_fading(const FadingModel& model, bool los, Rng& rng);

/// Product of transmit power and all link factors.
scalar_t received_power(scalar_t tx_power, scalar_t fading, scalar_t path_gain, scalar_t tx_gain, scalar_t rx_gain);

}  // namespace iab
