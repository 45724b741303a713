#include "iab/channel.hpp"
#include "iab/geometry.hpp"

#include <cmath>

namespace iab {

AntennaPattern AntennaPattern::from_dbi(scalar_t main_dbi, scalar_t side_dbi, scalar_t beamwidth_deg) {
    AntennaPattern p{db_to_linear(main_dbi), db_to_linear(side_dbi), beamwidth_deg * kPi / 180.0};
    p.validate();
    return p;
}

AntennaPattern AntennaPattern::omni(scalar_t gain_dbi) {
    const scalar_t g = db_to_linear(gain_dbi);
    return AntennaPattern{g, g, kTwoPi - 1e-12};
}

void AntennaPattern::validate() const {
    if (!(side_lobe_gain > 0)) {
        throw Error("AntennaPattern: side-lobe gain must be positive");
    }
    if (!(main_lobe_gain >= side_lobe_gain)) {
        throw Error("AntennaPattern: main-lobe gain must not be below side-lobe gain");
    }
    if (!(half_power_beamwidth > 0 && half_power_beamwidth < kTwoPi)) {
        throw Error("AntennaPattern: half-power beamwidth must lie in (0, 2*pi)");
    }
}

PathLossParams PathLossParams::close_in(scalar_t carrier_ghz, scalar_t exponent_los, scalar_t exponent_nlos) {
    PathLossParams p{carrier_ghz, exponent_los, exponent_nlos, 32.4 + 20.0 * std::log10(carrier_ghz)};
    p.validate();
    return p;
}

void PathLossParams::validate() const {
    if (!(carrier_frequency_ghz > 0)) {
        throw Error("PathLossParams: carrier frequency must be positive");
    }
    if (!(exponent_los > 0) || !(exponent_nlos > 0)) {
        throw Error("PathLossParams: path loss exponents must be positive");
    }
    if (exponent_nlos < exponent_los) {
        throw Error("PathLossParams: NLOS exponent must not be below the LOS exponent");
    }
}

void FadingModel::validate() const {
    if (kind == FadingKind::Nakagami && (!(m_los >= 0.5) || !(m_nlos >= 0.5))) {
        throw Error("FadingModel: Nakagami shape parameters must be >= 0.5");
    }
}

LinkBudget LinkBudget::compose(scalar_t tx_power, bool los, scalar_t path_gain, scalar_t tx_gain,
                               scalar_t rx_gain, scalar_t fading) {
    return LinkBudget{los,      path_gain, tx_gain, rx_gain, fading, tx_power,
                      iab::received_power(tx_power, fading, path_gain, tx_gain, rx_gain)};
}

scalar_t wrap_angle(scalar_t angle) {
    scalar_t a = std::remainder(angle, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    return a;
}

scalar_t angle_between(const Point2D& a, const Point2D& b) {
    return std::abs(std::atan2(cross2<scalar_t>(a, b), a.dot(b)));
}

scalar_t antenna_gain(const AntennaPattern& pattern, scalar_t offset_angle) {
    return std::abs(offset_angle) <= pattern.half_power_beamwidth / 2 ? pattern.main_lobe_gain
                                                                      : pattern.side_lobe_gain;
}

scalar_t path_loss(scalar_t distance, bool los, const PathLossParams& params) {
    if (!(distance > 0)) {
        throw Error("path_loss: distance must be positive");
    }
    const scalar_t d = std::max(distance, scalar_t(1));
    const scalar_t exponent = los ? params.exponent_los : params.exponent_nlos;
    const scalar_t loss_db = params.reference_intercept_db + 10.0 * exponent * std::log10(d);
    return std::pow(10.0, -loss_db / 10.0);
}

scalar_t sample_fading(const FadingModel& model, bool los, Rng& rng) {
    if (model.kind == FadingKind::DeterministicUnit) {
        return 1.0;
    }
    const scalar_t m = los ? model.m_los : model.m_nlos;
    std::gamma_distribution<scalar_t> gamma(m, 1.0 / m);
    return gamma(rng);
}

scalar_t received_power(scalar_t tx_power, scalar_t fading, scalar_t path_gain, scalar_t tx_gain, scalar_t rx_gain) {
    return tx_power * fading * path_gain * tx_gain * rx_gain;
}

}  // namespace iab
