#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace iab {

/** Scalar type used throughout the simulator */
using scalar_t = double;

/** Planar position in meters */
template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

using Point2D = Point2<scalar_t>;

/** Ordered list of positions */
using PointList = std::vector<Point2D>;

/** Dense matrix of per-link quantities (transmitters x receivers) */
using LinkMatrix = Eigen::Matrix<scalar_t, Eigen::Dynamic, Eigen::Dynamic>;

/** Raised on invalid arguments, configuration values, or broken invariants. */
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Raised when a rejection-sampling placement exhausts its attempt budget. */
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, std::size_t node_index)
        : Error(what), node_index_(node_index) {}

    std::size_t node_index() const noexcept { return node_index_; }

private:
    std::size_t node_index_;
};

constexpr scalar_t kPi = 3.14159265358979323846;
constexpr scalar_t kTwoPi = 2 * kPi;

/** Square meters per square kilometer; densities are configured per km^2. */
constexpr scalar_t kSquareMetersPerKm2 = 1.0e6;

inline scalar_t db_to_linear(scalar_t db) { return std::pow(10.0, db / 10.0); }
inline scalar_t linear_to_db(scalar_t lin) { return 10.0 * std::log10(lin); }
inline scalar_t dbm_to_watts(scalar_t dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace iab
