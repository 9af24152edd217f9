#pragma once

#include "stochord/crossings.hpp"
#include "stochord/distribution.hpp"

#include <functional>
#include <string>
#include <vector>

namespace stochord {

enum class Convention { none, zero_distance, infinite_numerator };

const char* to_string(Convention c);

/// Departure of the pair from X <=_st Y: share of W2^2 carried by {Q_X > Q_Y}.
struct DepartureReport {
    double epsilon = 0.0;
    double w2 = 0.0;
    double numerator = 0.0;    ///< integral of h^2 over A0
    double denominator = 0.0;  ///< W2^2
    IntervalSet a0;
    Convention convention = Convention::none;
};

struct DepartureOptions {
    double rel_tol = 1e-10;
    int grid_size = kDefaultGridSize;
    /// When false, heavy-tailed laws are admitted and a divergent numerator yields epsilon = 1.
    bool require_finite_second_moment = true;
};

/// Weight exp(log_weight(u)) on the u-domain, with interior points where panels must break.
struct UnitWeight {
    std::function<double(double)> log_weight;
    std::vector<double> split_points;
};

double w2_distance(const Distribution& x, const Distribution& y, const DepartureOptions& opt = {});

DepartureReport departure(const Distribution& x, const Distribution& y, const DepartureOptions& opt = {});

/// Departure with integrands h(u)^2 * w(u) over precomputed crossing sets. A null weight means w = 1.
DepartureReport weighted_departure(const Distribution& x, const Distribution& y, const CrossingSets& cs,
                                   const UnitWeight* weight, const DepartureOptions& opt = {});

/// L1 functional: integral of (F_Y - F_X) over {F_X < F_Y}, divided by ||F_Y - F_X||_1.
double departure_l1(const Distribution& x, const Distribution& y);

enum class UsualOrder { X_below_Y, Y_below_X, equal, crossing };

const char* to_string(UsualOrder v);

UsualOrder usual_order_verdict(const Distribution& x, const Distribution& y);

}  // namespace stochord
