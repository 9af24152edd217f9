#pragma once

#include "stochord/distribution.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace stochord {

/// Ordered disjoint open intervals inside (0,1).
class IntervalSet {
public:
    using Interval = std::pair<double, double>;

    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> intervals);

    const std::vector<Interval>& intervals() const noexcept { return iv_; }
    bool empty() const noexcept { return iv_.empty(); }
    double measure() const;
    bool contains(double u) const;
    /// Distance from g to the closure; +inf for the empty set.
    double distance_to(double g) const;
    /// sup(S ∩ (0, g)), or nullopt when the intersection is empty.
    std::optional<double> sup_below(double g) const;
    /// inf(S ∩ (g, 1)), or nullopt when the intersection is empty.
    std::optional<double> inf_above(double g) const;

    static IntervalSet unite(const IntervalSet& a, const IntervalSet& b);

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> iv_;
};

struct CrossingSets {
    IntervalSet a0;  ///< {u : Q_X(u) > Q_Y(u)}
    IntervalSet a1;  ///< {u : Q_X(u) < Q_Y(u)}
    IntervalSet a2;  ///< a0 ∪ a1
};

inline constexpr int kDefaultGridSize = 4096;
inline constexpr int kMinGridSize = 64;
inline constexpr double kCrossingTol = 1e-12;

/// Sign pattern of Q_X - Q_Y on a uniform grid, boundaries refined by bisection to 1e-12.
/// Near-zero runs (|h| <= 1e-12 * scale) belong to neither set.
CrossingSets crossing_sets(const Distribution& x, const Distribution& y, int grid_size = kDefaultGridSize);

/// Boundary levels around gamma, expressed in the u-domain.
struct BoundaryQuantities {
    double gamma = 0.0;
    double fx_c = 0.0;  ///< sup(A0 ∩ (0,γ)) or 0
    double fx_a = 0.0;  ///< sup(A2 ∩ (0,γ)) or 0
    double fx_b = 1.0;  ///< inf(A2 ∩ (γ,1)) or 1
    double fx_d = 1.0;  ///< inf(A0 ∩ (γ,1)) or 1
    bool left_empty = true;   ///< A0 ∩ (0,γ) = ∅
    bool right_empty = true;  ///< A0 ∩ (γ,1) = ∅
    bool a2_left_empty = true;
    bool a2_right_empty = true;
};

BoundaryQuantities boundary_quantities(const IntervalSet& a0, const IntervalSet& a2, double gamma);

/// Separation hypotheses behind the geometric decay bound; with delta, also the windowed form.
bool hypothesis_check(const BoundaryQuantities& bq, std::optional<double> delta = std::nullopt);

}  // namespace stochord
