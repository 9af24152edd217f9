#include "stochord/asymptotics.hpp"

#include "stochord/errors.hpp"
#include "stochord/parallel.hpp"
#include "stochord/piecewise.hpp"
#include "stochord/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace stochord {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamp_unit(double u) { return std::clamp(u, kQuantileClamp, 1.0 - kQuantileClamp); }

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

void require_ascending(const std::vector<int>& ns) {
    if (ns.empty()) throw argument_error("index list is empty");
    for (std::size_t i = 1; i < ns.size(); ++i) {
        if (!(ns[i] > ns[i - 1])) throw argument_error("index list must be strictly ascending");
    }
}

}  // namespace

// ---------------------------------------------------------------- FamilyTemplate

FamilyTemplate FamilyTemplate::order_stat(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw argument_error("gamma must lie in [0,1]");
    FamilyTemplate f;
    f.kind = Kind::order_stat;
    f.alphas = {1.0};
    f.gammas = {gamma};
    return f;
}

FamilyTemplate FamilyTemplate::mixture(std::vector<double> alphas, std::vector<double> gammas) {
    Distortion::mixture(2, alphas, gammas);  // validates weights and ordering
    FamilyTemplate f;
    f.kind = Kind::mixture;
    f.alphas = std::move(alphas);
    f.gammas = std::move(gammas);
    return f;
}

FamilyTemplate FamilyTemplate::record(int k) {
    if (k < 1) throw argument_error("record needs k >= 1");
    FamilyTemplate f;
    f.kind = Kind::record;
    f.k = k;
    f.gammas = {1.0};
    return f;
}

Distortion FamilyTemplate::at(int n, const IndexSequence& seq) const {
    if (kind == Kind::order_stat) return Distortion::order_stat(n, seq.gamma_at(n));
    return at(n);
}

Distortion FamilyTemplate::at(int n) const {
    switch (kind) {
        case Kind::order_stat: return Distortion::order_stat(n, gammas[0]);
        case Kind::mixture: return Distortion::mixture(n, alphas, gammas);
        case Kind::record: return Distortion::record(n, k);
    }
    throw argument_error("unknown family");
}

std::string FamilyTemplate::describe() const {
    switch (kind) {
        case Kind::order_stat: return "os(gamma=" + format_number(gammas[0]) + ")";
        case Kind::record: return "record(k=" + std::to_string(k) + ")";
        case Kind::mixture: {
            std::string s = "mix(";
            for (std::size_t i = 0; i < alphas.size(); ++i) {
                if (i) s += ",";
                s += format_number(alphas[i]) + "@" + format_number(gammas[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

// ---------------------------------------------------------------- departures and sweeps

DepartureReport distorted_departure(const Distribution& x, const Distribution& y, const Distortion& d,
                                    const CrossingSets& cs, const DepartureOptions& opt) {
    UnitWeight w;
    w.log_weight = [&d](double u) { return d.log_derivative(u); };
    w.split_points = d.modes();
    return weighted_departure(x, y, cs, &w, opt);
}

DepartureReport distorted_departure(const Distribution& x, const Distribution& y, const Distortion& d,
                                    const DepartureOptions& opt) {
    if (opt.require_finite_second_moment && (!x.has_finite_second_moment() || !y.has_finite_second_moment())) {
        const auto& bad = x.has_finite_second_moment() ? y : x;
        throw unsupported_error("infinite second moment: " + bad.describe() + " has no finite variance");
    }
    return distorted_departure(x, y, d, crossing_sets(x, y, opt.grid_size), opt);
}

std::optional<double> tail_log_slope(const std::vector<int>& ns, const std::vector<double>& eps) {
    const std::size_t len = ns.size();
    const std::size_t start = len / 2;
    std::vector<double> xs, ys;
    for (std::size_t i = start; i < len; ++i) {
        if (eps[i] > 0.0) {
            xs.push_back(static_cast<double>(ns[i]));
            ys.push_back(std::log(eps[i]));
        }
    }
    if (xs.size() < 2) return std::nullopt;
    return ls_slope(xs, ys);
}

SweepResult sweep(const Distribution& x, const Distribution& y, const FamilyTemplate& family,
                  const IndexSequence& seq, const std::vector<int>& ns) {
    require_ascending(ns);
    const auto cs = crossing_sets(x, y);
    SweepResult s;
    s.indices = ns;
    s.gammas_n.resize(ns.size());
    s.epsilons.resize(ns.size());
    s.w2s.resize(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        const Distortion d = family.at(ns[i], seq);
        const auto rep = distorted_departure(x, y, d, cs);
        s.gammas_n[i] = family.kind == FamilyTemplate::Kind::order_stat ? d.gammas()[0] : kNaN;
        s.epsilons[i] = rep.epsilon;
        s.w2s[i] = rep.w2;
    });
    s.fitted_log_slope = tail_log_slope(s.indices, s.epsilons);
    return s;
}

SweepResult sweep_pairs(const std::vector<int>& ns,
                        const std::function<std::pair<Distribution, Distribution>(int)>& pair_at) {
    require_ascending(ns);
    SweepResult s;
    s.indices = ns;
    s.gammas_n.assign(ns.size(), kNaN);
    s.epsilons.resize(ns.size());
    s.w2s.resize(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        const auto [x, y] = pair_at(ns[i]);
        const auto rep = departure(x, y);
        s.epsilons[i] = rep.epsilon;
        s.w2s[i] = rep.w2;
    });
    s.fitted_log_slope = tail_log_slope(s.indices, s.epsilons);
    return s;
}

const char* to_string(DastVerdict v) {
    switch (v) {
        case DastVerdict::holds: return "holds";
        case DastVerdict::fails: return "fails";
        case DastVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

DastVerdict dast_verdict(const SweepResult& s, double threshold, int window) {
    if (window < 1 || static_cast<std::size_t>(window) > s.epsilons.size())
        throw argument_error("dast_verdict: window must be between 1 and the sweep length");
    const auto begin = s.epsilons.end() - window;
    std::vector<double> xs, ys(begin, s.epsilons.end());
    for (auto it = s.indices.end() - window; it != s.indices.end(); ++it) xs.push_back(*it);
    const bool small = std::all_of(ys.begin(), ys.end(), [&](double e) { return e < threshold; });
    if (small && (window == 1 || ls_slope(xs, ys) <= 0.0)) return DastVerdict::holds;
    if (*std::min_element(ys.begin(), ys.end()) > 10.0 * threshold) return DastVerdict::fails;
    return DastVerdict::inconclusive;
}

// ---------------------------------------------------------------- decay bound

DecayBound decay_bound(const CrossingSets& cs, double gamma, double eps) {
    DecayBound out;
    out.bq = boundary_quantities(cs.a0, cs.a2, gamma);
    out.eps = eps;
    const auto& q = out.bq;
    if (!hypothesis_check(q)) {
        std::ostringstream msg;
        msg << "decay_bound: separation hypotheses fail at gamma=" << format_number(gamma) << " (fx_c="
            << format_number(q.fx_c) << ", fx_a=" << format_number(q.fx_a) << ", fx_b=" << format_number(q.fx_b)
            << ", fx_d=" << format_number(q.fx_d) << ")";
        throw domain_error(msg.str());
    }
    if (!(eps > 0.0)) throw domain_error("decay_bound: eps must be > 0");
    const bool left = !q.left_empty, right = !q.right_empty;
    if (left && !(eps < q.fx_a - q.fx_c))
        throw domain_error("decay_bound: eps must be < fx_a - fx_c = " + format_number(q.fx_a - q.fx_c));
    if (right && !(eps < q.fx_d - q.fx_b))
        throw domain_error("decay_bound: eps must be < fx_d - fx_b = " + format_number(q.fx_d - q.fx_b));

    double z = 0.0;
    if (gamma == 1.0) {
        if (left) z = q.fx_c / (q.fx_a - eps);
    } else if (gamma == 0.0) {
        if (right) z = (1.0 - q.fx_d) / (1.0 - q.fx_b - eps);
    } else {
        if (left) {
            z = std::max(z, std::pow(q.fx_c / (q.fx_a - eps), gamma) *
                                std::pow((1.0 - q.fx_c) / (1.0 - q.fx_a + eps), 1.0 - gamma));
        }
        if (right) {
            z = std::max(z, std::pow(q.fx_d / (q.fx_b + eps), gamma) *
                                std::pow((1.0 - q.fx_d) / (1.0 - q.fx_b - eps), 1.0 - gamma));
        }
    }
    if (!(z >= 0.0 && z < 1.0)) throw domain_error("decay_bound: rate z=" + format_number(z) + " is not below 1");
    out.z = z;
    return out;
}

DecayBound decay_bound(const Distribution& x, const Distribution& y, double gamma, double eps) {
    return decay_bound(crossing_sets(x, y), gamma, eps);
}

bool bound_validation(const SweepResult& s, const DecayBound& b) {
    const std::size_t start = s.epsilons.size() / 2;
    const bool all_zero = std::all_of(s.epsilons.begin() + static_cast<std::ptrdiff_t>(start), s.epsilons.end(),
                                      [](double e) { return e == 0.0; });
    if (all_zero) return true;
    if (b.z == 0.0) return false;
    const auto slope = tail_log_slope(s.indices, s.epsilons);
    if (!slope) return false;
    return *slope <= std::log(b.z) + 0.05;
}

// ---------------------------------------------------------------- precedence

double precedence_probability(const Distribution& x, const Distribution& y, const Distortion& d) {
    if (!x.is_continuous() || !y.is_continuous())
        throw unsupported_error("precedence_probability needs continuous laws");
    const Law& lx = x.law();
    const Law& ly = y.law();
    auto f = [&](double v) {
        const double vc = clamp_unit(v);
        return d.value(lx.cdf(ly.quantile(vc))) * d.derivative(vc);
    };
    std::vector<double> cuts{0.0};
    for (double m : d.modes()) cuts.push_back(m);
    cuts.push_back(0.5);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    quad::Options o;
    o.rel_tol = 1e-11;
    o.abs_tol = 1e-12;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += quad::integrate_unit(f, cuts[i], cuts[i + 1], o).value;
    return std::clamp(acc, 0.0, 1.0);
}

double precedence_probability(const Distribution& x, const Distribution& y, int n, double gamma_n) {
    return precedence_probability(x, y, Distortion::order_stat(n, gamma_n));
}

MonteCarloEstimate precedence_monte_carlo(const Distribution& x, const Distribution& y, int n, double gamma_n,
                                          std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw argument_error("Monte Carlo needs at least one sample");
    const int r = rank_index(n, gamma_n);
    // Fixed blocks with their own seeded streams keep the estimate independent of the thread count.
    constexpr std::size_t kBlock = 1 << 15;
    const std::size_t blocks = (samples + kBlock - 1) / kBlock;
    std::vector<std::size_t> block_hits(blocks, 0);
    parallel_for(blocks, [&](std::size_t blk) {
        std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(blk), static_cast<std::uint32_t>(blk >> 32)};
        std::mt19937_64 rng(sseq);
        std::gamma_distribution<double> ga(r + 1.0, 1.0), gb(static_cast<double>(n - r), 1.0);
        auto uniform_order_stat = [&] {
            const double a = ga(rng), b = gb(rng);
            return clamp_unit(a / (a + b));
        };
        const std::size_t end = std::min(samples, (blk + 1) * kBlock);
        std::size_t h = 0;
        for (std::size_t i = blk * kBlock; i < end; ++i) {
            const double xv = x.quantile(uniform_order_stat());
            const double yv = y.quantile(uniform_order_stat());
            h += xv <= yv ? 1 : 0;
        }
        block_hits[blk] = h;
    });
    const std::size_t hits = std::accumulate(block_hits.begin(), block_hits.end(), std::size_t{0});
    MonteCarloEstimate e;
    e.samples = samples;
    e.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(samples));
    return e;
}

const char* to_string(AspVerdict v) {
    switch (v) {
        case AspVerdict::leq_asp: return "leq_asp";
        case AspVerdict::eq_asp: return "eq_asp";
        case AspVerdict::neither: return "neither";
        case AspVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

AspReport asp_verdict(const Distribution& x, const Distribution& y, const IndexSequence& seq,
                      const std::vector<int>& ns) {
    const auto cs = crossing_sets(x, y);
    const double g = seq.gamma();
    AspReport rep;
    rep.dist_a0 = cs.a0.distance_to(g);
    rep.dist_a2 = cs.a2.distance_to(g);
    if (rep.dist_a2 > 0.0) {
        rep.verdict = AspVerdict::eq_asp;
        return rep;
    }
    if (rep.dist_a0 > 0.0) {
        rep.verdict = AspVerdict::leq_asp;
        return rep;
    }
    if (ns.empty()) return rep;
    require_ascending(ns);
    rep.ns = ns;
    rep.precedence.resize(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        rep.precedence[i] = precedence_probability(x, y, ns[i], seq.gamma_at(ns[i]));
    });
    const std::size_t tail = std::max<std::size_t>(std::min<std::size_t>(3, ns.size()), ns.size() / 2);
    const auto first = rep.precedence.end() - static_cast<std::ptrdiff_t>(tail);
    const auto [lo, hi] = std::minmax_element(first, rep.precedence.end());
    const double limit = std::accumulate(first, rep.precedence.end(), 0.0) / static_cast<double>(tail);
    if (*hi - *lo <= 0.02) {
        rep.verdict = limit >= 0.5 ? AspVerdict::leq_asp : AspVerdict::neither;
    }
    return rep;
}

BinomialProbe binomial_limit_probe(double gamma, double u, const std::vector<int>& ns) {
    if (!(u >= 0.0 && u <= 1.0)) throw domain_error("binomial_limit_probe: u must lie in [0,1]");
    BinomialProbe p;
    for (int n : ns) {
        const auto d = Distortion::order_stat(n, gamma);
        p.phi_values.push_back(d.value(u));
        const int r = d.ranks()[0];
        if (u == 0.0) {
            p.scaled_pmf.push_back(r == 0 ? n : 0.0);
        } else if (u == 1.0) {
            p.scaled_pmf.push_back(r == n - 1 ? n : 0.0);
        } else {
            p.scaled_pmf.push_back(d.derivative(u));
        }
    }
    return p;
}

// ---------------------------------------------------------------- condition probe

ConditionProbeReport condition_probe(const FamilyTemplate& family, const std::vector<int>& ns, double probe_eps) {
    require_ascending(ns);
    if (!(probe_eps > 0.0 && probe_eps < 0.5)) throw argument_error("probe_eps must lie in (0, 0.5)");
    ConditionProbeReport rep;
    rep.family = family.describe();
    rep.gammas = family.gammas;
    const auto& gs = family.gammas;

    // Half-widths of the C3 windows.
    for (std::size_t i = 0; i < gs.size(); ++i) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < gs.size(); ++j) {
            if (j == i) continue;
            const auto mc = mixture_crossing(std::min(gs[i], gs[j]), std::max(gs[i], gs[j]));
            d = std::min(d, mc.delta_ij);
        }
        rep.deltas.push_back(d);
    }

    std::vector<Distortion> members;
    for (int n : ns) members.push_back(family.at(n));

    auto probe = [&](double g, double a, double b) {
        C3Witness w{g, a, b, {}};
        for (const auto& d : members) w.log_ratios.push_back(d.log_derivative(a) - d.log_derivative(b));
        rep.c3_witnesses.push_back(std::move(w));
    };
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const double g = gs[i];
        const double left = std::min(rep.deltas[i], g);
        const double right = std::min(rep.deltas[i], 1.0 - g);
        if (left > 0.0) probe(g, g - 0.75 * left, g - 0.25 * left);
        if (right > 0.0) probe(g, g + 0.75 * right, g + 0.25 * right);
    }
    rep.c3_pass = !rep.c3_witnesses.empty() &&
                  std::all_of(rep.c3_witnesses.begin(), rep.c3_witnesses.end(), [](const C3Witness& w) {
                      return w.log_ratios.front() - w.log_ratios.back() >= std::log(10.0);
                  });

    constexpr int kGrid = 512;
    constexpr double kStep = 1e-4;
    auto off_window = [&](double u) {
        return std::all_of(gs.begin(), gs.end(), [&](double g) { return std::fabs(u - g) >= probe_eps; });
    };
    std::vector<double> grid;
    for (int i = 0; i < kGrid; ++i) {
        const double u = (i + 0.5) / kGrid;
        if (off_window(u)) grid.push_back(u);
    }

    const Distortion& last = members.back();
    for (double u : grid) {
        const double fm = last.derivative(u - kStep), f0 = last.derivative(u), fp = last.derivative(u + kStep);
        const double d2 = fp - 2.0 * f0 + fm;
        if (d2 < -1e-9 * (std::fabs(fp) + 2.0 * std::fabs(f0) + std::fabs(fm))) ++rep.c4_violations;
    }
    rep.c4_pass = rep.c4_violations == 0;
    if (family.kind == FamilyTemplate::Kind::order_stat && last.n() >= 4) {
        const auto w = convexity_window(last.n(), gs[0]);
        rep.c4_window_inside = w.alpha_n >= gs[0] - probe_eps && w.beta_n <= gs[0] + probe_eps;
        rep.c4_pass = rep.c4_pass && *rep.c4_window_inside;
    }

    for (const auto& d : members) {
        double m = 0.0;
        for (double u : grid) m = std::max(m, d.derivative(u));
        rep.off_gamma_max.push_back(m);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < rep.off_gamma_max.size(); ++i) {
        monotone = monotone && rep.off_gamma_max[i] <= rep.off_gamma_max[i - 1];
    }
    rep.derivative_vanishes_off_gamma =
        monotone && rep.off_gamma_max.back() <= 0.1 * rep.off_gamma_max.front();
    return rep;
}

// ---------------------------------------------------------------- counterexample

namespace {

Distribution counterexample_law(int n, double bulk, double shift, const std::string& label) {
    using T = Segment::Type;
    const double nn = n;
    const double p1 = -shift, p2 = -shift + 1.0 / (2.0 * nn), p3 = bulk, p4 = bulk + 1.0 / nn;
    std::vector<Segment> segs{
        {T::exp_left, 1.0 / (2.0 * nn), 1.0, p1},
        {T::affine, 1.0 / (2.0 * nn), 1.0, p1},
        {T::affine, 2.0 / nn, (1.0 / nn) / (bulk + shift - 1.0 / (2.0 * nn)), bulk},
        {T::affine, 2.0 / nn, nn - 3.0, bulk},
        {T::exp_right, 1.0 / nn, 1.0, p4},
    };
    return Distribution::piecewise(PiecewiseCdf({p1, p2, p3, p4}, std::move(segs)), label);
}

}  // namespace

std::pair<Distribution, Distribution> counterexample_pair(int n, double a, double b) {
    if (n < 4) throw domain_error("counterexample needs n >= 4");
    if (!(a > b && b > 0.0)) throw domain_error("counterexample needs a > b > 0");
    const std::string args = "(" + std::to_string(n) + "," + format_number(a) + "," + format_number(b) + ")";
    const double rn = std::sqrt(static_cast<double>(n));
    return {counterexample_law(n, b, rn / 2.0, "counterexample_x" + args),
            counterexample_law(n, a, rn, "counterexample_y" + args)};
}

double counterexample_lower_bound(double a, double b) {
    const double c = 1.0 / 3.0 + (b - a) * (b - a) + (b - a) / 6.0;
    return 3.0 / (32.0 * c);
}

// ---------------------------------------------------------------- property harness

HarnessReport property_harness(int trials, std::uint64_t seed) {
    if (trials < 1) throw argument_error("property_harness needs trials >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> loc(-2.0, 2.0), scale(0.5, 3.0), coin(0.0, 1.0);
    std::uniform_int_distribution<int> kind(0, 3), dof(4, 12);

    auto random_law = [&] {
        Distribution base = Distribution::normal(0.0, 1.0);
        switch (kind(rng)) {
            case 0: break;
            case 1: base = Distribution::student_t(dof(rng)); break;
            case 2: base = Distribution::uniform(0.0, 1.0); break;
            default: base = Distribution::exponential(1.0); break;
        }
        const double l = loc(rng), s = scale(rng);
        return Distribution::location_scale(l, s, base);
    };

    HarnessReport rep;
    rep.trials = trials;
    auto fail = [&](int t, const std::string& what) {
        ++rep.failures;
        rep.messages.push_back("trial " + std::to_string(t) + ": " + what);
    };

    for (int t = 0; t < trials; ++t) {
        const Distribution x = random_law(), y = random_law(), z = random_law();
        const auto xy = departure(x, y), yx = departure(y, x);
        if (!(xy.epsilon >= 0.0 && xy.epsilon <= 1.0)) fail(t, "epsilon outside [0,1]");
        if (xy.w2 > 0.0) {
            const double err = std::fabs(xy.epsilon + yx.epsilon - 1.0);
            rep.max_complement_error = std::max(rep.max_complement_error, err);
            if (err > 1e-8) fail(t, "complementarity off by " + format_number(err));
        }

        const double a = loc(rng), b = scale(rng) * (coin(rng) < 0.5 ? -1.0 : 1.0);
        const auto ax = Distribution::location_scale(a, b, x), ay = Distribution::location_scale(a, b, y);
        const double ls_err = std::fabs(departure(ax, ay).epsilon - (b > 0 ? xy.epsilon : yx.epsilon));
        rep.max_location_scale_error = std::max(rep.max_location_scale_error, ls_err);
        if (ls_err > 1e-8) fail(t, "location-scale invariance off by " + format_number(ls_err));

        const auto nx = Distribution::location_scale(0.0, -1.0, x), ny = Distribution::location_scale(0.0, -1.0, y);
        const double neg_err = std::fabs(departure(ny, nx).epsilon - xy.epsilon);
        rep.max_negation_error = std::max(rep.max_negation_error, neg_err);
        if (neg_err > 1e-8) fail(t, "negation identity off by " + format_number(neg_err));

        const auto xz = departure(x, z), yz = departure(y, z);
        const double excess = xz.w2 - (xy.w2 + yz.w2);
        rep.max_triangle_excess = std::max(rep.max_triangle_excess, excess);
        if (excess > 1e-8) fail(t, "W2 triangle inequality violated by " + format_number(excess));

        if (xz.denominator > 0.0) {
            const double c1 = xy.denominator / xz.denominator, c2 = yz.denominator / xz.denominator;
            const double rhs = 3.0 * (c1 * xy.epsilon + c2 * yz.epsilon);
            const double ratio = rhs > 0.0 ? xz.epsilon / rhs : (xz.epsilon > 0.0 ? INFINITY : 0.0);
            rep.max_transitivity_ratio = std::max(rep.max_transitivity_ratio, ratio);
            if (ratio > 1.0 + 1e-9) fail(t, "transitivity surrogate exceeded");
        }

        const auto y_shift = Distribution::location_scale(std::fabs(loc(rng)) + 0.1, 1.0, x);
        const auto z_shift = Distribution::location_scale(std::fabs(loc(rng)) + 0.1, 1.0, y_shift);
        const double shift_eps = departure(x, z_shift).epsilon;
        rep.max_shift_epsilon = std::max(rep.max_shift_epsilon, shift_eps);
        if (shift_eps != 0.0) fail(t, "ordered shift triple has nonzero departure");
    }
    return rep;
}

}  // namespace stochord
