#include "stochord/cli.hpp"

#include "stochord/crossings.hpp"
#include "stochord/parallel.hpp"
#include "stochord/wasserstein.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <variant>

#ifndef STOCHORD_VERSION
#define STOCHORD_VERSION "0.0.0"
#endif

namespace stochord::cli {

namespace {

using json = nlohmann::json;
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

enum class Format { pretty, csv, json };

/// Rows of one command plus fields that only the JSON form carries.
struct Output {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    json extra = json::object();
    std::vector<std::string> notes;  // pretty-only trailer lines
    bool single = false;             // one record: JSON object instead of rows
};

std::string fixed7(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.7f", v);
    std::string s(buf);
    if (s == "-0.0000000") s = "0.0000000";
    return s;
}

std::string text(const Cell& c, bool pretty) {
    return std::visit(
        [&](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return pretty ? "-" : "";
            else if constexpr (std::is_same_v<T, double>) return fixed7(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return v;
        },
        c);
}

json to_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? json(v) : json(nullptr);
            else return json(v);
        },
        c);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

void emit(const Output& o, Format f, std::ostream& out) {
    if (f == Format::csv) {
        for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "," : "") << o.columns[i];
        out << "\n";
        for (const auto& r : o.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(text(r[i], false));
            out << "\n";
        }
        return;
    }
    if (f == Format::json) {
        json j = o.extra;
        auto record = [&](const std::vector<Cell>& r) {
            json rec = json::object();
            for (std::size_t i = 0; i < r.size(); ++i) rec[o.columns[i]] = to_json(r[i]);
            return rec;
        };
        if (o.single && o.rows.size() == 1) {
            j.update(record(o.rows[0]));
        } else {
            j["rows"] = json::array();
            for (const auto& r : o.rows) j["rows"].push_back(record(r));
        }
        out << j.dump(2) << "\n";
        return;
    }
    if (o.single && o.rows.size() == 1) {
        std::size_t w = 0;
        for (const auto& c : o.columns) w = std::max(w, c.size());
        for (std::size_t i = 0; i < o.columns.size(); ++i)
            out << o.columns[i] << std::string(w - o.columns[i].size(), ' ') << " = " << text(o.rows[0][i], true) << "\n";
    } else {
        std::vector<std::size_t> w(o.columns.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = o.columns[i].size();
        for (const auto& r : o.rows)
            for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], text(r[i], true).size());
        auto line = [&](auto get) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                const std::string s = get(i);
                out << (i ? "  " : "") << std::string(w[i] - s.size(), ' ') << s;
            }
            out << "\n";
        };
        line([&](std::size_t i) { return o.columns[i]; });
        for (const auto& r : o.rows) line([&](std::size_t i) { return text(r[i], true); });
    }
    for (const auto& n : o.notes) out << n << "\n";
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : Cell(); }

json intervals_json(const IntervalSet& s) {
    json a = json::array();
    for (const auto& iv : s.intervals()) a.push_back({iv.first, iv.second});
    return a;
}

// ---------------------------------------------------------------- commands

struct Common {
    std::string out = "pretty";
    bool json_flag = false;
    Format format() const {
        if (json_flag) return Format::json;
        if (out == "csv") return Format::csv;
        if (out == "json") return Format::json;
        return Format::pretty;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out, "Output format")->check(CLI::IsMember({"pretty", "csv", "json"}))->capture_default_str();
    cmd->add_flag("--json", c.json_flag, "Shorthand for --out json");
}

constexpr const char* kDefaultX = "normal(0,1)";
constexpr const char* kDefaultY = "t(4)";

const std::vector<int> kTableNs{2, 3, 4, 5, 10, 15, 20, 25, 30, 50, 100};
const std::vector<double> kTableGammas{0.0, 0.25, 0.4, 0.49, 0.5, 0.51, 0.6, 0.75, 1.0};

struct MeasureArgs {
    std::string x, y;
    bool l1 = false;
    bool heavy = false;
    double rel_tol = 1e-10;
};

Output cmd_measure(const MeasureArgs& a) {
    const auto x = parse_distribution(a.x);
    const auto y = parse_distribution(a.y);
    DepartureOptions opt;
    opt.rel_tol = a.rel_tol;
    opt.require_finite_second_moment = !a.heavy;
    const auto rep = departure(x, y, opt);
    Output o;
    o.single = true;
    o.columns = {"epsilon", "w2", "numerator", "denominator", "convention"};
    o.rows.push_back({rep.epsilon, rep.w2, rep.numerator, rep.denominator, std::string(to_string(rep.convention))});
    if (a.l1) {
        o.columns.push_back("l1");
        o.rows[0].push_back(departure_l1(x, y));
    }
    o.extra["x"] = format_spec(x);
    o.extra["y"] = format_spec(y);
    o.extra["a0"] = intervals_json(rep.a0);
    if (x.is_continuous() && y.is_continuous()) o.extra["usual_order"] = to_string(usual_order_verdict(x, y));
    return o;
}

struct SweepArgs {
    std::string x, y, family = "os", ns = "2:100";
    std::optional<double> gamma;
    double threshold = 1e-6;
    int window = 5;
};

Output cmd_sweep(const SweepArgs& a) {
    const auto x = parse_distribution(a.x);
    const auto y = parse_distribution(a.y);
    const auto fam = parse_family(a.family, a.gamma.value_or(0.5));
    FamilySpec f = fam;
    if (a.gamma && fam.family.kind == FamilyTemplate::Kind::order_stat &&
        fam.sequence.rule() == IndexSequence::Rule::constant) {
        f = {FamilyTemplate::order_stat(*a.gamma), IndexSequence::constant(*a.gamma)};
    }
    const auto ns = parse_index_range(a.ns);
    if (ns.front() < f.sequence.min_n()) throw argument_error("--ns starts below n=" + std::to_string(f.sequence.min_n()));
    const auto s = sweep(x, y, f.family, f.sequence, ns);
    const auto verdict = dast_verdict(s, a.threshold, std::min<int>(a.window, static_cast<int>(ns.size())));
    Output o;
    o.columns = {"n", "gamma_n", "epsilon", "w2"};
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double g = s.gammas_n[i];
        o.rows.push_back({static_cast<long long>(ns[i]), std::isnan(g) ? Cell() : Cell(g), s.epsilons[i], s.w2s[i]});
    }
    o.extra["x"] = format_spec(x);
    o.extra["y"] = format_spec(y);
    o.extra["family"] = format_spec(f);
    o.extra["fitted_log_slope"] = s.fitted_log_slope ? json(*s.fitted_log_slope) : json(nullptr);
    o.extra["dast_verdict"] = to_string(verdict);
    o.notes.push_back("fitted_log_slope = " + (s.fitted_log_slope ? fixed7(*s.fitted_log_slope) : std::string("-")));
    o.notes.push_back("dast_verdict = " + std::string(to_string(verdict)));
    return o;
}

struct PairArgs {
    std::string x = kDefaultX, y = kDefaultY;
};

Output cmd_table(const PairArgs& a) {
    const auto x = parse_distribution(a.x);
    const auto y = parse_distribution(a.y);
    const auto cs = crossing_sets(x, y);
    const std::size_t cols = kTableGammas.size();
    std::vector<double> eps(kTableNs.size() * cols);
    parallel_for(eps.size(), [&](std::size_t i) {
        const auto d = Distortion::order_stat(kTableNs[i / cols], kTableGammas[i % cols]);
        eps[i] = distorted_departure(x, y, d, cs).epsilon;
    });
    Output o;
    o.columns = {"n", "gamma", "epsilon"};
    for (std::size_t i = 0; i < eps.size(); ++i)
        o.rows.push_back({static_cast<long long>(kTableNs[i / cols]), kTableGammas[i % cols], eps[i]});
    o.extra["x"] = format_spec(x);
    o.extra["y"] = format_spec(y);
    return o;
}

struct BoundArgs {
    PairArgs pair;
    double gamma = 1.0, eps = 0.0;
    std::string ns = "2:40";
};

Output cmd_bound(const BoundArgs& a) {
    const auto x = parse_distribution(a.pair.x);
    const auto y = parse_distribution(a.pair.y);
    const auto ns = parse_index_range(a.ns);
    if (!(a.gamma >= 0.0 && a.gamma <= 1.0)) throw argument_error("--gamma must lie in [0,1]");
    const auto cs = crossing_sets(x, y);
    const auto b = decay_bound(cs, a.gamma, a.eps);
    const auto s = sweep(x, y, FamilyTemplate::order_stat(a.gamma), IndexSequence::constant(a.gamma), ns);
    const bool ok = bound_validation(s, b);
    Output o;
    o.single = true;
    o.columns = {"gamma", "eps", "fx_c", "fx_a", "fx_b", "fx_d", "z", "log_z", "fitted_log_slope", "validated"};
    o.rows.push_back({a.gamma, a.eps, b.bq.fx_c, b.bq.fx_a, b.bq.fx_b, b.bq.fx_d, b.z,
                      b.z > 0.0 ? Cell(std::log(b.z)) : Cell(), opt_cell(s.fitted_log_slope), ok});
    o.extra["left_empty"] = b.bq.left_empty;
    o.extra["right_empty"] = b.bq.right_empty;
    o.extra["ns"] = ns;
    o.extra["epsilons"] = s.epsilons;
    return o;
}

struct PrecedenceArgs {
    PairArgs pair;
    int n = 1;
    double gamma = 0.5;
    std::size_t mc = 0;
    std::uint64_t seed = 1;
};

Output cmd_precedence(const PrecedenceArgs& a) {
    const auto x = parse_distribution(a.pair.x);
    const auto y = parse_distribution(a.pair.y);
    const double p = precedence_probability(x, y, a.n, a.gamma);
    Output o;
    o.single = true;
    o.columns = {"n", "gamma", "probability", "mc_estimate", "mc_std_error", "mc_samples"};
    if (a.mc > 0) {
        const auto mc = precedence_monte_carlo(x, y, a.n, a.gamma, a.mc, a.seed);
        o.rows.push_back({static_cast<long long>(a.n), a.gamma, p, mc.estimate, mc.std_error,
                          static_cast<long long>(mc.samples)});
        o.extra["seed"] = a.seed;
    } else {
        o.rows.push_back({static_cast<long long>(a.n), a.gamma, p, Cell(), Cell(), Cell()});
    }
    o.extra["x"] = format_spec(x);
    o.extra["y"] = format_spec(y);
    return o;
}

struct ProbeArgs {
    std::vector<std::string> families;
    std::string ns = "50,200,1000";
    double probe_eps = 0.05;
};

Output cmd_probe(const ProbeArgs& a) {
    std::vector<std::string> specs = a.families;
    if (specs.empty()) specs = {"os(gamma=0.5)", "mix(0.3@0.25,0.7@0.75)", "record(k=1)"};
    std::vector<FamilySpec> fams;
    for (const auto& s : specs) fams.push_back(parse_family(s));
    const auto ns = parse_index_range(a.ns);
    Output o;
    o.columns = {"family", "c3_pass", "c4_pass", "c4_violations", "c4_window_inside", "derivative_vanishes_off_gamma"};
    o.extra["details"] = json::array();
    for (const auto& f : fams) {
        const auto r = condition_probe(f.family, ns, a.probe_eps);
        o.rows.push_back({format_spec(f), r.c3_pass, r.c4_pass, static_cast<long long>(r.c4_violations),
                          r.c4_window_inside ? Cell(*r.c4_window_inside) : Cell(), r.derivative_vanishes_off_gamma});
        json d;
        d["family"] = format_spec(f);
        d["deltas"] = r.deltas;
        d["off_gamma_max"] = r.off_gamma_max;
        d["c3_witnesses"] = json::array();
        for (const auto& w : r.c3_witnesses)
            d["c3_witnesses"].push_back({{"gamma", w.gamma}, {"a", w.a}, {"b", w.b}, {"log_ratios", w.log_ratios}});
        o.extra["details"].push_back(d);
    }
    o.extra["ns"] = ns;
    o.extra["probe_eps"] = a.probe_eps;
    return o;
}

struct CounterexampleArgs {
    int n = 4;
    double a = 2.0, b = 1.0;
    std::string ns;
};

Output cmd_counterexample(const CounterexampleArgs& a) {
    const double lower = counterexample_lower_bound(a.a, a.b);
    const std::vector<int> ns = a.ns.empty() ? std::vector<int>{a.n} : parse_index_range(a.ns);
    const auto s = sweep_pairs(ns, [&](int n) { return counterexample_pair(n, a.a, a.b); });
    Output o;
    o.columns = {"n", "epsilon", "w2", "lower_bound"};
    for (std::size_t i = 0; i < ns.size(); ++i)
        o.rows.push_back({static_cast<long long>(ns[i]), s.epsilons[i], s.w2s[i], lower});
    o.single = ns.size() == 1;
    o.extra["a"] = a.a;
    o.extra["b"] = a.b;
    if (ns.size() > 1) {
        const auto v = dast_verdict(s, 1e-6, std::min<int>(5, static_cast<int>(ns.size())));
        o.extra["dast_verdict"] = to_string(v);
        o.notes.push_back("dast_verdict = " + std::string(to_string(v)));
    }
    return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Departure-based stochastic order measures and their asymptotics", "stochord"};
    app.set_version_flag("--version", std::string("stochord ") + STOCHORD_VERSION);
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 1 computation error, 2 argument error.\n"
               "Environment: STOCHORD_THREADS caps worker threads; STOCHORD_ISA=scalar disables SIMD kernels.");

    Common common;
    std::function<Output()> action;

    MeasureArgs measure;
    auto* m = app.add_subcommand("measure", "Departure of X from being stochastically below Y");
    m->add_option("--x", measure.x, "Law of X")->required();
    m->add_option("--y", measure.y, "Law of Y")->required();
    m->add_flag("--l1", measure.l1, "Also report the L1 (almost dominance) measure");
    m->add_flag("--heavy-tails", measure.heavy, "Admit laws without finite variance");
    m->add_option("--rel-tol", measure.rel_tol, "Quadrature relative tolerance")->capture_default_str();
    add_common(m, common);
    m->callback([&] { action = [&] { return cmd_measure(measure); }; });

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Departure of distorted pairs over a range of n");
    s->add_option("--x", sw.x, "Baseline law of X")->required();
    s->add_option("--y", sw.y, "Baseline law of Y")->required();
    s->add_option("--family", sw.family, "Distortion family without n")->capture_default_str();
    s->add_option("--gamma", sw.gamma, "Concentration point for order statistics");
    s->add_option("--ns", sw.ns, "Index range first:last[:step] or list")->capture_default_str();
    s->add_option("--threshold", sw.threshold, "Verdict threshold")->capture_default_str();
    s->add_option("--window", sw.window, "Verdict window")->check(CLI::PositiveNumber)->capture_default_str();
    add_common(s, common);
    s->callback([&] { action = [&] { return cmd_sweep(sw); }; });

    PairArgs tbl;
    auto* t = app.add_subcommand("table", "Order-statistic departures on the reference n x gamma grid");
    t->add_option("--x", tbl.x, "Baseline law of X")->capture_default_str();
    t->add_option("--y", tbl.y, "Baseline law of Y")->capture_default_str();
    add_common(t, common);
    t->callback([&] { action = [&] { return cmd_table(tbl); }; });

    BoundArgs bd;
    auto* b = app.add_subcommand("bound", "Exponential decay rate z and its check against a sweep");
    b->add_option("--gamma", bd.gamma, "Limit of gamma_n")->required();
    b->add_option("--eps", bd.eps, "Slack inside the separation gaps")->required();
    b->add_option("--x", bd.pair.x, "Baseline law of X")->capture_default_str();
    b->add_option("--y", bd.pair.y, "Baseline law of Y")->capture_default_str();
    b->add_option("--ns", bd.ns, "Sweep used for validation")->capture_default_str();
    add_common(b, common);
    b->callback([&] { action = [&] { return cmd_bound(bd); }; });

    PrecedenceArgs pr;
    auto* p = app.add_subcommand("precedence", "P(X_(r:n) <= Y_(r:n)) for independent samples");
    p->add_option("--n", pr.n, "Sample size")->required()->check(CLI::PositiveNumber);
    p->add_option("--gamma", pr.gamma, "Rank fraction")->required()->check(CLI::Range(0.0, 1.0));
    p->add_option("--x", pr.pair.x, "Baseline law of X")->capture_default_str();
    p->add_option("--y", pr.pair.y, "Baseline law of Y")->capture_default_str();
    p->add_option("--mc", pr.mc, "Monte Carlo samples (0 = off)")->capture_default_str();
    p->add_option("--seed", pr.seed, "Monte Carlo seed")->capture_default_str();
    add_common(p, common);
    p->callback([&] { action = [&] { return cmd_precedence(pr); }; });

    ProbeArgs pc;
    auto* c = app.add_subcommand("probe-conditions", "Numeric probes of the concentration and convexity conditions");
    c->add_option("--family", pc.families, "Family spec (repeatable; default: three reference families)");
    c->add_option("--ns", pc.ns, "Increasing sample sizes")->capture_default_str();
    c->add_option("--probe-eps", pc.probe_eps, "Half-width excluded around each gamma")->capture_default_str();
    add_common(c, common);
    c->callback([&] { action = [&] { return cmd_probe(pc); }; });

    CounterexampleArgs ce;
    auto* e = app.add_subcommand("counterexample", "Piecewise pair whose departure stays bounded away from 0");
    e->add_option("--n", ce.n, "Index (>= 4)")->capture_default_str();
    e->add_option("--a", ce.a, "Limit of Y_n")->capture_default_str();
    e->add_option("--b", ce.b, "Limit of X_n (0 < b < a)")->capture_default_str();
    e->add_option("--ns", ce.ns, "Sweep over n and report the verdict");
    add_common(e, common);
    e->callback([&] { action = [&] { return cmd_counterexample(ce); }; });

    // The top-level help lists every subcommand's flags.
    app.set_help_flag();
    app.set_help_all_flag("-h,--help", "Print this help message and exit");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Output o = action();
        emit(o, common.format(), out);
        return kExitOk;
    } catch (const argument_error& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kExitComputation;
    }
}

}  // namespace stochord::cli
