#include "stochord/cli.hpp"

#include "stochord/piecewise.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace stochord::cli {

namespace {

std::string caret_message(const std::string& reason, std::string_view input, std::size_t pos) {
    std::string msg = reason + "\n  " + std::string(input) + "\n  " + std::string(std::min(pos, input.size()), ' ') + "^";
    return msg;
}

}  // namespace

SpecError::SpecError(const std::string& reason, std::string_view input, std::size_t pos)
    : argument_error(caret_message(reason, input, pos)), reason_(reason), pos_(pos) {}

namespace {

// ---------------------------------------------------------------- syntax tree

struct Arg;

struct Value {
    enum class Kind { number, ident, call, pair };
    Kind kind = Kind::number;
    double num = 0.0;
    double num2 = 0.0;  // right side of w@g
    std::string name;
    std::vector<Arg> args;
    std::size_t pos = 0;
};

struct Arg {
    std::string key;  // empty for positional
    std::size_t key_pos = 0;
    Value value;
};

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Value parse_top() {
        skip_ws();
        Value v = parse_value();
        skip_ws();
        if (i_ != s_.size()) fail("unexpected trailing input", i_);
        return v;
    }

    [[noreturn]] void fail(const std::string& why, std::size_t pos) const { throw SpecError(why, s_, pos); }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool at(char c) const { return i_ < s_.size() && s_[i_] == c; }
    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    std::string parse_ident() {
        const std::size_t start = i_;
        while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
        return std::string(s_.substr(start, i_ - start));
    }

    double parse_number() {
        const std::size_t start = i_;
        while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' || s_[i_] == '-' ||
                                  s_[i_] == '+' || s_[i_] == 'e' || s_[i_] == 'E'))
            ++i_;
        const char* first = s_.data() + start;
        const char* last = s_.data() + i_;
        if (first != last && *first == '+') ++first;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (first == last || ec != std::errc() || ptr != last || !std::isfinite(v))
            fail("expected a number", start);
        return v;
    }

    Value parse_value() {
        Value v;
        v.pos = i_;
        if (i_ >= s_.size()) fail("unexpected end of input", i_);
        if (ident_start(s_[i_])) {
            v.name = parse_ident();
            skip_ws();
            if (at('(')) {
                v.kind = Value::Kind::call;
                ++i_;
                parse_args(v);
            } else {
                v.kind = Value::Kind::ident;
            }
            return v;
        }
        v.kind = Value::Kind::number;
        v.num = parse_number();
        skip_ws();
        if (at('@')) {
            ++i_;
            skip_ws();
            v.kind = Value::Kind::pair;
            v.num2 = parse_number();
        }
        return v;
    }

    void parse_args(Value& call) {
        skip_ws();
        if (at(')')) {
            ++i_;
            return;
        }
        for (;;) {
            skip_ws();
            Arg a;
            a.key_pos = i_;
            if (i_ < s_.size() && ident_start(s_[i_])) {
                const std::size_t save = i_;
                std::string id = parse_ident();
                skip_ws();
                if (at('=')) {
                    ++i_;
                    skip_ws();
                    a.key = std::move(id);
                } else {
                    i_ = save;
                }
            }
            a.value = parse_value();
            call.args.push_back(std::move(a));
            skip_ws();
            if (at(',') || at(';')) {
                ++i_;
                continue;
            }
            if (at(')')) {
                ++i_;
                return;
            }
            fail(i_ < s_.size() ? "expected ',' or ')'" : "missing ')'", i_);
        }
    }
};

// ---------------------------------------------------------------- value helpers

struct Context {
    const Parser& p;

    [[noreturn]] void fail(const std::string& why, std::size_t pos) const { p.fail(why, pos); }

    double number(const Arg& a) const {
        if (a.value.kind != Value::Kind::number) fail("expected a number", a.value.pos);
        return a.value.num;
    }

    int integer(const Arg& a, int lo) const {
        const double v = number(a);
        if (v != std::floor(v) || v < lo || v > std::numeric_limits<int>::max())
            fail("expected an integer >= " + std::to_string(lo), a.value.pos);
        return static_cast<int>(v);
    }

    void arity(const Value& call, std::size_t n) const {
        if (call.args.size() != n) {
            fail(call.name + " expects " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
                     std::to_string(call.args.size()),
                 call.pos);
        }
        for (const auto& a : call.args) {
            if (!a.key.empty()) fail(call.name + " takes positional arguments only", a.key_pos);
        }
    }

    // Keyword arguments; pairs (w@g) are collected separately in order.
    std::map<std::string, const Arg*> keywords(const Value& call, std::initializer_list<const char*> allowed,
                                               std::vector<const Arg*>* pairs = nullptr) const {
        std::map<std::string, const Arg*> out;
        for (const auto& a : call.args) {
            if (a.key.empty()) {
                if (pairs && a.value.kind == Value::Kind::pair) {
                    pairs->push_back(&a);
                    continue;
                }
                fail(call.name + " takes key=value arguments", a.key_pos);
            }
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return a.key == k; }))
                fail("unknown parameter '" + a.key + "' for " + call.name, a.key_pos);
            if (!out.emplace(a.key, &a).second) fail("duplicate parameter '" + a.key + "'", a.key_pos);
        }
        return out;
    }

    template <class F>
    auto guard(std::size_t pos, F&& f) const {
        try {
            return f();
        } catch (const SpecError&) {
            throw;
        } catch (const std::exception& e) {
            fail(e.what(), pos);
        }
    }
};

// ---------------------------------------------------------------- laws

std::vector<double> read_csv_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open '" + path + "'");
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r,");
        const char* first = line.data() + b;
        const char* last = line.data() + e + 1;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            if (values.empty() && lineno == 1) continue;  // header
            throw argument_error(path + ":" + std::to_string(lineno) + ": not a number");
        }
        values.push_back(v);
    }
    if (values.empty()) throw argument_error("'" + path + "' holds no values");
    return values;
}

PiecewiseCdf read_piecewise(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw argument_error("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        std::vector<Segment> segs;
        for (const auto& s : j.at("segments")) {
            const std::string type = s.at("type").get<std::string>();
            Segment::Type t;
            if (type == "exp_left") t = Segment::Type::exp_left;
            else if (type == "affine") t = Segment::Type::affine;
            else if (type == "exp_right") t = Segment::Type::exp_right;
            else throw argument_error("unknown segment type '" + type + "'");
            segs.push_back({t, s.at("coef").get<double>(), s.at("slope").get<double>(), s.at("anchor").get<double>()});
        }
        return PiecewiseCdf(j.at("breakpoints").get<std::vector<double>>(), std::move(segs));
    } catch (const nlohmann::json::exception& e) {
        throw argument_error("'" + path + "': " + e.what());
    }
}

Distribution law_from(const Context& cx, const Value& v) {
    if (v.kind != Value::Kind::call) cx.fail("expected a distribution such as normal(0,1)", v.pos);
    const auto& a = v.args;
    return cx.guard(v.pos, [&]() -> Distribution {
        if (v.name == "normal") {
            cx.arity(v, 2);
            return Distribution::normal(cx.number(a[0]), cx.number(a[1]));
        }
        if (v.name == "t") {
            cx.arity(v, 1);
            return Distribution::student_t(cx.number(a[0]));
        }
        if (v.name == "uniform") {
            cx.arity(v, 2);
            return Distribution::uniform(cx.number(a[0]), cx.number(a[1]));
        }
        if (v.name == "exp") {
            cx.arity(v, 1);
            return Distribution::exponential(cx.number(a[0]));
        }
        if (v.name == "ls") {
            cx.arity(v, 3);
            return Distribution::location_scale(cx.number(a[0]), cx.number(a[1]), law_from(cx, a[2].value));
        }
        if (v.name == "counterexample_x" || v.name == "counterexample_y") {
            cx.arity(v, 3);
            const auto pair = counterexample_pair(cx.integer(a[0], 4), cx.number(a[1]), cx.number(a[2]));
            return v.name == "counterexample_x" ? pair.first : pair.second;
        }
        cx.fail("unknown distribution '" + v.name + "'", v.pos);
    });
}

std::optional<Distribution> file_law(std::string_view spec) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    const std::string_view t = trim(spec);
    for (const std::string_view prefix : {std::string_view("empirical:"), std::string_view("piecewise:")}) {
        if (t.substr(0, prefix.size()) != prefix) continue;
        const std::string path(trim(t.substr(prefix.size())));
        if (path.empty()) throw SpecError("missing file path", spec, spec.size());
        const std::string label = std::string(prefix) + path;
        if (prefix == "empirical:") return Distribution::empirical(EmpiricalSample(read_csv_values(path)), label);
        return Distribution::piecewise(read_piecewise(path), label);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- distortions and families

IndexSequence rule_sequence(const Context& cx, const Arg& rule, const Arg* k_arg, std::size_t call_pos) {
    if (rule.value.kind != Value::Kind::ident) cx.fail("rule must be kth_smallest or kth_largest", rule.value.pos);
    if (!k_arg) cx.fail("rule needs k=..", call_pos);
    const int k = cx.integer(*k_arg, 1);
    if (rule.value.name == "kth_smallest") return IndexSequence::kth_smallest(k);
    if (rule.value.name == "kth_largest") return IndexSequence::kth_largest(k);
    cx.fail("rule must be kth_smallest or kth_largest", rule.value.pos);
}

void mixture_parts(const Context& cx, const Value& v, const std::vector<const Arg*>& pairs, std::vector<double>& w,
                   std::vector<double>& g) {
    if (pairs.empty()) cx.fail("mix needs weight@gamma terms", v.pos);
    for (const Arg* p : pairs) {
        w.push_back(p->value.num);
        g.push_back(p->value.num2);
    }
}

Distortion distortion_from(const Context& cx, const Value& v) {
    if (v.kind != Value::Kind::call) cx.fail("expected a distortion such as os(n=10,gamma=0.5)", v.pos);
    return cx.guard(v.pos, [&]() -> Distortion {
        if (v.name == "os") {
            const auto kw = cx.keywords(v, {"n", "gamma", "rule", "k"});
            if (!kw.count("n")) cx.fail("os needs n=..", v.pos);
            const int n = cx.integer(*kw.at("n"), 1);
            if (kw.count("gamma")) {
                if (kw.count("rule") || kw.count("k")) cx.fail("give either gamma or rule/k", kw.at("gamma")->key_pos);
                return Distortion::order_stat(n, cx.number(*kw.at("gamma")));
            }
            if (!kw.count("rule")) cx.fail("os needs gamma=.. or rule=..", v.pos);
            const auto it = kw.find("k");
            const auto seq = rule_sequence(cx, *kw.at("rule"), it == kw.end() ? nullptr : it->second, v.pos);
            return Distortion::order_stat(n, seq.gamma_at(n));
        }
        if (v.name == "mix") {
            std::vector<const Arg*> pairs;
            const auto kw = cx.keywords(v, {"n"}, &pairs);
            if (!kw.count("n")) cx.fail("mix needs n=..", v.pos);
            std::vector<double> w, g;
            mixture_parts(cx, v, pairs, w, g);
            return Distortion::mixture(cx.integer(*kw.at("n"), 1), std::move(w), std::move(g));
        }
        if (v.name == "record") {
            const auto kw = cx.keywords(v, {"n", "k"});
            if (!kw.count("n")) cx.fail("record needs n=..", v.pos);
            const int k = kw.count("k") ? cx.integer(*kw.at("k"), 1) : 1;
            return Distortion::record(cx.integer(*kw.at("n"), 1), k);
        }
        cx.fail("unknown distortion '" + v.name + "'", v.pos);
    });
}

FamilySpec family_from(const Context& cx, const Value& v, double default_gamma) {
    if (v.kind != Value::Kind::call && v.kind != Value::Kind::ident)
        cx.fail("expected a family such as os(gamma=0.5)", v.pos);
    return cx.guard(v.pos, [&]() -> FamilySpec {
        if (v.name == "os") {
            const auto kw = cx.keywords(v, {"gamma", "rule", "k"});
            if (kw.count("rule")) {
                if (kw.count("gamma")) cx.fail("give either gamma or rule/k", kw.at("gamma")->key_pos);
                const auto it = kw.find("k");
                auto seq = rule_sequence(cx, *kw.at("rule"), it == kw.end() ? nullptr : it->second, v.pos);
                return {FamilyTemplate::order_stat(seq.gamma()), seq};
            }
            if (kw.count("k")) cx.fail("k needs rule=..", kw.at("k")->key_pos);
            const double g = kw.count("gamma") ? cx.number(*kw.at("gamma")) : default_gamma;
            return {FamilyTemplate::order_stat(g), IndexSequence::constant(g)};
        }
        if (v.name == "mix") {
            std::vector<const Arg*> pairs;
            cx.keywords(v, {}, &pairs);
            std::vector<double> w, g;
            mixture_parts(cx, v, pairs, w, g);
            auto f = FamilyTemplate::mixture(std::move(w), std::move(g));
            return {f, IndexSequence::constant(f.gammas.front())};
        }
        if (v.name == "record") {
            const auto kw = cx.keywords(v, {"k"});
            const int k = kw.count("k") ? cx.integer(*kw.at("k"), 1) : 1;
            return {FamilyTemplate::record(k), IndexSequence::constant(1.0)};
        }
        cx.fail("unknown family '" + v.name + "'", v.pos);
    });
}

bool has_key(const Value& v, const char* key) {
    return std::any_of(v.args.begin(), v.args.end(), [&](const Arg& a) { return a.key == key; });
}

}  // namespace

Distribution parse_distribution(std::string_view spec) {
    if (auto f = file_law(spec)) return *f;
    Parser p(spec);
    const Value v = p.parse_top();
    return law_from(Context{p}, v);
}

Distortion parse_distortion(std::string_view spec) {
    Parser p(spec);
    const Value v = p.parse_top();
    return distortion_from(Context{p}, v);
}

FamilySpec parse_family(std::string_view spec, double default_gamma) {
    Parser p(spec);
    const Value v = p.parse_top();
    if (has_key(v, "n")) {
        const auto it = std::find_if(v.args.begin(), v.args.end(), [](const Arg& a) { return a.key == "n"; });
        p.fail("a family spec leaves n out", it->key_pos);
    }
    return family_from(Context{p}, v, default_gamma);
}

std::vector<int> parse_index_range(std::string_view spec) {
    auto to_int = [&](std::string_view s, std::size_t offset) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) throw SpecError("expected an integer", spec, offset);
        if (v < 1) throw SpecError("indices start at 1", spec, offset);
        return v;
    };
    std::vector<int> out;
    if (spec.find(':') != std::string_view::npos) {
        std::vector<std::pair<std::string_view, std::size_t>> parts;
        std::size_t start = 0;
        for (;;) {
            const auto c = spec.find(':', start);
            parts.emplace_back(spec.substr(start, c - start), start);
            if (c == std::string_view::npos) break;
            start = c + 1;
        }
        if (parts.size() > 3) throw SpecError("range is first:last or first:last:step", spec, 0);
        const int lo = to_int(parts[0].first, parts[0].second);
        const int hi = to_int(parts[1].first, parts[1].second);
        const int step = parts.size() == 3 ? to_int(parts[2].first, parts[2].second) : 1;
        if (hi < lo) throw SpecError("range end is below its start", spec, parts[1].second);
        if ((hi - lo) / step > 1000000) throw SpecError("range is too long", spec, 0);
        for (long v = lo; v <= hi; v += step) out.push_back(static_cast<int>(v));
        return out;
    }
    std::size_t start = 0;
    for (;;) {
        const auto c = spec.find(',', start);
        const int v = to_int(spec.substr(start, c - start), start);
        if (!out.empty() && v <= out.back()) throw SpecError("indices must be strictly ascending", spec, start);
        out.push_back(v);
        if (c == std::string_view::npos) break;
        start = c + 1;
    }
    return out;
}

std::string format_spec(const Distribution& d) { return d.describe(); }

std::string format_spec(const Distortion& d) { return d.describe(); }

std::string format_spec(const FamilySpec& f) {
    if (f.family.kind == FamilyTemplate::Kind::order_stat) {
        const auto& s = f.sequence;
        if (s.rule() == IndexSequence::Rule::kth_smallest) return "os(rule=kth_smallest,k=" + std::to_string(s.k()) + ")";
        if (s.rule() == IndexSequence::Rule::kth_largest) return "os(rule=kth_largest,k=" + std::to_string(s.k()) + ")";
    }
    return f.family.describe();
}

std::string canonicalize(std::string_view spec) {
    if (auto f = file_law(spec)) return format_spec(*f);
    Parser p(spec);
    const Value v = p.parse_top();
    const Context cx{p};
    if (v.name == "os" || v.name == "mix" || v.name == "record") {
        if (has_key(v, "n")) return format_spec(distortion_from(cx, v));
        return format_spec(family_from(cx, v, 0.5));
    }
    return format_spec(law_from(cx, v));
}

}  // namespace stochord::cli
