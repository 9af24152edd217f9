#pragma once

#include "stochord/asymptotics.hpp"
#include "stochord/distortion.hpp"
#include "stochord/distribution.hpp"
#include "stochord/errors.hpp"

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace stochord::cli {

/// Malformed spec string; what() carries the input and a caret under the offending position.
class SpecError : public argument_error {
public:
    SpecError(const std::string& reason, std::string_view input, std::size_t pos);
    std::size_t position() const noexcept { return pos_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
    std::size_t pos_;
};

/// normal(m,s) | t(v) | uniform(a,b) | exp(r) | ls(a,b,<law>) | counterexample_x(n,a,b)
/// | counterexample_y(n,a,b) | empirical:<csv path> | piecewise:<json path>
Distribution parse_distribution(std::string_view spec);

/// os(n=..,gamma=..) | os(n=..,rule=kth_smallest|kth_largest,k=..) | mix(n=..;w@g,...) | record(n=..,k=..)
Distortion parse_distortion(std::string_view spec);

/// A distortion spec with n left out. Order statistics take gamma_n from the sequence.
struct FamilySpec {
    FamilyTemplate family;
    IndexSequence sequence;
};

/// os | os(gamma=..) | os(rule=..,k=..) | mix(w@g,...) | record | record(k=..)
FamilySpec parse_family(std::string_view spec, double default_gamma = 0.5);

/// "a:b" (inclusive), "a:b:step" or "n1,n2,...". Result is strictly ascending and >= 1.
std::vector<int> parse_index_range(std::string_view spec);

std::string format_spec(const Distribution& d);
std::string format_spec(const Distortion& d);
std::string format_spec(const FamilySpec& f);

/// Parses as a law, then a distortion, then a family, and prints the canonical form.
std::string canonicalize(std::string_view spec);

/// Exit codes: 0 success, 1 computation error, 2 argument error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stochord::cli
