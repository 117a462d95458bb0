#ifndef LYAPSYN_BOX_HPP
#define LYAPSYN_BOX_HPP

#include "rational.hpp"

#include <map>
#include <optional>
#include <string>

namespace lyapsyn {

// One-sided bound of a box interval.
struct Bound {
    Rational value;
    bool strict = true;
};

struct Interval {
    std::optional<Bound> lo, hi;
    bool bounded() const { return lo && hi; }
    // sup |x| over the closure; requires bounded().
    Rational abs_sup() const {
        Rational a = rat_abs(lo->value), b = rat_abs(hi->value);
        return a > b ? a : b;
    }
};

// Per-variable interval constraints over the state space; variables without
// an entry are unconstrained.
struct Box {
    std::map<std::string, Interval> intervals;

    const Interval* find(const std::string& var) const {
        auto it = intervals.find(var);
        return it == intervals.end() ? nullptr : &it->second;
    }
};

}  // namespace lyapsyn

#endif
