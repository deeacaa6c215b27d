#pragma once

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "packing3d/geometry.hpp"

namespace p3t {

using namespace packing3d;

inline Rational R(const char* s) { return parse_rational(s); }
inline Rational R(long n, long d) { return frac(Integer(n), Integer(d)); }

inline Item cube(const std::string& id, const Rational& s) { return Item{id, s, s, s}; }
inline Item box(const std::string& id, const Rational& w, const Rational& d, const Rational& h) {
    return Item{id, w, d, h};
}

inline std::string describe(const VerifyReport& r) {
    std::string s;
    for (const auto& v : r.violations) {
        s += violation_name(v.kind);
        for (const auto& id : v.item_ids) s += " " + id;
        s += "; ";
    }
    return s;
}

// feasible and every item placed exactly once
inline ::testing::AssertionResult complete_and_feasible(const Packing& p, const std::vector<Item>& items) {
    auto rep = verify_packing(p, items, VerifyOptions{true});
    if (rep.feasible) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << describe(rep);
}

}  // namespace p3t
