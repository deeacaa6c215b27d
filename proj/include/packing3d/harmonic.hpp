#pragma once

#include <vector>

#include "geometry.hpp"

namespace packing3d {

enum class HarmonicTail { identity_tail, scaled_tail };

// t_1 = 1, t_{i+1} = t_i (t_i + 1)
inline std::vector<Integer> sylvester(std::size_t m) {
    std::vector<Integer> t;
    if (m == 0) return t;
    t.emplace_back(1);
    while (t.size() < m) {
        const Integer& p = t.back();
        t.push_back(Integer(p * (p + 1)));
    }
    return t;
}

inline Rational harmonic_round(const Rational& alpha, unsigned long k,
                               HarmonicTail tail = HarmonicTail::identity_tail) {
    if (alpha <= 0 || alpha > 1) throw PreconditionError("harmonic_round needs alpha in (0,1]");
    if (k < 2) throw PreconditionError("harmonic_round needs k >= 2");
    // alpha in (1/(q+1), 1/q] means q = floor(1/alpha)
    Integer q = floor_int(1 / alpha);
    if (q <= k - 1) return frac(Integer(1), q);
    if (tail == HarmonicTail::identity_tail) return alpha;
    return Rational(k, k - 1) * alpha;
}

// truncated T_inf = sum_{i <= m} 1 / t_i
inline Rational harmonic_constant_inf(std::size_t m = 8) {
    Rational s = 0;
    for (const auto& t : sylvester(m)) s += Rational(1) / Rational(t);
    return s;
}

// smallest m with t_m <= k <= t_{m+1}
inline std::size_t harmonic_m(unsigned long k) {
    if (k < 2) throw PreconditionError("T_k needs k >= 2");
    std::size_t m = 1;
    Integer t = 1;
    for (;;) {
        Integer next = t * (t + 1);
        if (k <= next) return m;
        t = next;
        ++m;
    }
}

inline Rational harmonic_constant(unsigned long k) {
    std::size_t m = harmonic_m(k);
    auto t = sylvester(m + 1);
    Rational s = 0;
    for (std::size_t q = 0; q < m; ++q) s += Rational(1) / Rational(t[q]);
    s += Rational(k) / (Rational(t[m]) * Rational(k - 1));
    return s;
}

struct HarmonicTable {
    unsigned long k;
    std::vector<Integer> sylvester_terms;
    Rational T_k;
    Rational T_inf_approx;
    std::size_t truncation;

    static HarmonicTable make(unsigned long k, std::size_t m = 8) {
        return HarmonicTable{k, sylvester(m), harmonic_constant(k), harmonic_constant_inf(m), m};
    }
};

struct RoundedInstance {
    std::vector<Item> original;
    std::vector<Item> rounded;  // same order and ids, heights replaced
    HarmonicTail tail;
    unsigned long k;
};

inline RoundedInstance round_instance_heights(const std::vector<Item>& items, unsigned long k,
                                              HarmonicTail tail = HarmonicTail::identity_tail) {
    RoundedInstance r{items, items, tail, k};
    for (auto& it : r.rounded) it.h = harmonic_round(it.h, k, tail);
    return r;
}

}  // namespace packing3d
