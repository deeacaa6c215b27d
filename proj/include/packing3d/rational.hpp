#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "error.hpp"

namespace packing3d {

using Rational = mpq_class;
using Integer = mpz_class;

namespace detail {

inline Integer parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) throw ParseError("empty number in '" + std::string(whole) + "'");
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError("bad digit in '" + std::string(whole) + "'");
    return Integer(std::string(s), 10);
}

inline Integer pow10(unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

}  // namespace detail

// Accepts "7", "-3/4", "0.125", ".5", "1e-3", "2.5E+2".
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw ParseError("empty rational");

    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational r;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer num = detail::parse_integer(s.substr(0, slash), text);
        Integer den = detail::parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        r = Rational(num, den);
        r.canonicalize();
    } else {
        long exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            std::string_view es = s.substr(e + 1);
            bool eneg = false;
            if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
                eneg = es.front() == '-';
                es.remove_prefix(1);
            }
            Integer ev = detail::parse_integer(es, text);
            if (ev > 100000) throw ParseError("exponent too large in '" + std::string(text) + "'");
            exp10 = ev.get_si();
            if (eneg) exp10 = -exp10;
            s = s.substr(0, e);
        }
        std::string digits;
        long frac = 0;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
            if (ip.empty() && fp.empty()) throw ParseError("bad decimal '" + std::string(text) + "'");
            digits = std::string(ip) + std::string(fp);
            frac = static_cast<long>(fp.size());
        } else {
            digits = std::string(s);
        }
        Integer mant = detail::parse_integer(digits, text);
        long shift = exp10 - frac;
        if (shift >= 0) {
            r = Rational(mant * detail::pow10(static_cast<unsigned long>(shift)));
        } else {
            r = Rational(mant, detail::pow10(static_cast<unsigned long>(-shift)));
            r.canonicalize();
        }
    }
    return neg ? Rational(-r) : r;
}

inline Rational frac(const Integer& num, const Integer& den) {
    if (den == 0) throw PreconditionError("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline Integer floor_int(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil_int(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Rational floor_r(const Rational& r) { return Rational(floor_int(r)); }
inline Rational ceil_r(const Rational& r) { return Rational(ceil_int(r)); }

inline Rational pow(const Rational& base, unsigned long e) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
    return out;
}

inline Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational positive_part(const Rational& a) { return a > 0 ? a : Rational(0); }

inline std::size_t to_size(const Integer& z) {
    if (z < 0) throw PreconditionError("negative count");
    if (!z.fits_ulong_p()) throw CapExceededError("count does not fit a machine word");
    return static_cast<std::size_t>(z.get_ui());
}

}  // namespace packing3d
