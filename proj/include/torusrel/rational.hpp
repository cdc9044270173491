#ifndef TORUSREL_RATIONAL_HPP
#define TORUSREL_RATIONAL_HPP

#include <numeric>
#include <string>

#include "torusrel/errors.hpp"

namespace torusrel {

// Exact nonnegative rational, normalized with den > 0. Small by design:
// every quantity we compare against it is an integer squared norm, so the
// only arithmetic needed is cross multiplication in 128 bits.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }
    explicit Rational(long long n) : num(n), den(1) {}

    void normalize() {
        if (den == 0) throw config_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const {
        return (__int128)num * o.den < (__int128)o.num * den;
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// Parses "p" or "p/q". Anything else (including floats) is rejected.
inline Rational parse_rational(const std::string& text) {
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            if (!is_int(text)) throw config_error("");
            return Rational(std::stoll(text));
        }
        std::string p = text.substr(0, slash), q = text.substr(slash + 1);
        if (!is_int(p) || !is_int(q)) throw config_error("");
        return Rational(std::stoll(p), std::stoll(q));
    } catch (const std::exception&) {
        throw config_error("cannot parse rational '" + text + "' (want p or p/q)");
    }
}

// True iff nsq <= r^2, computed exactly: nsq*den^2 <= num^2.
inline bool sq_le(long long nsq, const Rational& r) {
    return (__int128)nsq * r.den * r.den <= (__int128)r.num * r.num;
}

// True iff nsq <= (2r)^2.
inline bool sq_le_twice(long long nsq, const Rational& r) {
    return (__int128)nsq * r.den * r.den <= (__int128)4 * r.num * r.num;
}

} // namespace torusrel

#endif
