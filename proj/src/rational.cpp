#include "mzl/rational.hpp"

#include <cctype>
#include <cstddef>

#include "mzl/error.hpp"

namespace mzl {

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational literal");
    auto dot_pos = s.find('.');
    if (dot_pos != std::string::npos) {
        // Decimal literal: shift the point away and divide by the power of ten.
        std::string digits = s.substr(0, dot_pos) + s.substr(dot_pos + 1);
        std::size_t frac_len = s.size() - dot_pos - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw ParseError("bad decimal literal '" + s + "'");
        for (char c : digits)
            if (!std::isdigit(static_cast<unsigned char>(c)) && c != '-' && c != '+')
                throw ParseError("bad decimal literal '" + s + "'");
        mpz_class num(digits, 10);
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
        Rat r(num, den);
        r.canonicalize();
        return r;
    }
    try {
        Rat r(s, 10);
        r.canonicalize();
        if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal '" + s + "'");
    }
}

std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

bool is_integer(const Rat& r) { return r.get_den() == 1; }

long floor_long(const Rat& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q.get_si();
}

Rat dot(const RatVec& a, const RatVec& b) {
    Rat acc = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Rat sum(const RatVec& a) {
    Rat acc = 0;
    for (const auto& x : a) acc += x;
    return acc;
}

std::string vec_to_string(const RatVec& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += rat_to_string(v[i]);
    }
    return out + ")";
}

}  // namespace mzl
