#include "mzl/polyring.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mzl/error.hpp"

namespace mzl {

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char take() {
        skip_ws();
        return s[pos++];
    }
};

std::string take_number(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    bool seen_dot = false;
    while (c.pos < c.s.size()) {
        char ch = c.s[c.pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            ++c.pos;
        } else if (ch == '.' && !seen_dot) {
            seen_dot = true;
            ++c.pos;
        } else {
            break;
        }
    }
    if (c.pos == start) throw ParseError("expected a number at position " + std::to_string(start));
    return c.s.substr(start, c.pos - start);
}

// NUMBER or NUMBER/NUMBER, returned exactly.
Rat take_rational(Cursor& c) {
    if (c.peek() == '-') throw ParseError("negative exponent");
    Rat r = rat_from_string(take_number(c));
    if (c.peek() == '/') {
        c.take();
        Rat den = rat_from_string(take_number(c));
        if (den == 0) throw ParseError("zero denominator in exponent");
        r /= den;
    }
    return r;
}

int take_var_index(Cursor& c) {
    c.take();  // 'x'
    if (!std::isdigit(static_cast<unsigned char>(c.peek())))
        throw ParseError("expected a variable index after 'x'");
    std::size_t start = c.pos;
    while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) ++c.pos;
    int idx = std::stoi(c.s.substr(start, c.pos - start));
    if (idx < 1) throw ParseError("variable indices start at x1");
    return idx;
}

void check_involves_all(const GenPoly& p) {
    for (int i = 0; i < p.n; ++i) {
        bool used = false;
        for (const auto& [e, c] : p.terms)
            if (e[i] > 0) {
                used = true;
                break;
            }
        if (!used)
            throw ParseError("variable-count mismatch: polynomial does not involve x" +
                             std::to_string(i + 1));
    }
}

std::string coef_to_string(double c) {
    if (c == std::floor(c) && std::abs(c) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", c);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
}

}  // namespace

GenPoly parse_poly(const std::string& text, int expect_n) {
    Cursor c{text};
    // (exponents keyed by variable index, coefficient) per term.
    std::vector<std::pair<std::map<int, Rat>, double>> raw;
    int max_idx = 0;
    bool negative = false;
    if (c.peek() == '+' || c.peek() == '-') negative = (c.take() == '-');
    while (true) {
        if (c.done()) throw ParseError("empty term");
        std::map<int, Rat> expo;
        double coef = 1.0;
        bool saw_factor = false;
        while (!c.done()) {
            char ch = c.peek();
            if (ch == '+' || ch == '-') break;
            if (ch == '*') {
                c.take();
                continue;
            }
            if (ch == 'x') {
                int idx = take_var_index(c);
                max_idx = std::max(max_idx, idx);
                Rat e = 1;
                if (c.peek() == '^') {
                    c.take();
                    e = take_rational(c);
                }
                expo[idx] += e;
                saw_factor = true;
            } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
                Rat k = rat_from_string(take_number(c));
                if (c.peek() == '/') {
                    c.take();
                    Rat den = rat_from_string(take_number(c));
                    if (den == 0) throw ParseError("zero denominator");
                    k /= den;
                }
                coef *= to_double(k);
                saw_factor = true;
            } else {
                throw ParseError(std::string("unexpected character '") + ch + "'");
            }
        }
        if (!saw_factor) throw ParseError("empty term");
        if (negative || coef <= 0.0)
            throw ParseError("non-positive coefficient " +
                             coef_to_string(negative ? -coef : coef));
        raw.emplace_back(std::move(expo), coef);
        if (c.done()) break;
        negative = (c.take() == '-');
    }

    if (max_idx == 0) throw ParseError("polynomial has no variables");
    if (expect_n > 0 && max_idx > expect_n)
        throw ParseError("variable-count mismatch: saw x" + std::to_string(max_idx) +
                         " but expected n=" + std::to_string(expect_n));

    GenPoly p;
    p.n = expect_n > 0 ? expect_n : max_idx;
    for (auto& [expo, coef] : raw) {
        RatVec e(p.n, Rat(0));
        for (auto& [idx, r] : expo) e[idx - 1] = r;
        p.terms[e] += coef;
    }
    check_involves_all(p);
    return p;
}

std::string render_poly(const GenPoly& p) {
    if (p.terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms) {
        if (!first) out += " + ";
        first = false;
        bool has_var = false;
        for (const auto& r : e)
            if (r > 0) has_var = true;
        std::string body;
        for (int i = 0; i < p.n; ++i) {
            if (e[i] == 0) continue;
            if (!body.empty()) body += " ";
            body += "x" + std::to_string(i + 1);
            if (e[i] != 1) body += "^" + rat_to_string(e[i]);
        }
        if (!has_var) {
            out += coef_to_string(c);
        } else if (c == 1.0) {
            out += body;
        } else {
            out += coef_to_string(c) + " " + body;
        }
    }
    return out;
}

nlohmann::json poly_to_json(const GenPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : p.terms) {
        nlohmann::json ev = nlohmann::json::array();
        for (const auto& r : e) ev.push_back(rat_to_string(r));
        terms.push_back({{"c", c}, {"e", ev}});
    }
    return {{"n", p.n}, {"terms", terms}};
}

GenPoly poly_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("terms"))
        throw ParseError("polynomial JSON must have fields n, terms");
    GenPoly p;
    p.n = j.at("n").get<int>();
    if (p.n < 1) throw ParseError("n must be >= 1");
    for (const auto& t : j.at("terms")) {
        double c = t.at("c").get<double>();
        if (!(c > 0)) throw ParseError("non-positive coefficient in JSON term");
        const auto& ev = t.at("e");
        if (static_cast<int>(ev.size()) != p.n)
            throw ParseError("variable-count mismatch in JSON term");
        RatVec e;
        for (const auto& x : ev) {
            Rat r = x.is_string() ? rat_from_string(x.get<std::string>())
                                  : Rat(x.get<long>());
            if (r < 0) throw ParseError("negative exponent in JSON term");
            e.push_back(r);
        }
        p.terms[e] += c;
    }
    check_involves_all(p);
    return p;
}

Rat poly_degree(const GenPoly& p) {
    if (p.terms.empty()) throw DomainError("degree of empty polynomial");
    Rat best = 0;
    for (const auto& [e, c] : p.terms) best = std::max(best, sum(e));
    return best;
}

bool is_homogeneous(const GenPoly& p) {
    if (p.terms.empty()) return true;
    Rat d = sum(p.terms.begin()->first);
    for (const auto& [e, c] : p.terms)
        if (sum(e) != d) return false;
    return true;
}

GenPoly homogeneous_part(const GenPoly& p) {
    Rat d = poly_degree(p);
    GenPoly h;
    h.n = p.n;
    for (const auto& [e, c] : p.terms)
        if (sum(e) == d) h.terms[e] = c;
    return h;
}

bool is_elliptic(const GenPoly& p) {
    GenPoly h = homogeneous_part(p);
    Rat d = poly_degree(p);
    for (int i = 0; i < p.n; ++i) {
        RatVec pure(p.n, Rat(0));
        pure[i] = d;
        if (h.terms.find(pure) == h.terms.end()) return false;
    }
    return true;
}

std::vector<RatVec> support(const GenPoly& p) {
    std::vector<RatVec> out;
    out.reserve(p.terms.size());
    for (const auto& [e, c] : p.terms) out.push_back(e);
    return out;
}

double evaluate(const GenPoly& p, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != p.n)
        throw DomainError("evaluate: point has wrong dimension");
    for (double xi : x)
        if (xi < 0) throw DomainError("evaluate: negative coordinate");
    long double acc = 0;
    for (const auto& [e, c] : p.terms) {
        long double prod = c;
        for (int i = 0; i < p.n; ++i) {
            if (e[i] == 0) continue;
            if (x[i] == 0) {
                if (!is_integer(e[i]))
                    throw DomainError("evaluate: fractional power of zero");
                prod = 0;
                break;
            }
            prod *= powl(static_cast<long double>(x[i]),
                         static_cast<long double>(to_double(e[i])));
        }
        acc += prod;
    }
    return static_cast<double>(acc);
}

double CompiledPoly::eval(const double* x) const {
    double acc = 0;
    if (integer_exponents) {
        for (const auto& t : terms) {
            double prod = t.c;
            for (int i = 0; i < n; ++i) {
                double b = x[i];
                for (int k = 0; k < t.ei[i]; ++k) prod *= b;
            }
            acc += prod;
        }
    } else {
        for (const auto& t : terms) {
            double prod = t.c;
            for (int i = 0; i < n; ++i)
                if (t.e[i] != 0) prod *= std::pow(x[i], t.e[i]);
            acc += prod;
        }
    }
    return acc;
}

__int128 CompiledPoly::eval_int(const long* m) const {
    __int128 acc = 0;
    for (const auto& t : terms) {
        __int128 prod = static_cast<long long>(t.c);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < t.ei[i]; ++k) prod *= m[i];
        acc += prod;
    }
    return acc;
}

CompiledPoly compile_poly(const GenPoly& p) {
    CompiledPoly cp;
    cp.n = p.n;
    cp.integer_exponents = true;
    cp.integer_coefficients = true;
    for (const auto& [e, c] : p.terms) {
        CompiledPoly::Term t;
        t.c = c;
        if (c != std::floor(c) || std::abs(c) > 9e15) cp.integer_coefficients = false;
        for (const auto& r : e) {
            t.e.push_back(to_double(r));
            if (is_integer(r) && r >= 0 && r <= 64) {
                t.ei.push_back(static_cast<int>(r.get_num().get_si()));
            } else {
                cp.integer_exponents = false;
                t.ei.push_back(0);
            }
        }
        cp.terms.push_back(std::move(t));
    }
    return cp;
}

}  // namespace mzl
