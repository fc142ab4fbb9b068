#include "mzl/arith.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mzl/error.hpp"
#include "mzl/newton.hpp"
#include "mzl/special.hpp"

namespace mzl {

namespace {

std::vector<std::uint32_t> base_sieve(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    if (n < 2) return out;
    std::vector<char> comp(n + 1, 0);
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = std::uint64_t(i) * i; j <= n; j += i)
            comp[j] = 1;
    }
    return out;
}

std::uint64_t isqrt_floor(std::uint64_t v) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

std::uint64_t ipow_checked(std::uint64_t b, int e, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > cap / b) return cap + 1;
        v *= b;
    }
    return v;
}

}  // namespace

void for_each_prime(std::uint64_t bound,
                    const std::function<void(std::uint64_t)>& fn) {
    if (bound < 2) return;
    std::uint64_t root = isqrt_floor(bound);
    auto base = base_sieve(static_cast<std::uint32_t>(root));
    for (auto p : base) fn(p);
    const std::uint64_t seg = 1u << 20;
    std::vector<char> mark(seg);
    std::uint64_t first = std::max<std::uint64_t>(2, root + 1);
    for (std::uint64_t lo = first; lo <= bound; lo += seg) {
        std::uint64_t hi = std::min(bound, lo + seg - 1);
        std::fill(mark.begin(), mark.begin() + (hi - lo + 1), 0);
        for (auto p : base) {
            std::uint64_t start = (lo + p - 1) / p * p;
            for (std::uint64_t j = start; j <= hi; j += p) mark[j - lo] = 1;
        }
        for (std::uint64_t v = lo; v <= hi; ++v)
            if (!mark[v - lo]) fn(v);
    }
}

std::vector<std::uint32_t> primes_upto(std::uint64_t bound,
                                       const std::string& cache_dir) {
    if (bound > 0xFFFFFFFFull)
        throw BudgetError("prime table bound exceeds 32-bit range");
    namespace fs = std::filesystem;
    static const char magic[8] = {'M', 'Z', 'L', 'P', 'R', 'I', 'M', '1'};
    fs::path file;
    if (!cache_dir.empty()) file = fs::path(cache_dir) / "primes.bin";
    if (!file.empty()) {
        std::ifstream in(file, std::ios::binary);
        char m[8];
        std::uint64_t b = 0, cnt = 0;
        if (in.read(m, 8) && std::equal(m, m + 8, magic) &&
            in.read(reinterpret_cast<char*>(&b), 8) &&
            in.read(reinterpret_cast<char*>(&cnt), 8) && b >= bound &&
            cnt < (1ull << 32)) {
            std::vector<std::uint32_t> all(cnt);
            if (in.read(reinterpret_cast<char*>(all.data()),
                        static_cast<std::streamsize>(cnt * 4))) {
                all.erase(std::upper_bound(all.begin(), all.end(),
                                           static_cast<std::uint32_t>(bound)),
                          all.end());
                return all;
            }
        }
    }
    std::vector<std::uint32_t> out;
    for_each_prime(bound, [&](std::uint64_t p) {
        out.push_back(static_cast<std::uint32_t>(p));
    });
    if (!file.empty()) {
        std::error_code ec;
        fs::create_directories(file.parent_path(), ec);
        fs::path tmp = file;
        tmp += ".tmp";
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        std::uint64_t cnt = out.size();
        os.write(magic, 8);
        os.write(reinterpret_cast<const char*>(&bound), 8);
        os.write(reinterpret_cast<const char*>(&cnt), 8);
        os.write(reinterpret_cast<const char*>(out.data()),
                 static_cast<std::streamsize>(cnt * 4));
        os.close();
        if (os) fs::rename(tmp, file, ec);
    }
    return out;
}

bool ArithmeticFunction::multiplicative() const {
    return kind != FnKind::MangoldtProduct && kind != FnKind::LogprimeProduct;
}

bool ArithmeticFunction::integer_valued() const {
    switch (kind) {
        case FnKind::Unit:
        case FnKind::ComponentwiseKfree:
        case FnKind::ProductKfree:
            return true;
        case FnKind::MangoldtProduct:
        case FnKind::LogprimeProduct:
            return false;
        case FnKind::UniformMultiplicative:
            for (const auto& [nu, v] : table)
                if (v != std::nearbyint(v)) return false;
            return true;
    }
    return false;
}

bool ArithmeticFunction::has_local_table() const {
    return kind == FnKind::ComponentwiseKfree ||
           kind == FnKind::ProductKfree ||
           kind == FnKind::UniformMultiplicative;
}

double ArithmeticFunction::local(const std::vector<long>& nu) const {
    if (static_cast<int>(nu.size()) != n)
        throw DomainError("local: dimension mismatch");
    bool zero = true;
    for (long e : nu) {
        if (e < 0) throw DomainError("local: negative valuation");
        if (e != 0) zero = false;
    }
    if (zero) return 1.0;
    if (kind == FnKind::Unit) return 1.0;
    if (!has_local_table())
        throw DomainError("no finite local table for kind " + name);
    auto it = table.find(nu);
    return it == table.end() ? 0.0 : it->second;
}

namespace {
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t m) {
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}
}  // namespace

double ArithmeticFunction::eval(const std::vector<std::uint64_t>& m) const {
    if (static_cast<int>(m.size()) != n)
        throw DomainError("eval: dimension mismatch");
    for (auto v : m)
        if (v == 0) throw DomainError("eval: arguments must be positive");
    switch (kind) {
        case FnKind::Unit:
            return 1.0;
        case FnKind::MangoldtProduct: {
            double w = 1;
            for (auto v : m) {
                auto fac = factorize(v);
                if (fac.size() != 1) return 0.0;  // 1 or composite support
                w *= std::log(static_cast<double>(fac[0].first));
            }
            return w;
        }
        case FnKind::LogprimeProduct: {
            double w = 1;
            for (auto v : m) {
                auto fac = factorize(v);
                if (fac.size() != 1 || fac[0].second != 1) return 0.0;
                w *= std::log(static_cast<double>(v));
            }
            return w;
        }
        default:
            break;
    }
    std::vector<std::pair<std::uint64_t, std::vector<long>>> nu;
    for (int i = 0; i < n; ++i)
        for (const auto& [p, e] : factorize(m[i])) {
            auto it = std::find_if(nu.begin(), nu.end(),
                                   [&](const auto& q) { return q.first == p; });
            if (it == nu.end()) {
                nu.emplace_back(p, std::vector<long>(n, 0));
                it = std::prev(nu.end());
            }
            it->second[i] = e;
        }
    double w = 1;
    for (const auto& [p, vec] : nu) {
        w *= local(vec);
        if (w == 0.0) return 0.0;
    }
    return w;
}

ArithmeticFunction builtin(FnKind kind, int k, int n) {
    if (n < 1 || n > 16) throw DomainError("arity out of range");
    ArithmeticFunction f;
    f.kind = kind;
    f.n = n;
    f.k = k;
    switch (kind) {
        case FnKind::Unit:
            f.name = "unit";
            break;
        case FnKind::MangoldtProduct:
            f.name = "mangoldt";
            break;
        case FnKind::LogprimeProduct:
            f.name = "logprime";
            break;
        case FnKind::ComponentwiseKfree: {
            if (k < 2) throw DomainError("k-free kinds need k >= 2");
            if (std::pow(static_cast<double>(k), n) > 262144.0)
                throw BudgetError("local table too large");
            std::vector<long> nu(n, 0);
            for (;;) {
                int i = 0;
                while (i < n && ++nu[i] == k) nu[i++] = 0;
                if (i == n) break;
                f.table[nu] = 1.0;
            }
            f.name = "B" + std::to_string(k);
            break;
        }
        case FnKind::ProductKfree: {
            if (k < 2) throw DomainError("k-free kinds need k >= 2");
            // all nu != 0 with |nu|_1 <= k-1
            std::vector<long> nu(n, 0);
            for (;;) {
                int i = 0;
                ++nu[i];
                while (i < n) {
                    long s = 0;
                    for (long e : nu) s += e;
                    if (s <= k - 1) break;
                    nu[i++] = 0;
                    if (i < n) ++nu[i];
                }
                if (i == n) break;
                f.table[nu] = 1.0;
            }
            f.name = "D" + std::to_string(k);
            break;
        }
        case FnKind::UniformMultiplicative:
            throw DomainError("uniform tables come from table_function_from_json");
    }
    return f;
}

ArithmeticFunction builtin_named(const std::string& name, int n) {
    if (name == "unit" || name == "1") return builtin(FnKind::Unit, 0, n);
    if (name == "mangoldt") return builtin(FnKind::MangoldtProduct, 0, n);
    if (name == "logprime") return builtin(FnKind::LogprimeProduct, 0, n);
    if (!name.empty() && (name[0] == 'B' || name[0] == 'D')) {
        std::string rest =
            name.substr(name.size() > 1 && name[1] == ':' ? 2 : 1);
        if (!rest.empty() &&
            std::all_of(rest.begin(), rest.end(),
                        [](char c) { return c >= '0' && c <= '9'; })) {
            int k = std::stoi(rest);
            return builtin(name[0] == 'B' ? FnKind::ComponentwiseKfree
                                          : FnKind::ProductKfree,
                           k, n);
        }
    }
    throw ParseError("unknown arithmetic function \"" + name + "\"");
}

ArithmeticFunction table_function_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("table json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
        throw ParseError("table json: need {\"n\":..., \"entries\":[...]}");
    int n = j["n"].get<int>();
    if (n < 1 || n > 16) throw ParseError("table json: arity out of range");
    ArithmeticFunction f;
    f.kind = FnKind::UniformMultiplicative;
    f.n = n;
    f.name = "table";
    for (const auto& e : j["entries"]) {
        if (!e.contains("nu") || !e.contains("value"))
            throw ParseError("table json: entry needs nu and value");
        std::vector<long> nu = e["nu"].get<std::vector<long>>();
        if (static_cast<int>(nu.size()) != n)
            throw ParseError("table json: nu has wrong length");
        bool zero = true;
        for (long v : nu) {
            if (v < 0) throw ParseError("table json: negative valuation");
            if (v) zero = false;
        }
        double val = e["value"].get<double>();
        if (!std::isfinite(val)) throw ParseError("table json: bad value");
        if (zero) {
            if (val != 1.0)
                throw ParseError("table json: value at nu = 0 must be 1");
            continue;
        }
        f.table[nu] = val;
    }
    return f;
}

WeightOracle::WeightOracle(const ArithmeticFunction& f, std::uint64_t bound)
    : f_(f), bound_(bound) {
    switch (f_.kind) {
        case FnKind::Unit:
            break;
        case FnKind::ComponentwiseKfree: {
            axis_.assign(bound_ + 1, 1.0);
            axis_[0] = 0.0;
            for (std::uint64_t p = 2;
                 ipow_checked(p, f_.k, bound_) <= bound_; ++p) {
                std::uint64_t pk = ipow_checked(p, f_.k, bound_);
                for (std::uint64_t j = pk; j <= bound_; j += pk)
                    axis_[j] = 0.0;
            }
            // composite p mark subsets of their prime divisors' marks
            break;
        }
        case FnKind::MangoldtProduct: {
            axis_.assign(bound_ + 1, 0.0);
            for (auto p : primes_upto(bound_)) {
                double lg = std::log(static_cast<double>(p));
                for (std::uint64_t q = p; q <= bound_;) {
                    axis_[q] = lg;
                    if (q > bound_ / p) break;
                    q *= p;
                }
            }
            break;
        }
        case FnKind::LogprimeProduct: {
            axis_.assign(bound_ + 1, 0.0);
            for (auto p : primes_upto(bound_))
                axis_[p] = std::log(static_cast<double>(p));
            break;
        }
        case FnKind::ProductKfree:
        case FnKind::UniformMultiplicative: {
            if (bound_ > 100000000ull)
                throw BudgetError("factor table too large");
            spf_.assign(bound_ + 1, 0);
            for (std::uint64_t i = 2; i <= bound_; ++i) {
                if (spf_[i]) continue;
                for (std::uint64_t j = i; j <= bound_; j += i)
                    if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
            }
            break;
        }
    }
}

double WeightOracle::operator()(const std::uint64_t* m) const {
    switch (f_.kind) {
        case FnKind::Unit:
            return 1.0;
        case FnKind::ComponentwiseKfree:
        case FnKind::MangoldtProduct:
        case FnKind::LogprimeProduct: {
            double w = 1.0;
            for (int i = 0; i < f_.n; ++i) {
                w *= axis_[m[i]];
                if (w == 0.0) return 0.0;
            }
            return w;
        }
        default:
            break;
    }
    std::vector<std::pair<std::uint32_t, std::vector<long>>> fac;
    for (int i = 0; i < f_.n; ++i) {
        auto v = static_cast<std::uint32_t>(m[i]);
        while (v > 1) {
            std::uint32_t p = spf_[v];
            int e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            auto it = std::find_if(fac.begin(), fac.end(),
                                   [&](const auto& q) { return q.first == p; });
            if (it == fac.end()) {
                fac.emplace_back(p, std::vector<long>(f_.n, 0));
                it = std::prev(fac.end());
            }
            it->second[i] = e;
        }
    }
    double w = 1.0;
    for (const auto& [p, nu] : fac) {
        w *= f_.local(nu);
        if (w == 0.0) return 0.0;
    }
    return w;
}

FiniteTypeDescriptor finite_type_descriptor(const ArithmeticFunction& f) {
    FiniteTypeDescriptor d;
    d.n = f.n;
    if (f.kind == FnKind::Unit || f.kind == FnKind::MangoldtProduct ||
        f.kind == FnKind::LogprimeProduct) {
        // the support polyhedron is conv{e_i} + R+^n for all three: every
        // nonzero valuation pattern dominates some e_i, and the local series
        // carry a simple pole of residue 1 per coordinate
        d.c.assign(f.n, Rat(1));
        d.iota = f.n;
        for (int i = 0; i < f.n; ++i) {
            std::vector<long> e(f.n, 0);
            e[i] = 1;
            d.I.push_back(e);
        }
        d.u.assign(f.n, 1);
        d.U = f.n;
        return d;
    }
    std::vector<RatVec> pts;
    for (const auto& [nu, v] : f.table) {
        if (v == 0.0) continue;
        RatVec p;
        for (long e : nu) p.emplace_back(e);
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw DomainError("support of the local table is empty");
    NewtonPolyhedron N = newton_polyhedron(pts);
    DiagonalEntry ent = diagonal_entry(N);
    if (!ent.compact)
        throw DomainError(
            "diagonal face of the support polyhedron is not compact");
    d.c = ent.c;
    d.iota = sum(ent.c);
    for (const auto& p : ent.face_points) {
        std::vector<long> nu;
        for (const auto& x : p) {
            if (!is_integer(x)) throw DomainError("non-lattice face point");
            nu.push_back(floor_long(x));
        }
        double v = f.table.at(nu);
        double r = std::nearbyint(v);
        if (std::abs(v - r) > 1e-9 || r < 1.0)
            throw DomainError(
                "face multiplicities must be positive integers, got " +
                std::to_string(v));
        d.I.push_back(nu);
        d.u.push_back(static_cast<int>(r));
    }
    // face_points come back in hull-generator order; normalize to lex
    std::vector<std::size_t> idx(d.I.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return d.I[a] < d.I[b]; });
    decltype(d.I) I2;
    decltype(d.u) u2;
    for (auto i : idx) {
        I2.push_back(d.I[i]);
        u2.push_back(d.u[i]);
    }
    d.I = std::move(I2);
    d.u = std::move(u2);
    d.U = 0;
    for (int v : d.u) d.U += v;
    return d;
}

EulerProduct euler_product(const ArithmeticFunction& f, const RatVec& c,
                           double tolerance, std::uint64_t pmax_cap) {
    if (!f.has_local_table())
        throw DomainError("euler_product needs a finite local table");
    if (static_cast<int>(c.size()) != f.n)
        throw DomainError("euler_product: dimension mismatch");
    // exponent spectrum of the local series sum_nu f(p^nu) x^{<nu,c>}
    std::map<Rat, double> series{{Rat(0), 1.0}};
    for (const auto& [nu, v] : f.table) {
        if (v == 0.0) continue;
        Rat q(0);
        for (int i = 0; i < f.n; ++i) q += Rat(nu[i]) * c[i];
        if (q <= 0)
            throw ConvergenceError("local series has mass at exponent <= 0");
        series[q] += v;
    }
    double mass1 = 0;
    if (auto it = series.find(Rat(1)); it != series.end()) mass1 = it->second;
    long U = std::lround(mass1);
    if (U < 0 || std::abs(mass1 - U) > 1e-9)
        throw ConvergenceError(
            "pole multiplicity at the distinguished point is not an integer");

    // expand (1-x)^U * series; the x^1 coefficient cancels by construction
    std::map<Rat, double> g;
    double binom = 1.0;
    for (long i = 0; i <= U; ++i) {
        double sgn = (i % 2) ? -binom : binom;
        for (const auto& [q, v] : series) g[q + Rat(i)] += sgn * v;
        binom = binom * (U - i) / (i + 1);
    }
    double scale = 0;
    for (const auto& [q, v] : g) scale += std::abs(v);
    struct Term {
        double coef;
        double expo;
        long iexpo;  // -1 when fractional
    };
    std::vector<Term> terms;
    for (const auto& [q, v] : g) {
        if (std::abs(v) <= 1e-11 * scale) continue;
        if (q == 0) {
            if (std::abs(v - 1.0) > 1e-9)
                throw ConvergenceError("local factor: constant term != 1");
            continue;
        }
        if (q <= 1)
            throw ConvergenceError(
                "local factor keeps mass at exponent <= 1; product diverges");
        double e = to_double(q);
        long ie = is_integer(q) && e < 60 ? floor_long(q) : -1;
        terms.push_back({v, e, ie});
    }

    EulerProduct out;
    if (terms.empty()) {  // telescoped exactly, e.g. (1-x)(1+x+...+x^{k-1})
        out.value = 1.0;
        out.tail_bound = 0.0;
        out.pmax = 0;
        return out;
    }
    // sum_{p>x} p^{-e} <= 1.3 e/((e-1) x^{e-1} log x) via pi(t) < 1.3 t/log t
    auto tail = [&](double x) {
        double S = 0;
        for (const auto& t : terms)
            S += 1.05 * std::abs(t.coef) * 1.3 * t.expo / (t.expo - 1.0) *
                 std::pow(x, 1.0 - t.expo) / std::log(x);
        return S;
    };
    std::uint64_t pmax = 1u << 16;
    while (pmax < pmax_cap && tail(static_cast<double>(pmax)) > 0.5 * tolerance)
        pmax *= 2;
    pmax = std::min(pmax, pmax_cap);

    long double prod = 1.0L;
    for_each_prime(pmax, [&](std::uint64_t p) {
        long double fac = 1.0L;
        for (const auto& t : terms) {
            long double pe;
            if (t.iexpo > 0) {
                pe = 1.0L;
                for (long i = 0; i < t.iexpo; ++i) pe *= p;
            } else {
                pe = powl(static_cast<long double>(p),
                          static_cast<long double>(t.expo));
            }
            fac += t.coef / pe;
        }
        prod *= fac;
    });
    out.value = static_cast<double>(prod);
    out.pmax = pmax;
    out.tail_bound =
        std::abs(out.value) * std::expm1(tail(static_cast<double>(pmax)));
    return out;
}

EulerProduct h_at_zero(const ArithmeticFunction& f, const RatVec& c,
                       double tolerance) {
    switch (f.kind) {
        case FnKind::Unit:
        case FnKind::MangoldtProduct:
        case FnKind::LogprimeProduct:
            // n zeta-type factors, simple poles of residue 1 each
            return {1.0, 0.0, 0};
        case FnKind::ComponentwiseKfree: {
            EulerProduct out;
            out.value = std::pow(zeta_real(f.k), -f.n);
            out.tail_bound = 1e-13 * std::abs(out.value);
            out.pmax = 0;
            return out;
        }
        default:
            return euler_product(f, c, tolerance);
    }
}

}  // namespace mzl
