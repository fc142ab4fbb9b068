#pragma once
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace mzl {

// Gauss7/Kronrod15 panel. V is double or std::complex<double>.
namespace qk {
inline constexpr double xk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};
}  // namespace qk

template <class V, class F>
struct Panel {
    double a, b;
    V integral;
    double err;
};

template <class V, class F>
Panel<V, F> qk15(const F& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    V resk = qk::wk[7] * f(c);
    V resg = qk::wg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        double dx = h * qk::xk[i];
        V fv = f(c - dx) + f(c + dx);
        resk += qk::wk[i] * fv;
        if (i % 2 == 1) resg += qk::wg[i / 2] * fv;
    }
    Panel<V, F> p;
    p.a = a;
    p.b = b;
    p.integral = resk * h;
    p.err = std::abs(resk - resg) * std::abs(h);
    return p;
}

template <class V>
struct QuadResult {
    V value{};
    double error = 0;
    long evals = 0;
    bool converged = false;
};

// Globally adaptive bisection: always split the panel with the largest error
// estimate until the summed estimate meets max(abs_tol, rel_tol * |value|).
template <class V, class F>
QuadResult<V> integrate_adaptive(const F& f, double a, double b, double rel_tol,
                                 double abs_tol = 0.0, int max_panels = 4000) {
    QuadResult<V> out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::vector<Panel<V, F>> panels;
    panels.push_back(qk15<V>(f, a, b));
    out.evals = 15;
    for (;;) {
        V total{};
        double err = 0;
        for (const auto& p : panels) {
            total += p.integral;
            err += p.err;
        }
        double target = std::max(abs_tol, rel_tol * std::abs(total));
        if (err <= target || static_cast<int>(panels.size()) >= max_panels) {
            out.value = total;
            out.error = err;
            out.converged = err <= std::max(target, 1e-300);
            return out;
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        Panel<V, F> p = panels[worst];
        double mid = 0.5 * (p.a + p.b);
        panels[worst] = qk15<V>(f, p.a, mid);
        panels.push_back(qk15<V>(f, mid, p.b));
        out.evals += 30;
    }
}

}  // namespace mzl
