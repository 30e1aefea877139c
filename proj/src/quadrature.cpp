#include "cpq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace cpq {

namespace {

// Kronrod 15 nodes/weights on [-1,1] and the embedded Gauss-7 weights.
const double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

} // namespace

QuadResult gk15(const Fn& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double resk = wgk[7] * fc;
    double resg = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * xgk[j];
        double fsum = f(c - x) + f(c + x);
        resk += wgk[j] * fsum;
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
    }
    QuadResult r;
    r.value = resk * h;
    r.error = std::abs((resk - resg) * h);
    return r;
}

QuadResult integrate_adaptive(const Fn& f, double a, double b, const QuadratureConfig& cfg) {
    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    QuadResult first = gk15(f, a, b);
    std::priority_queue<Panel> heap;
    heap.push({a, b, first.value, first.error});
    double total = first.value, toterr = first.error;
    int used = 1;
    while (toterr > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) &&
           used < cfg.max_subdivisions) {
        Panel p = heap.top();
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        QuadResult l = gk15(f, p.a, m), r = gk15(f, m, p.b);
        total += l.value + r.value - p.value;
        toterr += l.error + r.error - p.error;
        heap.push({p.a, m, l.value, l.error});
        heap.push({m, p.b, r.value, r.error});
        ++used;
    }
    QuadResult out{total, toterr,
                   toterr <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))};
    return out;
}

QuadResult integrate_tail(const Fn& f, double a, double chunk, const QuadratureConfig& cfg) {
    QuadResult out;
    double x = a;
    int quiet = 0;
    // cap at a generous number of chunks; envelope decay makes this loose
    for (int i = 0; i < 200000; ++i) {
        QuadResult c = integrate_adaptive(f, x, x + chunk, cfg);
        out.value += c.value;
        out.error += c.error;
        x += chunk;
        double thresh = std::max(cfg.abs_tol, 0.1 * cfg.rel_tol * std::abs(out.value));
        if (std::abs(c.value) < thresh) {
            if (++quiet >= 3) return out;
        } else {
            quiet = 0;
        }
    }
    out.converged = false;
    return out;
}

QuadResult euler_tail(const Fn& f, double a, double chunk, int nchunks,
                      const QuadratureConfig& cfg) {
    std::vector<double> partial(nchunks);
    QuadResult out;
    double s = 0.0;
    for (int i = 0; i < nchunks; ++i) {
        QuadResult c = (chunk > 0.5)
                           ? integrate_adaptive(f, a + i * chunk, a + (i + 1) * chunk, cfg)
                           : gk15(f, a + i * chunk, a + (i + 1) * chunk);
        s += c.value;
        out.error += c.error;
        partial[i] = s;
    }
    // repeated averaging of the partial-sum sequence
    std::vector<double> t = partial;
    double best = t.back();
    while (t.size() > 1) {
        for (size_t i = 0; i + 1 < t.size(); ++i) t[i] = 0.5 * (t[i] + t[i + 1]);
        t.pop_back();
        best = t.back();
    }
    out.value = best;
    // accelerated truncation error is tiny; keep the panel error estimate only
    return out;
}

double extrapolate_to_zero(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("extrapolate_to_zero: bad sample set");
    std::vector<double> p = ys;
    size_t n = p.size();
    for (size_t m = 1; m < n; ++m)
        for (size_t i = 0; i + m < n; ++i)
            p[i] = (0.0 - xs[i + m]) * p[i] / (xs[i] - xs[i + m]) +
                   (xs[i] - 0.0) * p[i + 1] / (xs[i] - xs[i + m]);
    return p[0];
}

} // namespace cpq
