#include "outage_alloc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace outage_alloc::numerics {

namespace {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double value;
    double error;
};

GkEstimate gk15(const Fn& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double fv[7][2];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        fv[i][0] = f(center - dx);
        fv[i][1] = f(center + dx);
        const double sum = fv[i][0] + fv[i][1];
        resk += kWgk[i] * sum;
        if (i % 2 == 1) resg += kWg[i / 2] * sum;
    }

    // QUADPACK-style scale-aware error estimate.
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::abs(fv[i][0] - mean) + std::abs(fv[i][1] - mean));
    resasc *= std::abs(half);

    const double value = resk * half;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {value, err};
}

struct Budget {
    std::size_t remaining;
};

// Adaptive subdivision of a single interval to absolute tolerance eps_abs.
// Intervals narrower than a few ulps are accepted as-is; the caller's shell
// decomposition keeps genuine endpoint singularities out of this routine.
double adapt_gk(const Fn& f, double a, double b, double eps_abs, Budget& budget) {
    struct Seg {
        double a, b, value, error;
    };
    const double total_width = b - a;
    std::vector<Seg> stack;
    if (budget.remaining == 0) throw NonConvergence("quadrature subdivision budget exhausted");
    --budget.remaining;
    const GkEstimate first = gk15(f, a, b);
    stack.push_back({a, b, first.value, first.error});

    double sum = 0.0;
    while (!stack.empty()) {
        const Seg seg = stack.back();
        stack.pop_back();
        const double width = seg.b - seg.a;
        const double mid = 0.5 * (seg.a + seg.b);
        const bool resolvable = mid > seg.a && mid < seg.b;
        if (seg.error <= eps_abs * (width / total_width) || !resolvable) {
            sum += seg.value;
            continue;
        }
        if (budget.remaining < 2) throw NonConvergence("quadrature subdivision budget exhausted");
        budget.remaining -= 2;
        const GkEstimate left = gk15(f, seg.a, mid);
        const GkEstimate right = gk15(f, mid, seg.b);
        stack.push_back({seg.a, mid, left.value, left.error});
        stack.push_back({mid, seg.b, right.value, right.error});
    }
    return sum;
}

// Open-interval integration: a central chunk plus dyadic shells toward each
// endpoint. Shells whose contributions stop shrinking trigger the divergence
// diagnosis; shells below the stop threshold end that side.
double integrate_open(const Fn& f, double a, double b, const Tolerance& tol) {
    const double w = b - a;
    Budget budget{tol.max_subintervals};

    // Pilot pass sets the magnitude scale before the running total exists.
    double scale = std::abs(gk15(f, a + 0.25 * w, b - 0.25 * w).value);

    double total = 0.0;
    const auto goal = [&] {
        return std::max(tol.abs, tol.rel * std::max(std::abs(total), scale));
    };
    const auto piece_eps = [&] { return goal() / 64.0; };

    // center [a + w/4, b - w/4]
    total += adapt_gk(f, a + 0.25 * w, b - 0.25 * w, piece_eps(), budget);

    constexpr int kMaxShells = 1100;
    constexpr int kLookback = 8;

    for (int side = 0; side < 2; ++side) {
        std::vector<double> history;
        int quiet = 0;
        for (int k = 2; k <= kMaxShells; ++k) {
            const double outer = std::ldexp(w, -k);      // w * 2^-k
            const double inner = std::ldexp(w, -k - 1);  // w * 2^-(k+1)
            double lo, hi;
            if (side == 0) {
                lo = a + inner;
                hi = a + outer;
            } else {
                lo = b - outer;
                hi = b - inner;
            }
            if (!(lo < hi)) {  // shell collapsed to fp resolution
                if (!history.empty() && history.back() > 0.25 * goal())
                    throw NonConvergence("endpoint resolved to fp limit before convergence");
                break;
            }

            const double s = adapt_gk(f, lo, hi, piece_eps(), budget);
            total += s;
            history.push_back(std::abs(s));

            const double stop = 0.25 * goal();
            if (std::abs(s) <= stop) {
                if (++quiet >= 2) break;
                continue;
            }
            quiet = 0;
            const int n = static_cast<int>(history.size());
            if (n > kLookback + 4 &&
                history[n - 1] >= 0.9 * history[n - 1 - kLookback] && history[n - 1] > stop)
                throw DivergentIntegral("partial sums do not shrink under dyadic refinement");
            if (k == kMaxShells)
                throw NonConvergence("endpoint shells exhausted without convergence");
        }
    }
    return total;
}

}  // namespace

Tolerance default_tolerance() {
    Tolerance tol;
    if (const char* env = std::getenv("OUTAGE_ALLOC_TOL")) {
        char* end = nullptr;
        const double rel = std::strtod(env, &end);
        if (end != env && rel > 0.0 && rel < 1.0) {
            tol.rel = rel;
            tol.abs = rel * 1e-3;
        }
    }
    return tol;
}

double integrate(const Fn& f, double a, double b, const Tolerance& tol) {
    tol.validate();
    if (!(a < b)) throw InvalidParam("integrate: requires a < b");
    if (!std::isfinite(a)) throw InvalidParam("integrate: lower limit must be finite");

    if (std::isinf(b)) {
        // u = 1/(1 + x - a) maps [a, inf) onto (0, 1].
        Fn g = [&f, a](double u) {
            const double x = a + (1.0 - u) / u;
            if (!std::isfinite(x)) return 0.0;
            return f(x) / (u * u);
        };
        return integrate_open(g, 0.0, 1.0, tol);
    }
    return integrate_open(f, a, b, tol);
}

double bisect(const Fn& g, double lo, double hi, double target, const Tolerance& tol) {
    tol.validate();
    if (!(lo <= hi)) throw BracketInvalid("bisect: lo > hi");
    const double g_lo = g(lo);
    const double g_hi = g(hi);
    if (g_lo > target + tol.abs || g_hi < target - tol.abs)
        throw BracketInvalid("bisect: target not bracketed by [g(lo), g(hi)]");
    if (std::abs(g_lo - target) <= tol.abs) return lo;
    if (std::abs(g_hi - target) <= tol.abs) return hi;

    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < tol.max_iter; ++i) {
        mid = 0.5 * (lo + hi);
        const double value = g(mid);
        if (std::abs(value - target) <= tol.abs) return mid;
        if (value < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= tol.rel * std::abs(mid)) return 0.5 * (lo + hi);
    }
    throw NonConvergence("bisect: max_iter reached without meeting tolerance");
}

double bracket_above(const Fn& g, double lo, double target, int max_doublings) {
    double step = 1.0;
    for (int k = 0; k <= max_doublings; ++k) {
        const double hi = lo + step;
        if (g(hi) >= target) return hi;
        step *= 2.0;
    }
    throw NoBracket("bracket_above: doubling cap exceeded; target unreachable");
}

}  // namespace outage_alloc::numerics
