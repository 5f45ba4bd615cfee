#include "vortex/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace vortex {

namespace {

struct State {
    double rho;
    double drho;
};

// rhs for the outward variables (rho, rho')
State core_rhs(double l, State s) { return {s.drho, profile_rhs(l, s.rho, s.drho)}; }

// rhs for (eta, eta') with eta = 1 - rho, so that the tail keeps its relative precision
State tail_rhs(double l, State s) {
    double eta = s.rho, deta = s.drho;
    double rho = 1.0 - eta;
    double q = 1.0 + rho * rho;
    return {deta, -deta / l - 2.0 * rho * deta * deta / q + (1.0 - 1.0 / (l * l)) * eta * (2.0 - eta) * rho / q};
}

template <class F>
State rk4_step(F f, double ell, State y, double h) {
    State k1 = f(ell, y);
    State k2 = f(ell + 0.5 * h, {y.rho + 0.5 * h * k1.rho, y.drho + 0.5 * h * k1.drho});
    State k3 = f(ell + 0.5 * h, {y.rho + 0.5 * h * k2.rho, y.drho + 0.5 * h * k2.drho});
    State k4 = f(ell + h, {y.rho + h * k3.rho, y.drho + h * k3.drho});
    return {y.rho + h / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho),
            y.drho + h / 6.0 * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho)};
}

// One knot interval. Near the singular origin the interval is split so that
// every RK4 substep stays small compared to ell.
template <class F = State (*)(double, State)>
State advance(double ell, State y, double step, F f = core_rhs) {
    int m = std::max(1, static_cast<int>(std::ceil(std::abs(step) / (0.02 * ell))));
    double h = step / m;
    for (int k = 0; k < m; ++k) y = rk4_step(f, ell + k * h, y, h);
    return y;
}

State core_start(double a) {
    double l = profile_ell0;
    return {a * l - a * l * l * l / 8.0, a - 3.0 * a * l * l / 8.0};
}

// +1: rho reaches 1 (slope too large); -1: rho turns down (too small); 0: neither.
int classify(double a, std::size_t n_steps, double step) {
    State y = core_start(a);
    for (std::size_t i = 0; i < n_steps; ++i) {
        y = advance(profile_ell0 + static_cast<double>(i) * step, y, step);
        if (y.rho >= 1.0) return 1;
        if (y.drho < 0.0 || y.rho <= 0.0) return -1;
    }
    return 0;
}

// Decaying solution (eta, eta') of the linearization about rho = 1, as the
// asymptotic series of the modified Bessel function of order i.
State tail_series(double c0, double ell) {
    double term = 1.0, sum = 1.0, dsum = 0.0;
    for (int k = 1; k <= 8; ++k) {
        double odd = 2.0 * k - 1.0;
        term *= (-4.0 - odd * odd) / (8.0 * k);
        sum += term / std::pow(ell, k);
        dsum += -k * term / std::pow(ell, k + 1);
    }
    double base = c0 * std::exp(-ell) / std::sqrt(ell);
    double eta = base * sum;
    double deta = base * (-(1.0 + 0.5 / ell) * sum + dsum);
    return {eta, deta};
}

double hermite(double t, double dx, double y0, double d0, double y1, double d1, double* deriv) {
    double t2 = t * t, t3 = t2 * t;
    if (deriv) {
        *deriv = ((6.0 * t2 - 6.0 * t) * y0 + (-6.0 * t2 + 6.0 * t) * y1) / dx +
                 (3.0 * t2 - 4.0 * t + 1.0) * d0 + (3.0 * t2 - 2.0 * t) * d1;
    }
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * dx * d0 +
           (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * dx * d1;
}

std::array<double, 2> integrands(double rho, double drho) {
    double q = 1.0 + rho * rho;
    double f1 = rho * drho / (q * q);
    return {f1, f1 * (1.0 - rho * rho) / q};
}

} // namespace

double profile_rhs(double ell, double rho, double drho) {
    double q = 1.0 + rho * rho;
    return -drho / ell + 2.0 * rho * drho * drho / q -
           (1.0 - 1.0 / (ell * ell)) * (1.0 - rho * rho) * rho / q;
}

VortexProfile solve_profile(double ell_max, double step, double tol) {
    if (!(ell_max >= 20.0)) throw std::runtime_error("solve_profile: ell_max must be >= 20");
    if (!(step > 0.0 && step <= 1e-2)) throw std::runtime_error("solve_profile: step out of range");
    if (!(tol > 0.0 && tol <= 1e-8)) throw std::runtime_error("solve_profile: tol out of range");

    auto n = static_cast<std::size_t>(std::llround((ell_max - profile_ell0) / step));
    if (n % 2) ++n;

    // Shooting by bisection. It runs to the resolution of double precision
    // because the unstable mode amplifies slope errors like e^ell.
    double lo = 1e-4, hi = 10.0;
    if (classify(lo, n, step) != -1 || classify(hi, n, step) != 1)
        throw std::runtime_error("solve_profile: no shooting slope in [1e-4, 10] separates the regimes");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        int c = classify(mid, n, step);
        if (c == 0) {
            lo = hi = mid;
            break;
        }
        (c > 0 ? hi : lo) = mid;
    }
    if (hi - lo > tol * hi) throw std::runtime_error("solve_profile: slope bracket did not converge");

    VortexProfile p;
    p.slope_a = 0.5 * (lo + hi);
    p.ode_tol = tol;
    p.step = step;
    p.knots.resize(n + 1);
    p.rho.resize(n + 1);
    p.drho.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) p.knots[i] = profile_ell0 + static_cast<double>(i) * step;

    // The outward shot is trusted up to ell = 8; beyond that the profile is
    // integrated inward from the asymptotic tail, which is the stable
    // direction for the decaying mode, and the tail amplitude is matched to
    // the outward value at the join.
    auto join = static_cast<std::size_t>(std::llround((8.0 - profile_ell0) / step));
    State y = core_start(p.slope_a);
    p.rho[0] = y.rho;
    p.drho[0] = y.drho;
    for (std::size_t i = 0; i < join; ++i) {
        y = advance(p.knots[i], y, step);
        p.rho[i + 1] = y.rho;
        p.drho[i + 1] = y.drho;
    }
    double target = 1.0 - p.rho[join];

    auto inward = [&](double c0, bool store) {
        State s = tail_series(c0, p.knots[n]);
        if (store) {
            p.rho[n] = 1.0 - s.rho;
            p.drho[n] = -s.drho;
        }
        for (std::size_t i = n; i > join; --i) {
            s = advance(p.knots[i], s, -step, tail_rhs);
            if (store && i - 1 > join) {
                p.rho[i - 1] = 1.0 - s.rho;
                p.drho[i - 1] = -s.drho;
            }
        }
        return s.rho - target;
    };
    double x0 = target * std::sqrt(p.knots[join]) * std::exp(p.knots[join]);
    double x1 = 1.01 * x0;
    double f0 = inward(x0, false), f1 = inward(x1, false);
    for (int it = 0; it < 30 && f1 != 0.0 && f1 != f0; ++it) {
        double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = inward(x1, false);
        if (std::abs(f1) <= 1e-18) break;
    }
    inward(x1, true);

    double sum = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        double l = p.knots[i];
        if (l < 8.0 || l > 14.0) continue;
        sum += std::log((1.0 - p.rho[i]) * std::sqrt(l)) + l;
        ++cnt;
    }
    p.tail_c0 = std::exp(sum / cnt);

    for (std::size_t i = 0; i <= n; ++i) {
        if (!(p.rho[i] > 0.0 && p.rho[i] < 1.0 && p.drho[i] > 0.0))
            throw std::runtime_error("solve_profile: profile is not monotone in (0, 1)");
    }
    if (1.0 - p.rho[n] > 1e-5) throw std::runtime_error("solve_profile: profile did not reach 1");
    return p;
}

std::pair<double, double> eval_profile(const VortexProfile& p, double ell) {
    if (ell < p.knots.front()) return {p.slope_a * ell, p.slope_a};
    if (ell > p.knots.back()) {
        double eta = p.tail_c0 * std::exp(-ell) / std::sqrt(ell);
        return {1.0 - eta, eta * (1.0 + 0.5 / ell)};
    }
    std::size_t last = p.knots.size() - 1;
    auto k = static_cast<std::size_t>(std::clamp((ell - p.knots[0]) / p.step, 0.0, static_cast<double>(last)));
    if (k < last && ell >= p.knots[k + 1]) ++k;
    if (k > 0 && ell < p.knots[k]) --k;
    if (ell == p.knots[k] || k == last) return {p.rho[k], p.drho[k]};
    double dx = p.knots[k + 1] - p.knots[k];
    double t = (ell - p.knots[k]) / dx;
    double d = 0.0;
    double r = hermite(t, dx, p.rho[k], p.drho[k], p.rho[k + 1], p.drho[k + 1], &d);
    return {r, d};
}

ProfileIntegrals profile_integrals(const VortexProfile& p, double upper) {
    auto simpson = [&](double a, double b) {
        auto [ra, da] = eval_profile(p, a);
        auto [rm, dm] = eval_profile(p, 0.5 * (a + b));
        auto [rb, db] = eval_profile(p, b);
        auto fa = integrands(ra, da), fm = integrands(rm, dm), fb = integrands(rb, db);
        double w = (b - a) / 6.0;
        return std::array<double, 2>{w * (fa[0] + 4.0 * fm[0] + fb[0]), w * (fa[1] + 4.0 * fm[1] + fb[1])};
    };
    ProfileIntegrals out;
    double end = std::min(upper, p.knots.back());
    auto add = [&](double a, double b) {
        if (b <= a) return;
        auto s = simpson(a, b);
        out.i1 += s[0];
        out.i2 += s[1];
    };
    add(0.0, std::min(end, p.knots.front()));
    for (std::size_t k = 0; k + 1 < p.knots.size() && p.knots[k] < end; ++k)
        add(p.knots[k], std::min(p.knots[k + 1], end));
    if (upper > p.knots.back()) {
        // Closed-form antiderivatives in t = rho^2, evaluated from the last knot to rho = 1.
        double t = p.rho.back() * p.rho.back();
        auto g1 = [](double s) { return -0.5 / (1.0 + s); };
        auto g2 = [](double s) { return 0.5 * (1.0 / (1.0 + s) - 1.0 / ((1.0 + s) * (1.0 + s))); };
        if (std::isinf(upper)) {
            out.i1 += g1(1.0) - g1(t);
            out.i2 += g2(1.0) - g2(t);
        } else {
            double r = eval_profile(p, upper).first;
            out.i1 += g1(r * r) - g1(t);
            out.i2 += g2(r * r) - g2(t);
        }
    }
    return out;
}

double profile_ode_residual(const VortexProfile& p, std::size_t i) {
    if (i < 2 || i + 2 >= p.knots.size()) throw std::runtime_error("profile_ode_residual: not an interior knot");
    double h = p.knots[i + 1] - p.knots[i];
    double d2 = (-p.drho[i + 2] + 8.0 * p.drho[i + 1] - 8.0 * p.drho[i - 1] + p.drho[i - 2]) / (12.0 * h);
    return d2 - profile_rhs(p.knots[i], p.rho[i], p.drho[i]);
}

double profile_tail_slope(const VortexProfile& p, double lo, double hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < p.knots.size(); ++i) {
        double l = p.knots[i];
        if (l < lo || l > hi) continue;
        double yv = std::log(1.0 - p.rho[i]) + 0.5 * std::log(l);
        sx += l;
        sy += yv;
        sxx += l * l;
        sxy += l * yv;
        ++m;
    }
    if (m < 2) throw std::runtime_error("profile_tail_slope: no knots in the fit window");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace vortex
