#include "vortex/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vortex {

namespace {

// Poles of the quintic B-spline interpolation filter.
constexpr double pole1 = -0.430575347099973791851434783493520;
constexpr double pole2 = -0.043096288203264653822712376822550;

int mirror(int k, int n) {
    if (n == 1) return 0;
    int period = 2 * n - 2;
    k %= period;
    if (k < 0) k += period;
    return k < n ? k : period - k;
}

// In-place conversion of samples to interpolating coefficients along a line
// with stride, whole-sample mirror boundary.
void prefilter(cplx* c, int n, std::ptrdiff_t stride) {
    if (n < 2) return;
    auto at = [&](int k) -> cplx& { return c[k * stride]; };
    double gain = 1.0;
    for (double z : {pole1, pole2}) gain *= (1.0 - z) * (1.0 - 1.0 / z);
    for (int k = 0; k < n; ++k) at(k) *= gain;
    for (double z : {pole1, pole2}) {
        int horizon = static_cast<int>(std::ceil(std::log(1e-16) / std::log(std::abs(z))));
        cplx sum = at(0);
        if (horizon < n) {
            double zn = z;
            for (int k = 1; k < horizon; ++k) {
                sum += zn * at(k);
                zn *= z;
            }
        } else {
            double zn = z, iz = 1.0 / z, z2n = std::pow(z, n - 1);
            sum = at(0) + z2n * at(n - 1);
            z2n *= z2n * iz;
            for (int k = 1; k + 1 < n; ++k) {
                sum += (zn + z2n) * at(k);
                zn *= z;
                z2n *= iz;
            }
            sum /= 1.0 - zn * zn;
        }
        at(0) = sum;
        for (int k = 1; k < n; ++k) at(k) += z * at(k - 1);
        at(n - 1) = (z / (z * z - 1.0)) * (z * at(n - 2) + at(n - 1));
        for (int k = n - 2; k >= 0; --k) at(k) = z * (at(k + 1) - at(k));
    }
}

} // namespace

std::array<double, 6> quintic_weights(double t) {
    double w = t - std::floor(t);
    std::array<double, 6> out{};
    double w2 = w * w;
    out[5] = (1.0 / 120.0) * w * w2 * w2;
    w2 -= w;
    double w4 = w2 * w2;
    w -= 0.5;
    double q = w2 * (w2 - 3.0);
    out[0] = (1.0 / 24.0) * (1.0 / 5.0 + w2 + w4) - out[5];
    double t0 = (1.0 / 24.0) * (w2 * (w2 - 5.0) + 46.0 / 5.0);
    double t1 = (-1.0 / 12.0) * w * (q + 4.0);
    out[2] = t0 + t1;
    out[3] = t0 - t1;
    t0 = (1.0 / 16.0) * (9.0 / 5.0 - q);
    t1 = (1.0 / 24.0) * w * (w4 - w2 - 5.0);
    out[1] = t0 + t1;
    out[4] = t0 - t1;
    return out;
}

QuinticSpline::QuinticSpline(const ComplexField& f)
    : na_(2 * f.spec.n1 - 1), nb_(2 * f.spec.n2 - 1), h1_(f.spec.h1), h2_(f.spec.h2), l1_(f.spec.l1),
      l2_(f.spec.l2), coef_(static_cast<std::size_t>(na_) * nb_) {
    const GridSpec& g = f.spec;
    for (int a = 0; a < na_; ++a) {
        for (int b = 0; b < nb_; ++b) {
            int i = std::abs(a - (g.n1 - 1)), j = b - (g.n2 - 1);
            cplx v = f(i, std::abs(j));
            coef_[static_cast<std::size_t>(a) * nb_ + b] = j < 0 ? std::conj(v) : v;
        }
    }
    for (int a = 0; a < na_; ++a) prefilter(&coef_[static_cast<std::size_t>(a) * nb_], nb_, 1);
    for (int b = 0; b < nb_; ++b) prefilter(&coef_[b], na_, nb_);
}

cplx QuinticSpline::operator()(double x1, double x2) const {
    const double slack = 1e-9;
    if (!(std::abs(x1) <= l1_ * (1.0 + slack) && std::abs(x2) <= l2_ * (1.0 + slack)))
        throw std::runtime_error("spline evaluation outside the domain");
    double ta = x1 / h1_ + (na_ - 1) / 2, tb = x2 / h2_ + (nb_ - 1) / 2;
    int ia = static_cast<int>(std::floor(ta)) - 2, ib = static_cast<int>(std::floor(tb)) - 2;
    std::array<double, 6> wa = quintic_weights(ta), wb = quintic_weights(tb);
    cplx acc = 0.0;
    for (int p = 0; p < 6; ++p) {
        const cplx* row = &coef_[static_cast<std::size_t>(mirror(ia + p, na_)) * nb_];
        cplx line = 0.0;
        for (int q = 0; q < 6; ++q) line += wb[q] * row[mirror(ib + q, nb_)];
        acc += wa[p] * line;
    }
    return acc;
}

Unscaled::Unscaled(const ComplexField& u, const ModelParams& params)
    : spline_(u), params_(params), ring_(u.spec.symmetry == Symmetry::ring) {
    if (!(std::abs(params.c) < 1.0)) throw std::runtime_error("unscale needs |c| < 1");
    stretch_ = 1.0 / std::sqrt(1.0 - params.c * params.c);
}

Unscaled unscale(const ComplexField& u, const ModelParams& params) { return Unscaled(u, params); }

ComplexField richardson(const ComplexField& coarse, const ComplexField& fine) {
    const GridSpec &gc = coarse.spec, &gf = fine.spec;
    bool nested = gf.n1 == 2 * gc.n1 - 1 && gf.n2 == 2 * gc.n2 - 1 && gf.symmetry == gc.symmetry
                  && std::abs(2.0 * gf.h1 - gc.h1) <= 1e-12 * gc.h1 && std::abs(2.0 * gf.h2 - gc.h2) <= 1e-12 * gc.h2;
    if (!nested) throw std::runtime_error("richardson: fine grid is not a halving of the coarse grid");
    ComplexField out(gc);
    for (int i = 0; i < gc.n1; ++i)
        for (int j = 0; j < gc.n2; ++j) out(i, j) = (4.0 * fine(2 * i, 2 * j) - coarse(i, j)) / 3.0;
    return out;
}

SpacetimeSample spacetime_field(const Unscaled& U, double t, double tau, const std::array<double, 3>& s) {
    const ModelParams& p = U.params();
    double shift = p.c * tau + p.omega * t;
    cplx base = U.ring() ? U(std::hypot(s[0], s[1]), s[2] - shift) : U(s[0], s[1] - shift);
    SpacetimeSample out;
    out.t = t;
    out.tau = tau;
    out.s = s;
    out.psi = base * std::polar(1.0, tau);
    out.m = unproject(out.psi);
    return out;
}

namespace {

struct BlockLayout {
    int dim = 2;
    std::array<int, 3> ns{1, 1, 1}; // points per spatial direction
    std::array<long, 3> stride{};
    std::array<double, 3> origin{};
    std::vector<double> ts, taus;

    BlockLayout(const Unscaled& U, const SampleBlock& b) : dim(U.ring() ? 3 : 2) {
        if (b.nt < 1 || b.ntau < 1 || !(b.ds > 0.0)) throw std::runtime_error("invalid sample block");
        double h = U.h() * (1.0 + 1e-12);
        if (b.ds > h || (b.nt > 1 && b.dt > h) || (b.ntau > 1 && b.dtau > h))
            throw std::runtime_error("sample spacing exceeds the grid step of the field");
        const ModelParams& p = U.params();
        double shift = p.c * b.tau0 + p.omega * b.t0;
        for (int k = 0; k < dim; ++k) {
            int half = std::max(1, static_cast<int>(std::lround(b.half_width[k] / b.ds)));
            ns[k] = 2 * half + 1;
            origin[k] = b.center[k] - half * b.ds;
        }
        origin[dim - 1] += shift;
        stride[dim - 1] = 1;
        for (int c = dim - 2; c >= 0; --c) stride[c] = stride[c + 1] * ns[c + 1];
        for (int k = 0; k < b.nt; ++k) ts.push_back(b.t0 + (k - (b.nt - 1) / 2.0) * b.dt);
        for (int k = 0; k < b.ntau; ++k) taus.push_back(b.tau0 + (k - (b.ntau - 1) / 2.0) * b.dtau);
    }

    long spatial() const { return stride[0] * ns[0]; }

    std::array<double, 3> point(long k, double ds) const {
        std::array<double, 3> s{};
        for (int c = dim - 1; c >= 0; --c) {
            s[c] = origin[c] + (k % ns[c]) * ds;
            k /= ns[c];
        }
        return s;
    }

    bool interior(long k) const {
        for (int c = dim - 1; c >= 0; --c) {
            long idx = k % ns[c];
            k /= ns[c];
            if (idx == 0 || idx == ns[c] - 1) return false;
        }
        return true;
    }
};

using Vec3 = std::array<double, 3>;

Vec3 as_vec(const SpherePoint& m) { return {m.m1, m.m2, m.m3}; }

} // namespace

std::vector<SpacetimeSample> sample_block(const Unscaled& U, const SampleBlock& block) {
    BlockLayout lay(U, block);
    std::vector<SpacetimeSample> out;
    out.reserve(lay.ts.size() * lay.taus.size() * lay.spatial());
    for (double t : lay.ts)
        for (double tau : lay.taus)
            for (long k = 0; k < lay.spatial(); ++k) out.push_back(spacetime_field(U, t, tau, lay.point(k, block.ds)));
    return out;
}

ResidualNorms pde_residual(const Unscaled& U, const SampleBlock& block) {
    BlockLayout lay(U, block);
    const ModelParams& p = U.params();
    bool schroedinger = is_schroedinger(p.regime);
    if (block.ntau < 3) throw std::runtime_error("residual needs at least three tau slices");
    if (schroedinger && block.nt < 3) throw std::runtime_error("Schroedinger residual needs at least three t slices");

    long nsp = lay.spatial();
    int nt = block.nt, ntau = block.ntau;
    std::vector<Vec3> m(static_cast<std::size_t>(nt) * ntau * nsp);
    auto at = [&](int a, int b, long k) -> Vec3& { return m[(static_cast<std::size_t>(a) * ntau + b) * nsp + k]; };
    for (int a = 0; a < nt; ++a)
        for (int b = 0; b < ntau; ++b)
            for (long k = 0; k < nsp; ++k)
                at(a, b, k) = as_vec(spacetime_field(U, lay.ts[a], lay.taus[b], lay.point(k, block.ds)).m);


    double core = 2.0 * U.h();
    ResidualNorms out;
    double acc = 0.0;
    int a_lo = nt == 1 ? 0 : 1, a_hi = nt == 1 ? 1 : nt - 1;
    for (int a = a_lo; a < a_hi; ++a) {
        for (int b = 1; b + 1 < ntau; ++b) {
            double shift = p.c * lay.taus[b] + p.omega * lay.ts[a];
            for (long k = 0; k < nsp; ++k) {
                if (!lay.interior(k)) continue;
                std::array<double, 3> s = lay.point(k, block.ds);
                double dist = lay.dim == 3 ? std::hypot(std::hypot(s[0], s[1]) - p.d, s[2] - shift)
                                           : std::min(std::hypot(s[0] - p.d, s[1] - shift),
                                                      std::hypot(s[0] + p.d, s[1] - shift));
                if (dist < core) continue;

                const Vec3& mc = at(a, b, k);
                Vec3 box{}, mtau{}, mt{};
                double dm2 = 0.0;
                for (int e = 0; e < 3; ++e) {
                    double tp = at(a, b + 1, k)[e], tm = at(a, b - 1, k)[e];
                    mtau[e] = (tp - tm) / (2.0 * block.dtau);
                    box[e] = (tp - 2.0 * mc[e] + tm) / (block.dtau * block.dtau);
                    if (schroedinger) mt[e] = (at(a + 1, b, k)[e] - at(a - 1, b, k)[e]) / (2.0 * block.dt);
                }
                dm2 += mtau[0] * mtau[0] + mtau[1] * mtau[1] + mtau[2] * mtau[2];
                for (int c = 0; c < lay.dim; ++c) {
                    const Vec3& sp = at(a, b, k + lay.stride[c]);
                    const Vec3& sm = at(a, b, k - lay.stride[c]);
                    for (int e = 0; e < 3; ++e) {
                        double d1 = (sp[e] - sm[e]) / (2.0 * block.ds);
                        box[e] -= (sp[e] - 2.0 * mc[e] + sm[e]) / (block.ds * block.ds);
                        dm2 -= d1 * d1;
                    }
                }
                Vec3 f{};
                for (int e = 0; e < 3; ++e) f[e] = box[e] + dm2 * mc[e];
                Vec3 r = f;
                if (schroedinger) {
                    Vec3 cross{mc[1] * f[2] - mc[2] * f[1], mc[2] * f[0] - mc[0] * f[2], mc[0] * f[1] - mc[1] * f[0]};
                    for (int e = 0; e < 3; ++e) r[e] = mt[e] - schroedinger_sigma * cross[e];
                }
                double n2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
                acc += n2;
                out.sup = std::max(out.sup, std::sqrt(n2));
                ++out.points;
            }
        }
    }
    if (out.points == 0) throw std::runtime_error("sample block has no interior points");
    out.rms = std::sqrt(acc / out.points);
    return out;
}

} // namespace vortex
