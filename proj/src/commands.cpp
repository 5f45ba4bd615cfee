#include "vortex/commands.hpp"

#include "vortex/ansatz.hpp"
#include "vortex/diagnostics.hpp"
#include "vortex/operators.hpp"
#include "vortex/profile.hpp"
#include "vortex/reduction.hpp"
#include "vortex/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace vortex {

namespace {

const double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.output + "': " + ec.message());
    return (std::filesystem::path(cfg.output) / name).string();
}

std::string lower_name(Regime r) {
    std::string s = regime_name(r);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return s;
}

VortexProfile config_profile(const RunConfig& cfg) {
    return solve_profile(cfg.ell_max, cfg.step, cfg.tol);
}

void report_grid(Report& r, const GridSpec& g) {
    r.section("grid");
    r.add("symmetry", std::string(g.symmetry == Symmetry::ring ? "ring" : "pair"));
    r.add("n1", g.n1);
    r.add("n2", g.n2);
    r.add("h1", g.h1);
    r.add("h2", g.h2);
    r.add("l1", g.l1);
    r.add("l2", g.l2);
}

void report_solver_options(Report& r, const SolverOptions& o) {
    r.section("solver_options");
    r.add("newton_max", o.newton_max);
    r.add("newton_tol", o.newton_tol);
    r.add("krylov_tol", o.krylov_tol);
    r.add("krylov_restart", o.krylov_restart);
    r.add("krylov_max", o.krylov_max);
}

void report_error_field(Report& r, const ErrorField& e) {
    r.section("ansatz_error");
    r.add("weight_rho", weight_rho);
    r.add("norm_star2", e.norm_star2);
    r.add("inner", e.inner);
    r.add("outer_re", e.outer_re);
    r.add("outer_im", e.outer_im);
}

void report_solve(Report& r, const SolveResult& s) {
    r.section("solve");
    r.add("d", s.d_used);
    r.add("c_mult", s.c_mult);
    r.add("newton_iters", s.newton_iters);
    r.add("final_residual", s.final_residual);
    r.add("krylov_iters", s.krylov_iters);
    r.add("factorizations", s.factorizations);
    r.add("corrector_norm_star", s.corrector_norm_star);
    for (std::size_t k = 0; k < s.residual_history.size(); ++k)
        r.add("residual_" + std::to_string(k), s.residual_history[k]);
}

// Images of the quarter-plane vortices under both reflections; each
// reflection flips the charge.
std::vector<Vortex> full_plane(const std::vector<Vortex>& quarter) {
    std::vector<Vortex> out;
    auto seen = [&](const Point& p) {
        return std::any_of(out.begin(), out.end(), [&](const Vortex& v) {
            return std::abs(v.position[0] - p[0]) < 1e-9 && std::abs(v.position[1] - p[1]) < 1e-9;
        });
    };
    for (const Vortex& v : quarter) {
        for (int s1 : {1, -1}) {
            for (int s2 : {1, -1}) {
                Point p{s1 * v.position[0], s2 * v.position[1]};
                if (seen(p)) continue;
                out.push_back({p, v.charge * s1 * s2});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Vortex& a, const Vortex& b) {
        if (a.position[0] != b.position[0]) return a.position[0] > b.position[0];
        return a.position[1] > b.position[1];
    });
    return out;
}

std::string charge_list(const std::vector<Vortex>& vs) {
    std::vector<int> q;
    for (const Vortex& v : vs) q.push_back(v.charge);
    std::sort(q.rbegin(), q.rend());
    std::ostringstream s;
    for (std::size_t k = 0; k < q.size(); ++k) s << (k ? ", " : "") << (q[k] > 0 ? "+" : "") << q[k];
    return s.str();
}

void report_diagnostics(Report& r, const DiagnosticsReport& d) {
    r.section("diagnostics");
    r.add("energy", d.energy);
    r.add("charge", d.charge);
    r.add("bogomolny_margin", d.bogomolny_margin);
    r.add("total_winding", d.total_winding);
    r.add("quarter_vortex_count", static_cast<int>(d.vortices.size()));
    for (std::size_t k = 0; k < d.vortices.size(); ++k) {
        const Vortex& v = d.vortices[k];
        r.add("quarter_vortex_" + std::to_string(k),
              format_double(v.position[0]) + ", " + format_double(v.position[1]) + ", " + std::to_string(v.charge));
    }
    auto full = full_plane(d.vortices);
    r.add("full_vortex_count", static_cast<int>(full.size()));
    r.add("windings", charge_list(full));
    for (const auto& [k, v] : d.residuals) r.add("residual_" + k, v);
    for (const auto& [k, v] : d.weighted_norms) r.add("corrector_" + k, v);
}

void finish_report(const RunConfig& cfg, const std::string& name, const Report& r) {
    write_text(out_path(cfg, name + "_report.txt"), r.str());
}

} // namespace

SampleBlock default_block(const ModelParams& params, double spacing) {
    SampleBlock b;
    b.nt = is_schroedinger(params.regime) ? 3 : 1;
    b.ntau = 3;
    b.dt = b.dtau = b.ds = spacing;
    b.center = {params.d, 0.0, 0.0};
    b.half_width = is_ring(params.regime) ? std::array<double, 3>{2.0, 0.0, 2.0}
                                          : std::array<double, 3>{2.0, 2.0, 0.0};
    return b;
}

Report run_profile(const RunConfig& cfg, int stride) {
    if (stride < 1) throw ConfigError("profile: stride must be positive");
    Report r;
    r.section("profile_settings");
    r.add("ell_max", cfg.ell_max);
    r.add("step", cfg.step);
    r.add("tol", cfg.tol);
    VortexProfile p = config_profile(cfg);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < p.knots.size(); k += static_cast<std::size_t>(stride)) {
        auto in = profile_integrals(p, p.knots[k]);
        rows.push_back({p.knots[k], p.rho[k], p.drho[k], in.i1, in.i2});
    }
    auto total = profile_integrals(p);
    rows.push_back({std::numeric_limits<double>::infinity(), 1.0, 0.0, total.i1, total.i2});
    write_csv(out_path(cfg, "profile.csv"), {"ell", "rho", "drho", "i1_cum", "i2_cum"}, rows);

    double max_res = 0.0;
    for (std::size_t k = 2; k + 2 < p.knots.size(); ++k)
        max_res = std::max(max_res, std::abs(profile_ode_residual(p, k)));
    r.section("profile");
    r.add("knots", static_cast<long>(p.knots.size()));
    r.add("slope_a", p.slope_a);
    r.add("tail_c0", p.tail_c0);
    r.add("ode_residual_max", max_res);
    r.add("tail_slope", profile_tail_slope(p));
    r.add("i1", total.i1);
    r.add("i2", total.i2);
    r.add("i1_error", total.i1 - 0.25);
    r.add("i2_error", total.i2 - 0.125);
    finish_report(cfg, "profile", r);
    return r;
}

Report run_solve(const RunConfig& cfg, const SolveFlags& flags) {
    ModelParams params = config_params(cfg);
    SolverOptions opts = config_solver(cfg);
    OpTag tag = default_tag(params.regime);
    std::string name = lower_name(params.regime);
    Report r;
    report_config(r, cfg, params);
    report_solver_options(r, opts);
    VortexProfile profile = config_profile(cfg);

    if (flags.balance && !flags.ansatz_only) {
        double d_lo = cfg.d_bracket ? (*cfg.d_bracket)[0] : 0.5 * params.d;
        double d_hi = cfg.d_bracket ? (*cfg.d_bracket)[1] : 2.0 * params.d;
        GridSpec grid = (cfg.l1 > 0.0 || cfg.l2 > 0.0) ? config_grid(cfg, with_d(params, d_hi))
                                                       : balanced_grid(params, d_hi, cfg.h1);
        report_grid(r, grid);
        r.section("balance");
        r.add("d_lo", d_lo);
        r.add("d_hi", d_hi);
        try {
            r.add("d_predicted", predict_d(params));
        } catch (const std::runtime_error&) {
            r.add("d_predicted", std::string("none"));
        }
        BalancedResult b;
        try {
            b = solve_balanced(params, d_lo, d_hi, grid, profile, opts);
        } catch (const std::exception& e) {
            r.add("failure", std::string(e.what()));
            finish_report(cfg, name, r);
            throw;
        }
        r.add("d_star", b.d_star);
        r.add("d_hat_star", b.d_star * params.eps);
        for (std::size_t k = 0; k < b.samples.size(); ++k)
            r.add("sample_" + std::to_string(k),
                  format_double(b.samples[k].d) + ", " + format_double(b.samples[k].c_mult));
        ModelParams star = with_d(params, b.d_star);
        std::unique_ptr<RingPhaseSolver> ring;
        if (is_ring(params.regime)) ring = std::make_unique<RingPhaseSolver>(grid);
        ComplexField V = build_ansatz(star, grid, profile, ring.get());
        report_solve(r, b.result);
        report_diagnostics(r, diagnose(b.result.u, star, tag, &V));
        save_field(V, out_path(cfg, name + "_ansatz.vsf"));
        save_field(b.result.u, out_path(cfg, name + "_solution.vsf"));
        finish_report(cfg, name, r);
        return r;
    }

    GridSpec grid = config_grid(cfg, params);
    report_grid(r, grid);
    std::unique_ptr<RingPhaseSolver> ring;
    if (is_ring(params.regime)) ring = std::make_unique<RingPhaseSolver>(grid);
    ComplexField V = build_ansatz(params, grid, profile, ring.get());
    save_field(V, out_path(cfg, name + "_ansatz.vsf"));
    report_error_field(r, error_field(V, tag, params));
    if (flags.ansatz_only) {
        report_diagnostics(r, diagnose(V, params, tag));
        finish_report(cfg, name, r);
        return r;
    }
    ComplexField Z = kernel_Zd(params, profile, V, ring.get());
    SolveResult s;
    try {
        s = solve_projected(params, V, Z, tag, opts);
    } catch (const std::exception& e) {
        r.section("solve");
        r.add("failure", std::string(e.what()));
        finish_report(cfg, name, r);
        throw;
    }
    report_solve(r, s);
    report_diagnostics(r, diagnose(s.u, params, tag, &V));
    save_field(s.u, out_path(cfg, name + "_solution.vsf"));
    finish_report(cfg, name, r);
    return r;
}

Report run_reduce(const RunConfig& cfg, int points) {
    if (points < 2) throw ConfigError("reduce: at least two sample points are needed");
    ModelParams params = config_params(cfg);
    SolverOptions opts = config_solver(cfg);
    Report r;
    report_config(r, cfg, params);
    report_solver_options(r, opts);
    double predicted = nan_value;
    try {
        predicted = predict_d(params);
    } catch (const std::runtime_error& e) {
        if (!cfg.d_bracket) throw ConfigError(std::string("reduce: ") + e.what() + "; give d_bracket");
    }
    double d_lo = cfg.d_bracket ? (*cfg.d_bracket)[0] : std::max(0.5 * predicted, 2.0);
    double d_hi = cfg.d_bracket ? (*cfg.d_bracket)[1] : 2.0 * predicted;
    std::vector<double> ds;
    for (int k = 0; k < points; ++k) ds.push_back(d_lo * std::pow(d_hi / d_lo, k / double(points - 1)));
    VortexProfile profile = config_profile(cfg);
    ReducedCurve curve = numeric_c_curve(params, ds, cfg.h1, profile, opts);

    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < ds.size(); ++k) rows.push_back({ds[k], curve.c_values[k], curve.c_leading[k]});
    write_csv(out_path(cfg, "reduce.csv"), {"d", "c_numeric", "c_leading"}, rows);

    r.section("reduce");
    r.add("h", cfg.h1);
    r.add("points", points);
    r.add("d_lo", d_lo);
    r.add("d_hi", d_hi);
    r.add("d_predicted", predicted);
    r.add("sign", curve.sign);
    r.add("d_ref", curve.d_ref);
    r.add("complete", curve.complete);
    if (!curve.complete) r.add("failure", curve.failure);
    auto roots = curve_roots(curve);
    r.add("root_count", static_cast<int>(roots.size()));
    for (std::size_t k = 0; k < roots.size(); ++k) r.add("root_" + std::to_string(k), roots[k]);
    if (roots.empty()) {
        r.add("d_star", std::string("none"));
        finish_report(cfg, "reduce", r);
        throw std::runtime_error("reduce: numeric c(d) has no sign change on the sampled range");
    }
    double best = roots.front();
    if (std::isfinite(predicted)) {
        best = *std::min_element(roots.begin(), roots.end(), [&](double a, double b) {
            return std::abs(a - predicted) < std::abs(b - predicted);
        });
    }
    r.add("d_star", best);
    r.add("d_star_relative_deviation", (best - predicted) / predicted);
    finish_report(cfg, "reduce", r);
    return r;
}

Report run_verify(const RunConfig& cfg, const std::string& field_path, const std::optional<std::string>& ansatz_path) {
    ModelParams params = config_params(cfg);
    ComplexField u = load_complex_field(field_path);
    std::optional<ComplexField> V;
    if (ansatz_path) V = load_complex_field(*ansatz_path);
    Report r;
    report_config(r, cfg, params);
    report_grid(r, u.spec);
    OpTag tag = default_tag(params.regime);
    check_tag(tag, u.spec.symmetry);
    report_diagnostics(r, diagnose(u, params, tag, V ? &*V : nullptr));
    finish_report(cfg, "verify", r);
    return r;
}

Report run_reconstruct(const RunConfig& cfg, const std::string& field_path, const ReconstructFlags& flags) {
    if (!(flags.spacing_fraction > 0.0 && flags.spacing_fraction <= 1.0) || flags.levels < 2)
        throw ConfigError("reconstruct: spacing fraction must lie in (0, 1] and levels be at least 2");
    ModelParams params = config_params(cfg);
    ComplexField u = load_complex_field(field_path);
    Report r;
    report_config(r, cfg, params);
    report_grid(r, u.spec);
    if (flags.fine_path) u = richardson(u, load_complex_field(*flags.fine_path));
    r.section("reconstruct");
    r.add("richardson", flags.fine_path.has_value());
    r.add("schroedinger_sigma", schroedinger_sigma);
    Unscaled U(u, params);
    double h = U.h();

    SampleBlock csv_block = default_block(params, flags.spacing_fraction * h);
    std::vector<std::vector<double>> rows;
    for (const SpacetimeSample& s : sample_block(U, csv_block))
        rows.push_back({s.t, s.tau, s.s[0], s.s[1], s.s[2], s.m.m1, s.m.m2, s.m.m3});
    write_csv(out_path(cfg, "samples.csv"), {"t", "tau", "s1", "s2", "s3", "m1", "m2", "m3"}, rows);
    r.add("csv_spacing", csv_block.ds);
    r.add("csv_samples", static_cast<long>(rows.size()));

    double prev = nan_value;
    for (int k = 0; k < flags.levels; ++k) {
        double spacing = h * std::ldexp(0.5, -k);
        ResidualNorms n = pde_residual(U, default_block(params, spacing));
        std::string key = "level_" + std::to_string(k);
        r.add(key + "_spacing", spacing);
        r.add(key + "_rms", n.rms);
        r.add(key + "_sup", n.sup);
        r.add(key + "_points", n.points);
        if (k > 0) r.add(key + "_order", std::log2(prev / n.rms));
        prev = n.rms;
    }
    finish_report(cfg, "reconstruct", r);
    return r;
}

Report run_sweep(const RunConfig& cfg, const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw ConfigError("sweep: empty eps list");
    ModelParams base = config_params(cfg);
    SolverOptions opts = config_solver(cfg);
    OpTag tag = default_tag(base.regime);
    Report r;
    report_config(r, cfg, base);
    report_solver_options(r, opts);
    VortexProfile profile = config_profile(cfg);

    std::vector<std::vector<double>> rows;
    std::string failure;
    for (double eps : eps_list) {
        RunConfig one = cfg;
        one.eps = eps;
        ModelParams p = config_params(one);
        GridSpec grid = config_grid(one, p);
        std::unique_ptr<RingPhaseSolver> ring;
        if (is_ring(p.regime)) ring = std::make_unique<RingPhaseSolver>(grid);
        ComplexField V = build_ansatz(p, grid, profile, ring.get());
        ErrorField e = error_field(V, tag, p);
        std::vector<double> row{eps, p.d, e.norm_star2, e.inner, e.outer_re, e.outer_im};
        try {
            SolveResult s = solve_projected(p, V, kernel_Zd(p, profile, V, ring.get()), tag, opts);
            row.insert(row.end(), {s.corrector_norm_star, double(s.newton_iters), s.final_residual, s.c_mult});
        } catch (const std::exception& ex) {
            if (failure.empty()) failure = "eps " + format_double(eps) + ": " + ex.what();
            row.insert(row.end(), {nan_value, nan_value, nan_value, nan_value});
        }
        rows.push_back(row);
    }
    write_csv(out_path(cfg, "sweep.csv"),
              {"eps", "d", "ansatz_norm", "ansatz_inner", "ansatz_outer_re", "ansatz_outer_im", "corrector_norm",
               "newton_iters", "final_residual", "c_mult"},
              rows);

    r.section("sweep");
    r.add("tag", tag_name(tag));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        std::string key = "eps_" + std::to_string(k);
        r.add(key, rows[k][0]);
        r.add(key + "_ansatz_norm", rows[k][2]);
        r.add(key + "_ansatz_inner", rows[k][3]);
        r.add(key + "_corrector_norm", rows[k][6]);
        r.add(key + "_newton_iters", rows[k][7]);
        r.add(key + "_final_residual", rows[k][8]);
        r.add(key + "_c_mult", rows[k][9]);
        if (k > 0) {
            r.add(key + "_ansatz_ratio", rows[k][2] / rows[k - 1][2]);
            r.add(key + "_corrector_ratio", rows[k][6] / rows[k - 1][6]);
        }
    }
    if (!failure.empty()) {
        r.add("failure", failure);
        finish_report(cfg, "sweep", r);
        throw std::runtime_error("sweep: " + failure);
    }
    finish_report(cfg, "sweep", r);
    return r;
}

} // namespace vortex
