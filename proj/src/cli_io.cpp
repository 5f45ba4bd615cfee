#include "vortex/cli_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace vortex {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
    return v;
}

template <class T>
void put_le(std::ostream& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(const std::vector<char>& buf, std::size_t& pos) {
    if (buf.size() - pos < sizeof(T)) throw IoError("field file: truncated header");
    unsigned char b[sizeof(T)];
    std::memcpy(b, buf.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    pos += sizeof(T);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

void write_header(std::ostream& out, std::uint32_t kind, const GridSpec& g) {
    out.write("VSF1", 4);
    put_le<std::uint32_t>(out, kind);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.symmetry));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n1));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.n2));
    put_le(out, g.h1);
    put_le(out, g.h2);
    put_le(out, g.l1);
    put_le(out, g.l2);
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters{
        {"regime", [&](auto&, auto& v) { cfg.regime = v; }},
        {"eps", [&](auto& k, auto& v) { cfg.eps = parse_number(k, v); }},
        {"kappa", [&](auto& k, auto& v) { cfg.kappa = parse_number(k, v); }},
        {"d_hat", [&](auto& k, auto& v) { cfg.d_hat = parse_number(k, v); }},
        {"d_bracket",
         [&](auto& k, auto& v) {
             auto comma = v.find(',');
             if (comma == std::string::npos) throw ConfigError("config: d_bracket expects 'lo, hi'");
             cfg.d_bracket = std::array<double, 2>{parse_number(k, trim(v.substr(0, comma))),
                                                   parse_number(k, trim(v.substr(comma + 1)))};
         }},
        {"l1", [&](auto& k, auto& v) { cfg.l1 = parse_number(k, v); }},
        {"l2", [&](auto& k, auto& v) { cfg.l2 = parse_number(k, v); }},
        {"h1", [&](auto& k, auto& v) { cfg.h1 = parse_number(k, v); }},
        {"h2", [&](auto& k, auto& v) { cfg.h2 = parse_number(k, v); }},
        {"ell_max", [&](auto& k, auto& v) { cfg.ell_max = parse_number(k, v); }},
        {"step", [&](auto& k, auto& v) { cfg.step = parse_number(k, v); }},
        {"tol", [&](auto& k, auto& v) { cfg.tol = parse_number(k, v); }},
        {"newton_max", [&](auto& k, auto& v) { cfg.newton_max = parse_int(k, v); }},
        {"newton_tol", [&](auto& k, auto& v) { cfg.newton_tol = parse_number(k, v); }},
        {"krylov_tol", [&](auto& k, auto& v) { cfg.krylov_tol = parse_number(k, v); }},
        {"output", [&](auto&, auto& v) { cfg.output = v; }},
    };
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError("config: key '" + key + "' given twice");
        if (value.empty()) throw ConfigError("config: key '" + key + "' has no value");
        it->second(key, value);
    }
    config_params(cfg);
    config_solver(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path + "'");
    return parse_config(in);
}

ModelParams config_params(const RunConfig& cfg) {
    try {
        ModelParams p = make_params(parse_regime(cfg.regime), cfg.eps, cfg.kappa, cfg.d_hat);
        if (cfg.d_bracket && !((*cfg.d_bracket)[0] > 1.0 && (*cfg.d_bracket)[1] > (*cfg.d_bracket)[0]))
            throw std::runtime_error("d_bracket must satisfy 1 < lo < hi");
        if (!(cfg.h1 > 0.0 && cfg.h1 <= 0.5 && cfg.h2 > 0.0 && cfg.h2 <= 0.5))
            throw std::runtime_error("grid spacings must lie in (0, 0.5]");
        if (cfg.l1 < 0.0 || cfg.l2 < 0.0) throw std::runtime_error("grid extents must be non-negative");
        if (!(cfg.ell_max > 8.0 && cfg.step > 0.0 && cfg.step <= 0.01 && cfg.tol > 0.0))
            throw std::runtime_error("profile settings out of range");
        return p;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

SolverOptions config_solver(const RunConfig& cfg) {
    if (cfg.newton_max < 1 || !(cfg.newton_tol > 0.0) || !(cfg.krylov_tol > 0.0 && cfg.krylov_tol < 1.0))
        throw ConfigError("config: solver settings out of range");
    SolverOptions o;
    o.newton_max = cfg.newton_max;
    o.newton_tol = cfg.newton_tol;
    o.krylov_tol = cfg.krylov_tol;
    return o;
}

GridSpec config_grid(const RunConfig& cfg, const ModelParams& params) {
    double l1 = cfg.l1 > 0.0 ? cfg.l1 : 2.0 * params.d;
    double l2 = cfg.l2 > 0.0 ? cfg.l2 : 2.0 * params.d;
    try {
        return make_grid(l1, l2, cfg.h1, cfg.h2, is_ring(params.regime) ? Symmetry::ring : Symmetry::pair);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void Report::section(const std::string& name) { sections_.push_back({name, {}}); }

void Report::add(const std::string& key, const std::string& value) {
    if (sections_.empty()) section("general");
    sections_.back().second.emplace_back(key, value);
}

void Report::add(const std::string& key, double value) { add(key, format_double(value)); }
void Report::add(const std::string& key, int value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, long value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

std::string Report::str() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& [name, entries] : sections_) {
        if (!first) out << '\n';
        first = false;
        out << '[' << name << "]\n";
        for (const auto& [k, v] : entries) out << k << ": " << v << '\n';
    }
    return out.str();
}

void report_config(Report& r, const RunConfig& cfg, const ModelParams& p) {
    r.section("input");
    r.add("regime", cfg.regime);
    r.add("eps", cfg.eps);
    r.add("kappa", cfg.kappa);
    r.add("d_hat", cfg.d_hat);
    if (cfg.d_bracket) r.add("d_bracket", format_double((*cfg.d_bracket)[0]) + ", " + format_double((*cfg.d_bracket)[1]));
    r.add("l1", cfg.l1);
    r.add("l2", cfg.l2);
    r.add("h1", cfg.h1);
    r.add("h2", cfg.h2);
    r.section("tolerances");
    r.add("profile_ell_max", cfg.ell_max);
    r.add("profile_step", cfg.step);
    r.add("profile_tol", cfg.tol);
    r.add("newton_max", cfg.newton_max);
    r.add("newton_tol", cfg.newton_tol);
    r.add("krylov_tol", cfg.krylov_tol);
    r.section("parameters");
    r.add("eps", p.eps);
    r.add("kappa", p.kappa);
    r.add("d", p.d);
    r.add("c", p.c);
    r.add("omega", p.omega);
    r.add("eps_factor", eps_factor(p));
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path, false);
    out << content;
    finish(out, path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out = open_out(path, false);
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
        out << '\n';
    }
    finish(out, path);
}

void save_field(const ComplexField& f, const std::string& path) {
    std::ofstream out = open_out(path, true);
    write_header(out, 1, f.spec);
    for (cplx v : f.data) {
        put_le(out, v.real());
        put_le(out, v.imag());
    }
    finish(out, path);
}

void save_field(const ScalarField& f, const std::string& path) {
    std::ofstream out = open_out(path, true);
    write_header(out, 0, f.spec);
    for (double v : f.data) put_le(out, v);
    finish(out, path);
}

AnyField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open field file '" + path + "'");
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 4 || std::memcmp(buf.data(), "VSF1", 4) != 0) throw IoError("field file: bad magic");
    std::size_t pos = 4;
    auto kind = get_le<std::uint32_t>(buf, pos);
    auto sym = get_le<std::uint32_t>(buf, pos);
    auto n1 = get_le<std::uint32_t>(buf, pos);
    auto n2 = get_le<std::uint32_t>(buf, pos);
    GridSpec g;
    g.h1 = get_le<double>(buf, pos);
    g.h2 = get_le<double>(buf, pos);
    g.l1 = get_le<double>(buf, pos);
    g.l2 = get_le<double>(buf, pos);
    if (kind > 1) throw IoError("field file: unknown kind " + std::to_string(kind));
    if (sym > 1) throw IoError("field file: unknown symmetry " + std::to_string(sym));
    const std::uint64_t max_points = std::uint64_t{1} << 30;
    if (n1 == 0 || n2 == 0 || n1 > 0x7fffffffu || n2 > 0x7fffffffu
        || std::uint64_t{n1} * std::uint64_t{n2} > max_points)
        throw IoError("field file: dimension overflow");
    if (!(g.h1 > 0.0 && g.h2 > 0.0 && std::isfinite(g.l1) && std::isfinite(g.l2)))
        throw IoError("field file: invalid grid spacing");
    g.symmetry = static_cast<Symmetry>(sym);
    g.n1 = static_cast<int>(n1);
    g.n2 = static_cast<int>(n2);
    std::uint64_t count = std::uint64_t{n1} * n2 * (kind == 1 ? 2 : 1);
    if ((buf.size() - pos) / sizeof(double) < count) throw IoError("field file: truncated payload");
    if (buf.size() - pos != count * sizeof(double)) throw IoError("field file: trailing bytes after payload");
    if (kind == 0) {
        ScalarField f(g);
        for (double& v : f.data) v = get_le<double>(buf, pos);
        return f;
    }
    ComplexField f(g);
    for (cplx& v : f.data) {
        double re = get_le<double>(buf, pos);
        double im = get_le<double>(buf, pos);
        v = {re, im};
    }
    return f;
}

ComplexField load_complex_field(const std::string& path) {
    AnyField f = load_field(path);
    if (auto* c = std::get_if<ComplexField>(&f)) return std::move(*c);
    throw IoError("field file '" + path + "' holds a scalar field, expected a complex one");
}

} // namespace vortex
