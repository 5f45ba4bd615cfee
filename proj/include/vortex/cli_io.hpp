#pragma once

#include "vortex/fields.hpp"
#include "vortex/params.hpp"
#include "vortex/solver.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace vortex {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string regime = "PAIR_WM";
    double eps = 0.05;
    double kappa = 0.0;
    double d_hat = 1.0;
    std::optional<std::array<double, 2>> d_bracket; // absolute half-separations
    double l1 = 0.0;                                 // 0 selects 2 d
    double l2 = 0.0;
    double h1 = 0.25;
    double h2 = 0.25;
    double ell_max = 30.0;
    double step = 1e-3;
    double tol = 1e-10;
    int newton_max = 50;
    double newton_tol = 1e-8;
    double krylov_tol = 1e-10;
    std::string output = ".";
};

// Flat "key = value" lines, '#' starts a comment. Unknown keys, malformed
// values and repeated keys throw ConfigError; the model parameters are
// validated as well.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

// ModelParams of the config; invalid values throw ConfigError.
ModelParams config_params(const RunConfig& cfg);
SolverOptions config_solver(const RunConfig& cfg);
// Grid of the config, with l = 2 d where the extent is left at 0.
GridSpec config_grid(const RunConfig& cfg, const ModelParams& params);

// Shortest round-trip decimal with 17 significant digits.
std::string format_double(double v);

// Flat "key: value" lines grouped under "[section]" headers, in insertion order.
class Report {
public:
    void section(const std::string& name);
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, double value);
    void add(const std::string& key, int value);
    void add(const std::string& key, long value);
    void add(const std::string& key, bool value);
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections_;
};

// Input echo and every derived parameter (c, omega, d).
void report_config(Report& r, const RunConfig& cfg, const ModelParams& params);

void write_text(const std::string& path, const std::string& content);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// VSF1 binary: magic, u32 kind (0 scalar, 1 complex), u32 symmetry, u32 n1,
// u32 n2, f64 h1, f64 h2, f64 l1, f64 l2, then the samples row-major over
// (x1, x2), all little-endian.
void save_field(const ComplexField& f, const std::string& path);
void save_field(const ScalarField& f, const std::string& path);

using AnyField = std::variant<ScalarField, ComplexField>;

// Throws IoError on a missing file, bad magic, truncated payload or
// implausible dimensions.
AnyField load_field(const std::string& path);
ComplexField load_complex_field(const std::string& path);

} // namespace vortex
