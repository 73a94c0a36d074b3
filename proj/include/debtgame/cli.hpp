#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "debtgame/equilibrium.hpp"

namespace debtgame {

enum class Spacing { Linear, Log, GeometricToBoundary };

Spacing parse_spacing(const std::string& name);
const char* to_string(Spacing spacing);

/// Grid over one parameter.  Either explicit values or lo/hi/n/spacing.
struct SweepSpec {
    std::string vary = "lambda";
    std::vector<double> values;
    std::optional<double> lo;
    std::optional<double> hi;
    int n = 0;
    Spacing spacing = Spacing::Linear;
    /// Subset of a_star, b_star, a_bar, b0, qtilde, residuals; empty means all.
    std::vector<std::string> outputs;

    /// Grid values in order.  Geometric-to-boundary clusters points toward
    /// the lambda regime boundary B: B - (B - lo) ((B - hi)/(B - lo))^(i/(n-1)).
    std::vector<double> grid(const RawParams& base) const;
    /// Output columns between the varied parameter and status.
    std::vector<std::string> columns() const;
};

struct AppConfig {
    RawParams params;
    QuadratureSettings quadrature;
    SimConfig simulation;
    std::vector<double> epsilons{-0.10, -0.05, 0.05, 0.10};
    std::optional<SweepSpec> sweep;
};

/// Malformed JSON raises Error(Io); unknown keys, missing parameters and
/// wrong types raise Error(Config).
AppConfig parse_config(const std::string& text);
AppConfig load_config(const std::string& path);

/// Command-line values that replace config entries when present.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> paths;
    std::optional<double> dt;
    std::optional<std::string> vary;
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<int> n;
    std::optional<std::string> spacing;
};

void apply_overrides(AppConfig& config, const Overrides& overrides);

struct SweepRow {
    double value = 0.0;
    std::string status;
    std::optional<double> a_star;
    std::optional<double> b_star;
    std::optional<double> a_bar;
    std::optional<double> b0;
    std::optional<double> qtilde;
    std::optional<double> F_resid;
    std::optional<double> G_resid;
};

/// Rows in grid order; failures land in the status column.
std::vector<SweepRow> run_sweep(const AppConfig& config, int threads = 0);
void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// Round-trip scientific notation; empty for a missing value.
std::string format_number(std::optional<double> value);

/// 0 ok, 1 I/O or parse, 2 validation, 3 solver, 4 verification.
int exit_code(ErrorKind kind);

int cmd_check(const AppConfig& config, std::ostream& out, std::ostream& err);
int cmd_roots(const AppConfig& config, std::ostream& out, std::ostream& err);
int cmd_nash(const AppConfig& config, std::ostream& out, std::ostream& err);
/// Writes to out_path, or to `out` when the path is empty.
int cmd_sweep(const AppConfig& config, const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_simulate(const AppConfig& config, std::ostream& out, std::ostream& err);
int cmd_deviation(const AppConfig& config, std::ostream& out, std::ostream& err);

}  // namespace debtgame
