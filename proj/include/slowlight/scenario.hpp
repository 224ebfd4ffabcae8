#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowlight/background.hpp"
#include "slowlight/control_field.hpp"
#include "slowlight/model.hpp"

namespace slowlight {

struct GridSpec {
    std::optional<double> tau_min, tau_max, h;
    std::optional<std::size_t> n;
};

struct SimulateSpec {
    std::optional<double> zeta_min, zeta_max;
    std::size_t n_zeta = 201;
    std::optional<std::size_t> tau_stride;  ///< output every tau_stride-th grid node; default ~100 rows
};

struct VerifySpec {
    std::vector<double> h{1e-2, 5e-3, 2.5e-3};
    double half_zeta = 1.0;
    double half_tau = 1.0;
    std::optional<double> tau_center;  ///< default: 0, or just past the last field breakpoint (sampled: past the table)
    double min_order = 1.8;
    double max_residual = 1e-5;
    std::size_t points = 1000;
};

enum class SweepParameter { Alpha, Omega0, LambdaIm };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Alpha;
    std::vector<double> values;
};

struct ScenarioConfig {
    PhysicalParams physical;
    cplx lambda{0.0, -1.0};
    nlohmann::json field;  ///< validated field record, rebuilt per sweep value
    std::filesystem::path base_dir;
    GridSpec grid;
    SolveMethod method = SolveMethod::Picard;
    PicardOptions picard;
    SimulateSpec simulate;
    VerifySpec verify;
    std::optional<SweepSpec> sweep;
    std::size_t trajectory_stride = 1;
    std::uint64_t seed = 20061015;
    std::string output_dir = "out";
    nlohmann::json source;  ///< effective configuration (after overrides), hashed into every table

    ControlField make_field() const;
    SpectralPoint make_spectral() const;
    TauGrid make_grid(const ControlField& f, const SpectralPoint& s) const;
};

/// Parses and validates a configuration record. Relative file paths resolve against base_dir.
/// Throws ConfigError naming the offending entry.
ScenarioConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Re-validates after programmatic edits (tolerance, seed, sweep value).
ScenarioConfig with_overrides(const ScenarioConfig& cfg, std::optional<double> tol, std::optional<std::uint64_t> seed);

/// 64-bit FNV-1a of the canonical (sorted-key, compact) JSON dump.
std::uint64_t config_hash(const nlohmann::json& j);

BackgroundSolution solve_background(const ScenarioConfig& cfg);

struct Table {
    std::string name;  ///< file stem
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct RunResult {
    std::vector<Table> tables;
    bool verification_passed = true;
};

RunResult run_simulate(const ScenarioConfig& cfg);
RunResult run_trajectory(const ScenarioConfig& cfg);
RunResult run_stop(const ScenarioConfig& cfg);
RunResult run_verify(const ScenarioConfig& cfg);
RunResult run_sweep(const ScenarioConfig& cfg);

std::string format_number(double v);
/// CSV text: '#' metadata lines (command, config hash, seed, table meta), header row, data rows.
std::string render_table(const Table& t, const std::string& command, const ScenarioConfig& cfg);
/// Writes every table to dir/<name>.csv and returns the paths.
std::vector<std::filesystem::path> write_tables(const RunResult& r, const std::string& command,
                                                const ScenarioConfig& cfg, const std::filesystem::path& dir);

}  // namespace slowlight
