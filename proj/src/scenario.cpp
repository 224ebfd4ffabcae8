#include "slowlight/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "slowlight/dynamics.hpp"
#include "slowlight/error.hpp"
#include "slowlight/soliton.hpp"
#include "slowlight/verify.hpp"

namespace slowlight {

using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(path + "." + key, "missing required entry");
    return j.at(key);
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number, got " + std::string(v.type_name()));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
    return x;
}

double number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
    if (!j.contains(key)) return fallback;
    return as_number(j.at(key), path + "." + key);
}

std::optional<double> optional_number(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return as_number(j.at(key), path + "." + key);
}

std::size_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(path, "expected a non-negative integer");
    return static_cast<std::size_t>(v.get<long long>());
}

cplx as_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {as_number(v, path), 0.0};
    if (v.is_array() && v.size() == 2) return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
    if (v.is_object()) return {number_or(v, "re", path, 0.0), number_or(v, "im", path, 0.0)};
    throw ConfigError(path, "expected a number, [re, im] or {\"re\":..,\"im\":..}");
}

void check_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, _] : j.items())
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(path + "." + key, "unknown entry");
}

std::string field_type(const json& f) {
    const auto& t = require(f, "type", "field");
    if (!t.is_string()) throw ConfigError("field.type", "expected a string");
    return t.get<std::string>();
}

void validate_field(const json& f) {
    const std::string type = field_type(f);
    auto positive = [&](const char* key) {
        const double v = as_number(require(f, key, "field"), std::string("field.") + key);
        if (!(v > 0.0)) throw ConfigError(std::string("field.") + key, "must be > 0");
    };
    if (type == "constant") {
        check_object(f, "field", {"type", "omega0"});
    } else if (type == "instant_off") {
        check_object(f, "field", {"type", "omega0", "tau_off"});
    } else if (type == "exponential_off") {
        check_object(f, "field", {"type", "omega0", "alpha"});
        positive("alpha");
    } else if (type == "tanh_ramp") {
        check_object(f, "field", {"type", "omega0", "alpha", "tau_off"});
        positive("alpha");
    } else if (type == "sampled") {
        check_object(f, "field", {"type", "file", "left", "right"});
        if (!require(f, "file", "field").is_string()) throw ConfigError("field.file", "expected a path string");
        return;
    } else {
        throw ConfigError("field.type", "unknown field type '" + type +
                                            "' (constant, instant_off, exponential_off, tanh_ramp, sampled)");
    }
    const cplx om = as_complex(require(f, "omega0", "field"), "field.omega0");
    if (std::abs(om) == 0.0) throw ConfigError("field.omega0", "must be non-zero");
    if (f.contains("tau_off")) as_number(f.at("tau_off"), "field.tau_off");
}

SweepParameter parse_sweep_parameter(const json& v) {
    if (!v.is_string()) throw ConfigError("sweep.parameter", "expected a string");
    const auto s = v.get<std::string>();
    if (s == "alpha") return SweepParameter::Alpha;
    if (s == "omega0") return SweepParameter::Omega0;
    if (s == "lambda_im") return SweepParameter::LambdaIm;
    throw ConfigError("sweep.parameter", "must be one of alpha, omega0, lambda_im");
}

const char* sweep_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::Alpha: return "alpha";
        case SweepParameter::Omega0: return "omega0";
        case SweepParameter::LambdaIm: return "lambda_im";
    }
    return "?";
}

std::string hex64(std::uint64_t h) { return fmt::format("{:016x}", h); }

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> number_row(std::initializer_list<double> xs) {
    std::vector<std::string> r;
    r.reserve(xs.size());
    for (double x : xs) r.push_back(format_number(x));
    return r;
}

// Solve-grid nodes on a lattice of the given stride that contains tau = 0.
std::vector<std::size_t> strided_nodes(const TauGrid& g, std::size_t stride) {
    std::vector<std::size_t> out;
    const std::size_t z = g.zero_index();
    for (std::size_t j = z % stride; j < g.size(); j += stride) out.push_back(j);
    return out;
}

}  // namespace

ControlField ScenarioConfig::make_field() const {
    const std::string type = field_type(field);
    if (type == "sampled") {
        std::filesystem::path file = field.at("file").get<std::string>();
        if (file.is_relative()) file = base_dir / file;
        if (!std::filesystem::exists(file)) throw ConfigError("field.file", "no such file: " + file.string());
        if (field.contains("left") || field.contains("right")) {
            if (!field.contains("left") || !field.contains("right"))
                throw ConfigError("field", "sampled field needs both 'left' and 'right' asymptotes or neither");
            return load_sampled_field(file, as_complex(field.at("left"), "field.left"),
                                      as_complex(field.at("right"), "field.right"));
        }
        return load_sampled_field(file);
    }
    const cplx om = as_complex(field.at("omega0"), "field.omega0");
    const double tau_off = number_or(field, "tau_off", "field", 0.0);
    if (type == "constant") return ControlField::constant(om);
    if (type == "instant_off") return ControlField::instant_off(om, tau_off);
    if (type == "exponential_off") return ControlField::exponential_off(om, field.at("alpha").get<double>());
    return ControlField::tanh_ramp(om, field.at("alpha").get<double>(), tau_off);
}

SpectralPoint ScenarioConfig::make_spectral() const {
    const ControlField f = make_field();
    try {
        return SpectralPoint::derive(lambda, f.omega0());
    } catch (const ValidationError& e) {
        throw ConfigError("spectral", e.what());
    }
}

TauGrid ScenarioConfig::make_grid(const ControlField& f, const SpectralPoint& s) const {
    const TauGrid def = default_grid(f, s);
    if (!grid.tau_min && !grid.tau_max && !grid.h && !grid.n) return def;
    const double lo = grid.tau_min.value_or(def.tau_min());
    const double hi = grid.tau_max.value_or(def.tau_max());
    if (!(lo < 0.0 && hi > 0.0)) throw ConfigError("grid", "need tau_min < 0 < tau_max");
    const TauGrid g = [&] {
        try {
            return grid.n ? TauGrid(lo, hi, *grid.n) : TauGrid::with_spacing(lo, hi, grid.h.value_or(def.h()));
        } catch (const ValidationError& e) {
            throw ConfigError("grid", e.what());
        }
    }();
    if (std::abs(s.k()) * g.h() > 0.5)
        throw ConfigError(grid.n ? "grid.n" : "grid.h",
                          fmt::format("|k| h = {:.3g} exceeds 0.5; the phase e^(-ik tau) is under-resolved",
                                      std::abs(s.k()) * g.h()));
    for (double b : f.breakpoints())
        if (b <= g.tau_min() || b >= g.tau_max() || !g.node_index(b))
            throw ConfigError("grid", fmt::format("field breakpoint tau = {} must be an interior grid node", b));
    if (f.is_stopping() && g.tau_max() <= f.switch_end())
        throw ConfigError("grid.tau_max", fmt::format("must exceed the end of the switch-off (tau = {:.6g})",
                                                       f.switch_end()));
    return g;
}

ScenarioConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    check_object(j, "config",
                 {"physical", "spectral", "field", "grid", "solver", "simulate", "trajectory", "verify", "sweep",
                  "seed", "output"});
    ScenarioConfig c;
    c.base_dir = base_dir;
    c.source = j;

    if (j.contains("physical")) {
        const auto& p = j.at("physical");
        check_object(p, "physical", {"nu0", "delta", "c", "x0"});
        c.physical.nu0 = number_or(p, "nu0", "physical", c.physical.nu0);
        c.physical.delta = number_or(p, "delta", "physical", c.physical.delta);
        c.physical.c = number_or(p, "c", "physical", c.physical.c);
        c.physical.x0 = number_or(p, "x0", "physical", c.physical.x0);
        if (!(c.physical.nu0 > 0.0)) throw ConfigError("physical.nu0", "must be > 0");
        if (!(c.physical.c > 0.0)) throw ConfigError("physical.c", "must be > 0");
    }

    const auto& sp = require(j, "spectral", "config");
    check_object(sp, "spectral", {"lambda_re", "lambda_im"});
    c.lambda = {number_or(sp, "lambda_re", "spectral", 0.0), as_number(require(sp, "lambda_im", "spectral"),
                                                                       "spectral.lambda_im")};
    if (!(c.lambda.imag() < 0.0)) throw ConfigError("spectral.lambda_im", "must be < 0 for a decaying soliton");

    c.field = require(j, "field", "config");
    validate_field(c.field);

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        check_object(g, "grid", {"tau_min", "tau_max", "h", "n"});
        c.grid.tau_min = optional_number(g, "tau_min", "grid");
        c.grid.tau_max = optional_number(g, "tau_max", "grid");
        c.grid.h = optional_number(g, "h", "grid");
        if (g.contains("n")) c.grid.n = as_count(g.at("n"), "grid.n");
        if (c.grid.h && c.grid.n) throw ConfigError("grid", "give either h or n, not both");
        if (c.grid.h && !(*c.grid.h > 0.0)) throw ConfigError("grid.h", "must be > 0");
        if (c.grid.n && *c.grid.n < 3) throw ConfigError("grid.n", "must be >= 3");
        if (c.grid.tau_min && c.grid.tau_max && !(*c.grid.tau_max > *c.grid.tau_min))
            throw ConfigError("grid", "zero or negative duration: tau_max must exceed tau_min");
        if (c.grid.tau_min && !(*c.grid.tau_min < 0.0)) throw ConfigError("grid.tau_min", "must be < 0");
        if (c.grid.tau_max && !(*c.grid.tau_max > 0.0)) throw ConfigError("grid.tau_max", "must be > 0");
    }

    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        check_object(s, "solver", {"method", "tol", "max_iter", "mixing"});
        if (s.contains("method")) {
            if (!s.at("method").is_string()) throw ConfigError("solver.method", "expected a string");
            const auto m = s.at("method").get<std::string>();
            if (m == "picard") c.method = SolveMethod::Picard;
            else if (m == "riccati") c.method = SolveMethod::Riccati;
            else if (m == "closed_form") c.method = SolveMethod::ClosedForm;
            else throw ConfigError("solver.method", "must be one of picard, riccati, closed_form");
        }
        c.picard.tol = number_or(s, "tol", "solver", c.picard.tol);
        if (s.contains("max_iter")) c.picard.max_iter = static_cast<int>(as_count(s.at("max_iter"), "solver.max_iter"));
        c.picard.mixing = number_or(s, "mixing", "solver", c.picard.mixing);
        if (!(c.picard.tol > 0.0)) throw ConfigError("solver.tol", "must be > 0");
        if (c.picard.max_iter < 1) throw ConfigError("solver.max_iter", "must be >= 1");
        if (!(c.picard.mixing > 0.0 && c.picard.mixing <= 1.0)) throw ConfigError("solver.mixing", "must lie in (0, 1]");
    }
    if (c.method == SolveMethod::ClosedForm && field_type(c.field) != "instant_off")
        throw ConfigError("solver.method", "closed_form is only available for instant_off fields");

    if (j.contains("simulate")) {
        const auto& s = j.at("simulate");
        check_object(s, "simulate", {"zeta_min", "zeta_max", "n_zeta", "tau_stride"});
        c.simulate.zeta_min = optional_number(s, "zeta_min", "simulate");
        c.simulate.zeta_max = optional_number(s, "zeta_max", "simulate");
        if (s.contains("n_zeta")) c.simulate.n_zeta = as_count(s.at("n_zeta"), "simulate.n_zeta");
        if (s.contains("tau_stride")) c.simulate.tau_stride = as_count(s.at("tau_stride"), "simulate.tau_stride");
        if (c.simulate.n_zeta < 2) throw ConfigError("simulate.n_zeta", "must be >= 2");
        if (c.simulate.tau_stride && *c.simulate.tau_stride < 1) throw ConfigError("simulate.tau_stride", "must be >= 1");
        if (c.simulate.zeta_min.has_value() != c.simulate.zeta_max.has_value())
            throw ConfigError("simulate", "give both zeta_min and zeta_max or neither");
        if (c.simulate.zeta_min && !(*c.simulate.zeta_max > *c.simulate.zeta_min))
            throw ConfigError("simulate", "zeta_max must exceed zeta_min");
    }

    if (j.contains("trajectory")) {
        const auto& t = j.at("trajectory");
        check_object(t, "trajectory", {"stride"});
        if (t.contains("stride")) c.trajectory_stride = as_count(t.at("stride"), "trajectory.stride");
        if (c.trajectory_stride < 1) throw ConfigError("trajectory.stride", "must be >= 1");
    }

    if (j.contains("verify")) {
        const auto& v = j.at("verify");
        check_object(v, "verify", {"h", "half_zeta", "half_tau", "tau_center", "min_order", "max_residual", "points"});
        if (v.contains("h")) {
            const auto& hs = v.at("h");
            if (!hs.is_array() || hs.size() < 3) throw ConfigError("verify.h", "expected at least 3 spacings");
            c.verify.h.clear();
            for (std::size_t i = 0; i < hs.size(); ++i) {
                const double h = as_number(hs[i], fmt::format("verify.h[{}]", i));
                if (!(h > 0.0)) throw ConfigError(fmt::format("verify.h[{}]", i), "must be > 0");
                c.verify.h.push_back(h);
            }
        }
        c.verify.half_zeta = number_or(v, "half_zeta", "verify", c.verify.half_zeta);
        c.verify.half_tau = number_or(v, "half_tau", "verify", c.verify.half_tau);
        c.verify.tau_center = optional_number(v, "tau_center", "verify");
        c.verify.min_order = number_or(v, "min_order", "verify", c.verify.min_order);
        c.verify.max_residual = number_or(v, "max_residual", "verify", c.verify.max_residual);
        if (v.contains("points")) c.verify.points = as_count(v.at("points"), "verify.points");
        if (!(c.verify.half_zeta > 0.0)) throw ConfigError("verify.half_zeta", "must be > 0");
        if (!(c.verify.half_tau > 0.0)) throw ConfigError("verify.half_tau", "must be > 0");
        const double hmax = *std::max_element(c.verify.h.begin(), c.verify.h.end());
        if (std::min(c.verify.half_zeta, c.verify.half_tau) < 2.0 * hmax)
            throw ConfigError("verify", "half widths must span at least 2 of the coarsest spacing (5 points per axis)");
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        check_object(s, "sweep", {"parameter", "values"});
        SweepSpec sw;
        sw.parameter = parse_sweep_parameter(require(s, "parameter", "sweep"));
        const auto& vals = require(s, "values", "sweep");
        if (!vals.is_array() || vals.empty()) throw ConfigError("sweep.values", "expected a non-empty array");
        for (std::size_t i = 0; i < vals.size(); ++i) sw.values.push_back(as_number(vals[i], fmt::format("sweep.values[{}]", i)));
        if (sw.parameter == SweepParameter::Alpha) {
            const auto t = field_type(c.field);
            if (t != "exponential_off" && t != "tanh_ramp")
                throw ConfigError("sweep.parameter", "alpha sweeps need an exponential_off or tanh_ramp field");
        }
        if (sw.parameter == SweepParameter::Omega0 && field_type(c.field) == "sampled")
            throw ConfigError("sweep.parameter", "omega0 sweeps are not defined for sampled fields");
        c.sweep = sw;
    }

    if (j.contains("seed")) {
        const auto& s = j.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
            throw ConfigError("seed", "expected a non-negative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        check_object(o, "output", {"dir"});
        if (o.contains("dir")) {
            if (!o.at("dir").is_string()) throw ConfigError("output.dir", "expected a string");
            c.output_dir = o.at("dir").get<std::string>();
        }
    }

    // Cross-module preconditions, checked before any solve.
    const ControlField f = c.make_field();
    const SpectralPoint s = c.make_spectral();
    (void)c.make_grid(f, s);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open configuration file");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j, path.parent_path());
}

ScenarioConfig with_overrides(const ScenarioConfig& cfg, std::optional<double> tol, std::optional<std::uint64_t> seed) {
    json j = cfg.source;
    if (tol) j["solver"]["tol"] = *tol;
    if (seed) j["seed"] = *seed;
    return parse_config(j, cfg.base_dir);
}

std::uint64_t config_hash(const json& j) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

BackgroundSolution solve_background(const ScenarioConfig& cfg) {
    const ControlField f = cfg.make_field();
    const SpectralPoint s = cfg.make_spectral();
    const TauGrid g = cfg.make_grid(f, s);
    switch (cfg.method) {
        case SolveMethod::Riccati: return solve_w_riccati(f, s, g, cfg.picard.tol);
        case SolveMethod::ClosedForm:
            return closed_form_instant_off(s, g, std::get<field::InstantOff>(f.variant()).tau_off);
        case SolveMethod::Picard: break;
    }
    return solve_w_picard(f, s, g, cfg.picard);
}

std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    return fmt::format("{:.17g}", v);
}

namespace {

std::vector<std::pair<std::string, std::string>> solve_meta(const BackgroundSolution& bg) {
    return {{"field", bg.field().describe()},
            {"method", std::string(to_string(bg.method()))},
            {"grid", fmt::format("tau_min={} tau_max={} n={} h={}", format_number(bg.grid().tau_min()),
                                 format_number(bg.grid().tau_max()), bg.grid().size(), format_number(bg.grid().h()))},
            {"iterations", std::to_string(bg.iterations())},
            {"residual", format_number(bg.residual())}};
}

}  // namespace

RunResult run_simulate(const ScenarioConfig& cfg) {
    const auto bg = solve_background(cfg);
    const auto& s = bg.spectral();
    const auto& g = bg.grid();
    const auto& p = cfg.physical;
    const std::size_t stride = cfg.simulate.tau_stride.value_or(std::max<std::size_t>(1, g.size() / 100));
    const auto nodes = strided_nodes(g, stride);

    double zlo, zhi;
    if (cfg.simulate.zeta_min) {
        zlo = *cfg.simulate.zeta_min;
        zhi = *cfg.simulate.zeta_max;
    } else {
        // cover the whole trajectory plus 12 envelope widths on both sides
        const double pad = 12.0 / p.phase_slope_zeta(s.lambda());
        double a = 0.0, b = 0.0;
        for (std::size_t j : nodes) {
            const auto n = bg.at_node(j);
            const double zp = peak_zeta(LocalBackground{n.w, n.z, n.omega, bg.w_at_zero()}, s, p);
            a = std::min(a, zp);
            b = std::max(b, zp);
        }
        const double half = std::max(std::abs(a), std::abs(b)) + std::abs(pad);
        zlo = -half;
        zhi = half;
    }
    const std::size_t nz = cfg.simulate.n_zeta;

    Table t;
    t.name = "simulate";
    t.meta = solve_meta(bg);
    t.columns = {"zeta", "tau", "re_omega_a", "im_omega_a", "re_omega_b", "im_omega_b",
                 "psi1_sq", "psi2_sq", "psi3_sq", "phi_s"};
    t.rows.reserve(nodes.size() * nz);
    for (std::size_t j : nodes) {
        const auto n = bg.at_node(j);
        const LocalBackground b{n.w, n.z, n.omega, bg.w_at_zero()};
        for (std::size_t i = 0; i < nz; ++i) {
            const double zeta = zlo + (zhi - zlo) * static_cast<double>(i) / static_cast<double>(nz - 1);
            const auto snap = snapshot(zeta, b, s, p);
            const auto& psi = snap.state.psi;
            t.rows.push_back(number_row({zeta, g.tau(j), snap.omega_a.real(), snap.omega_a.imag(),
                                         snap.omega_b.real(), snap.omega_b.imag(), std::norm(psi[0]),
                                         std::norm(psi[1]), std::norm(psi[2]), snap.phase.phi}));
        }
    }
    return {{std::move(t)}, true};
}

RunResult run_trajectory(const ScenarioConfig& cfg) {
    const auto bg = solve_background(cfg);
    const auto tr = trajectory(bg, cfg.physical, cfg.trajectory_stride);
    const auto fd = fd_lab_velocity(tr, bg.field().breakpoints());
    Table t;
    t.name = "trajectory";
    t.meta = solve_meta(bg);
    t.meta.emplace_back("max_velocity", format_number(max_velocity(bg.spectral(), cfg.physical)));
    if (tr.decay_incomplete) t.meta.emplace_back("warning", "background has not decayed at tau_max");
    t.columns = {"tau", "zeta_peak", "x", "t", "v", "v_fd"};
    for (std::size_t j = 0; j < tr.rows.size(); ++j) {
        const auto& r = tr.rows[j];
        auto row = number_row({r.tau, r.zeta_peak, r.x, r.t, r.v});
        row.push_back(std::isnan(fd[j]) ? "" : format_number(fd[j]));
        t.rows.push_back(std::move(row));
    }
    return {{std::move(t)}, true};
}

RunResult run_stop(const ScenarioConfig& cfg) {
    const auto bg = solve_background(cfg);
    const auto& p = cfg.physical;
    const auto rep = stop_report(bg, p);

    Table t;
    t.name = "stop";
    t.meta = solve_meta(bg);
    t.columns = {"L0", "L_rel", "L_rel_double", "L_series_2", "I1", "I2", "W0", "W_measured", "x_bit", "truncation"};
    t.rows.push_back(number_row({rep.L0, rep.L_rel, rep.L_rel_double, rep.L_series_2, rep.I1, rep.I2, rep.W0,
                                 rep.W_measured, rep.x_bit, rep.truncation}));

    Table bit;
    bit.name = "memory_bit";
    bit.meta = t.meta;
    bit.columns = {"zeta", "x", "psi1_sq", "psi2_sq", "psi3_sq"};
    const double half = 10.0 * rep.W0 / p.c;
    const double centre = (rep.x_bit - p.x0) / p.c;
    const std::size_t n = 401;
    std::vector<double> zeta(n);
    for (std::size_t i = 0; i < n; ++i) zeta[i] = centre - half + 2.0 * half * static_cast<double>(i) / (n - 1);
    const auto states = memory_bit_profile(zeta, bg, p);
    for (std::size_t i = 0; i < n; ++i)
        bit.rows.push_back(number_row({zeta[i], p.x0 + p.c * zeta[i], std::norm(states[i].psi[0]),
                                       std::norm(states[i].psi[1]), std::norm(states[i].psi[2])}));
    return {{std::move(t), std::move(bit)}, true};
}

RunResult run_verify(const ScenarioConfig& cfg) {
    const auto bg = solve_background(cfg);
    const auto& p = cfg.physical;
    const auto& g = bg.grid();
    const auto& v = cfg.verify;
    const double hmax = *std::max_element(v.h.begin(), v.h.end());

    double tc = 0.0;
    if (v.tau_center) {
        tc = *v.tau_center;
    } else {
        // keep the finite-difference window clear of field kinks and jumps; a sampled field is
        // piecewise linear, so its whole table counts as rough
        auto rough = bg.field().breakpoints();
        if (const auto* sm = std::get_if<field::Sampled>(&bg.field().variant())) rough.push_back(sm->tau.back());
        if (!rough.empty()) tc = *std::max_element(rough.begin(), rough.end()) + v.half_tau + hmax;
    }
    if (tc - v.half_tau - hmax < g.tau_min() || tc + v.half_tau + hmax > g.tau_max())
        throw ConfigError("verify.tau_center", fmt::format("window [{:.6g}, {:.6g}] leaves the tau grid [{:.6g}, {:.6g}]",
                                                           tc - v.half_tau, tc + v.half_tau, g.tau_min(), g.tau_max()));
    const double zc = peak_zeta(local_background(tc, bg), bg.spectral(), p);

    const auto fn = soliton_snapshots(bg, p);
    const auto res = convergence_study(
        [&](double h) { return sample_snapshots(fn, zc, tc, v.half_zeta, v.half_tau, h); }, v.h, p);
    const auto inv = invariant_suite(bg, p, {cfg.seed, v.points, cfg.picard.tol});

    const double finest = std::max(res.r_field, res.r_atom);
    const double order = res.order().value_or(0.0);
    const bool order_ok = order >= v.min_order;
    const bool residual_ok = finest <= v.max_residual;

    Table r;
    r.name = "verify_residual";
    r.meta = solve_meta(bg);
    r.meta.emplace_back("window", fmt::format("zeta={} tau={} half_zeta={} half_tau={}", format_number(zc),
                                              format_number(tc), format_number(v.half_zeta), format_number(v.half_tau)));
    r.meta.emplace_back("order_field", format_number(res.order_field.value_or(0.0)));
    r.meta.emplace_back("order_atom", format_number(res.order_atom.value_or(0.0)));
    r.columns = {"h", "r_field", "r_atom"};
    for (const auto& l : res.levels) r.rows.push_back(number_row({l.h, l.r_field, l.r_atom}));

    Table c;
    c.name = "verify_checks";
    c.meta = {{"points", std::to_string(inv.points)}};
    c.columns = {"check", "passed", "value", "threshold", "detail"};
    c.rows.push_back({"residual_order", order_ok ? "1" : "0", format_number(order), format_number(v.min_order),
                      "min of fitted field and atom orders"});
    c.rows.push_back({"residual_finest", residual_ok ? "1" : "0", format_number(finest), format_number(v.max_residual),
                      "max(r_field, r_atom) on the finest grid"});
    for (const auto& ch : inv.checks)
        c.rows.push_back({ch.name, ch.passed ? "1" : "0", format_number(ch.value), format_number(ch.threshold), ch.detail});

    return {{std::move(r), std::move(c)}, order_ok && residual_ok && inv.all_passed()};
}

RunResult run_sweep(const ScenarioConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep", "missing sweep section");
    const auto& sw = *cfg.sweep;
    Table t;
    t.name = "sweep";
    t.meta = {{"parameter", sweep_name(sw.parameter)}, {"field", cfg.make_field().describe()}};
    t.columns = {sweep_name(sw.parameter), "L0", "L_rel", "L_rel_double", "L_series_2", "I1", "I2", "W0",
                 "W_measured", "x_bit", "iterations"};
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
        json j = cfg.source;
        j.erase("sweep");
        const double x = sw.values[i];
        switch (sw.parameter) {
            case SweepParameter::Alpha: j["field"]["alpha"] = x; break;
            case SweepParameter::Omega0: j["field"]["omega0"] = x; break;
            case SweepParameter::LambdaIm: j["spectral"]["lambda_im"] = x; break;
        }
        StopReport rep;
        ScenarioConfig point;
        try {
            point = parse_config(j, cfg.base_dir);
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("sweep.values[{}]", i), e.what());
        }
        const auto bg = solve_background(point);
        rep = stop_report(bg, point.physical);
        auto row = number_row({x, rep.L0, rep.L_rel, rep.L_rel_double, rep.L_series_2, rep.I1, rep.I2, rep.W0,
                               rep.W_measured, rep.x_bit});
        row.push_back(std::to_string(bg.iterations()));
        t.rows.push_back(std::move(row));
    }
    return {{std::move(t)}, true};
}

std::string render_table(const Table& t, const std::string& command, const ScenarioConfig& cfg) {
    std::string out;
    out += fmt::format("# slowlight {}\n", command);
    out += fmt::format("# config_hash: {}\n", hex64(config_hash(cfg.source)));
    out += fmt::format("# seed: {}\n", cfg.seed);
    for (const auto& [k, v] : t.meta) out += fmt::format("# {}: {}\n", k, v);
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_cell(t.columns[i]);
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += '\n';
    }
    return out;
}

std::vector<std::filesystem::path> write_tables(const RunResult& r, const std::string& command,
                                                const ScenarioConfig& cfg, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    for (const auto& t : r.tables) {
        const auto path = dir / (t.name + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << render_table(t, command, cfg);
        if (!out) throw Error("write failed: " + path.string());
        paths.push_back(path);
    }
    return paths;
}

}  // namespace slowlight
