// Command-line front end: loads system descriptions from JSON, runs the
// library, and writes sweep/spectrum/map data as CSV or JSON.
//
// Exit codes: 0 success, 1 usage, 2 singular coupling, 3 singular
// composition, 4 I/O failure.
//
// Output files are written atomically (temp file + rename). JSON records
// carry a timestamp taken from SOURCE_DATE_EPOCH when that variable is set,
// so identical inputs reproduce byte-identical outputs. Set DELTAPRIME_LOG
// to a nonzero value for diagnostics on stderr.

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <deltaprime/deltaprime.hpp>

namespace {

using json = nlohmann::ordered_json;
using namespace deltaprime;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_singular = 2;
constexpr int exit_composition = 3;
constexpr int exit_io = 4;

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("DELTAPRIME_LOG");
        if (!env || !*env) return 0;
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        return (end && *end == '\0') ? static_cast<int>(parsed) : 1;
    }();
    return level;
}

void diag(const std::string& message) {
    if (log_level() > 0) std::cerr << "deltaprime: " << message << "\n";
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string iso_timestamp() {
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        const long long parsed = std::strtoll(epoch, &end, 10);
        if (end && *end == '\0') now = static_cast<std::time_t>(parsed);
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw IoFailure("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoFailure("rename to " + path + " failed: " + ec.message());
}

void emit(const std::optional<std::string>& out_path, const std::string& content) {
    if (out_path)
        write_atomic(*out_path, content);
    else
        std::cout << content;
}

// ---------------------------------------------------------------------------
// configuration loading

struct SystemSpec {
    Couplings v;
    Couplings w;
    double q = 0.0;
    json echo;  // parsed config, echoed into JSON records
};

Couplings coupling_from_json(const json& node, const json& constants, const char* name) {
    const bool has_dimensionless = node.contains("delta") || node.contains("delta_prime");
    const bool has_physical = node.contains("physical");
    if (has_dimensionless == has_physical)
        throw UsageFailure(std::string("interaction '") + name +
                           "': exactly one of a dimensionless block "
                           "(delta/delta_prime) or a physical block must be present");

    double c0 = 0.0, c1 = 0.0;
    if (has_physical) {
        PhysicalParameters p;
        const json& phys = node.at("physical");
        p.delta_strength = phys.value("a", 0.0);
        p.delta_prime_strength = phys.value("b", 0.0);
        p.hbar = constants.value("hbar", 1.0);
        p.light_speed = constants.value("c", 1.0);
        p.mass = constants.value("mass", 1.0);
        const auto d = to_dimensionless(p);
        c0 = d.w0;
        c1 = d.w1;
    } else {
        c0 = node.value("delta", 0.0);
        c1 = node.value("delta_prime", 0.0);
    }

    if (node.value("decoupled", false)) {
        if (c1 == 1.0) return Couplings::decoupled_plus(c0);
        if (c1 == -1.0) return Couplings::decoupled_minus(c0);
        throw UsageFailure(std::string("interaction '") + name +
                           "': decoupled requires delta_prime exactly +-1");
    }
    return Couplings::regular(c0, c1);
}

SystemSpec load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open config " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw UsageFailure("config " + path + ": " + e.what());
    }

    const json constants = cfg.value("constants", json::object());
    SystemSpec spec;
    if (!cfg.contains("v") || !cfg.contains("w"))
        throw UsageFailure("config must define interactions 'v' and 'w'");
    spec.v = coupling_from_json(cfg.at("v"), constants, "v");
    spec.w = coupling_from_json(cfg.at("w"), constants, "w");

    const bool has_q = cfg.contains("q");
    const bool has_d = cfg.contains("d");
    if (has_q == has_d)
        throw UsageFailure("config must define exactly one of 'q' or physical 'd'");
    if (has_q) {
        spec.q = cfg.at("q").get<double>();
    } else {
        PhysicalParameters p;
        p.position = cfg.at("d").get<double>();
        p.hbar = constants.value("hbar", 1.0);
        p.light_speed = constants.value("c", 1.0);
        p.mass = constants.value("mass", 1.0);
        spec.q = to_dimensionless(p).q;
    }
    if (!(spec.q >= 0.0) || !std::isfinite(spec.q))
        throw UsageFailure("config: separation must be finite and nonnegative");
    spec.echo = cfg;
    return spec;
}

TwoPointSystem make_system(const SystemSpec& spec) {
    return spec.q > 0.0 ? TwoPointSystem::separated(spec.v, spec.w, spec.q)
                        : TwoPointSystem::collapsed(spec.v, spec.w);
}

json make_record(const std::string& command, const json& input, json payload) {
    json record;
    record["command"] = command;
    record["input"] = input;
    record["timestamp"] = iso_timestamp();
    record["payload"] = std::move(payload);
    return record;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

json spectral_point_json(const SpectralPoint& p) {
    json j;
    j["k_re"] = p.k.real();
    j["k_im"] = p.k.imag();
    j["z_re"] = p.z.real();
    j["z_im"] = p.z.imag();
    j["kind"] = to_string(p.kind);
    j["residual"] = p.residual;
    if (p.partner) {
        j["partner_re"] = p.partner->real();
        j["partner_im"] = p.partner->imag();
    }
    return j;
}

// ---------------------------------------------------------------------------
// shared command options

struct CommonOpts {
    std::string config_path;
    std::optional<std::string> out_path;
    std::string format;  // empty = command default
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "system description (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_path, "output path (default: stdout)");
    cmd->add_option("--format", opts.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

struct WindowOpts {
    double re_min = -30.0, re_max = 30.0, im_min = -12.0, im_max = 4.0;
    int grid = 64;
    double tol = 1e-11;
    int max_iter = 60;
    double dedup = 1e-6;
    double origin = 1e-4;

    void add(CLI::App* cmd) {
        cmd->add_option("--re-min", re_min, "window: smallest real part");
        cmd->add_option("--re-max", re_max, "window: largest real part");
        cmd->add_option("--im-min", im_min, "window: smallest imaginary part");
        cmd->add_option("--im-max", im_max, "window: largest imaginary part");
        cmd->add_option("--grid", grid, "seeds per axis");
        cmd->add_option("--tol", tol, "Newton residual tolerance");
        cmd->add_option("--max-iter", max_iter, "Newton iteration cap");
        cmd->add_option("--dedup", dedup, "root merge radius");
        cmd->add_option("--origin-exclusion", origin, "drop roots inside this radius");
    }

    SolverConfig solver() const {
        SolverConfig cfg;
        cfg.window = Window{re_min, re_max, im_min, im_max};
        cfg.grid_density = grid;
        cfg.newton_tolerance = tol;
        cfg.max_iterations = max_iter;
        cfg.dedup_radius = dedup;
        cfg.origin_exclusion_radius = origin;
        return cfg;
    }
};

void log_stats(const SolverStats& stats) {
    std::ostringstream os;
    os << "solver: " << stats.seeds << " seeds, " << stats.converged << " converged, "
       << stats.nonconverged << " dropped, " << stats.deduplicated << " merged, "
       << stats.out_of_window << " outside window, " << stats.origin_excluded
       << " at origin, " << stats.unpaired << " unpaired";
    diag(os.str());
}

// ---------------------------------------------------------------------------
// commands

int cmd_compose(const CommonOpts& opts) {
    const SystemSpec spec = load_system(opts.config_path);
    if (!opts.format.empty() && opts.format != "json")
        throw UsageFailure("compose emits JSON records only");
    const Couplings u = compose(spec.v, spec.w);
    const auto mu = kurasov_matrix(u);
    const auto product = kurasov_matrix(spec.w) * kurasov_matrix(spec.v);

    json payload;
    payload["couplings"] = {{"delta", u.c0()}, {"delta_prime", u.c1()}};
    payload["kurasov"] = {{mu.m11(), mu.m12()}, {mu.m21(), mu.m22()}};
    payload["product"] = {{product.m11(), product.m12()}, {product.m21(), product.m22()}};
    emit(opts.out_path, make_record("compose", spec.echo, std::move(payload)).dump(2) + "\n");
    return exit_ok;
}

int cmd_scatter(const CommonOpts& opts, double k_min, double k_max, int k_steps) {
    const SystemSpec spec = load_system(opts.config_path);
    if (!(0.0 < k_min) || !(k_min < k_max) || k_steps < 2)
        throw UsageFailure("scatter requires 0 < k-min < k-max and k-steps >= 2");
    if (!spec.v.is_regular() || !spec.w.is_regular())
        throw SingularCoupling(
            "scatter: decoupled interactions are opaque; use spectrum-decoupled instead");

    const TwoPointSystem system = make_system(spec);
    std::vector<ScatteringData> rows;
    rows.reserve(k_steps);
    for (int i = 0; i < k_steps; ++i) {
        const double k = k_min + (k_max - k_min) * i / (k_steps - 1);
        const ScatteringData sd =
            spec.q > 0.0 ? closed_form_two_point(system, k)
                         : scattering_from_transfer(transfer_two_point(system, k));
        const double unitarity = std::abs(std::norm(sd.t) + std::norm(sd.rl) - 1.0);
        if (unitarity > 1e-10)
            throw std::domain_error("scatter: unitarity defect " + fmt(unitarity) +
                                    " at k = " + fmt(k));
        rows.push_back(sd);
    }

    const std::string format = opts.format.empty() ? "csv" : opts.format;
    if (format == "csv") {
        std::string out = "k,t_re,t_im,t_abs2,rl_re,rl_im,rl_abs2,rr_re,rr_im,rr_abs2\n";
        for (const auto& sd : rows)
            out += csv_line({fmt(sd.k), fmt(sd.t.real()), fmt(sd.t.imag()),
                             fmt(std::norm(sd.t)), fmt(sd.rl.real()), fmt(sd.rl.imag()),
                             fmt(std::norm(sd.rl)), fmt(sd.rr.real()), fmt(sd.rr.imag()),
                             fmt(std::norm(sd.rr))});
        emit(opts.out_path, out);
    } else {
        json payload = json::array();
        for (const auto& sd : rows)
            payload.push_back({{"k", sd.k},
                               {"t_re", sd.t.real()},
                               {"t_im", sd.t.imag()},
                               {"t_abs2", std::norm(sd.t)},
                               {"rl_re", sd.rl.real()},
                               {"rl_im", sd.rl.imag()},
                               {"rl_abs2", std::norm(sd.rl)},
                               {"rr_re", sd.rr.real()},
                               {"rr_im", sd.rr.imag()},
                               {"rr_abs2", std::norm(sd.rr)}});
        emit(opts.out_path, make_record("scatter", spec.echo, std::move(payload)).dump(2) + "\n");
    }
    return exit_ok;
}

int cmd_spectrum(const CommonOpts& opts, const WindowOpts& window) {
    const SystemSpec spec = load_system(opts.config_path);
    if (!(spec.q > 0.0)) throw UsageFailure("spectrum requires q > 0");
    const SolverConfig cfg = window.solver();
    SolverStats stats;
    const auto points = find_zeros(make_system(spec), cfg, &stats);
    log_stats(stats);

    const std::string format = opts.format.empty() ? "json" : opts.format;
    if (format == "json") {
        json payload = json::array();
        for (const auto& p : points) payload.push_back(spectral_point_json(p));
        emit(opts.out_path, make_record("spectrum", spec.echo, std::move(payload)).dump(2) + "\n");
    } else {
        std::string out = "k_re,k_im,z_re,z_im,kind,residual,partner_re,partner_im\n";
        for (const auto& p : points)
            out += csv_line({fmt(p.k.real()), fmt(p.k.imag()), fmt(p.z.real()),
                             fmt(p.z.imag()), to_string(p.kind), fmt(p.residual),
                             p.partner ? fmt(p.partner->real()) : "",
                             p.partner ? fmt(p.partner->imag()) : ""});
        emit(opts.out_path, out);
    }
    return exit_ok;
}

DecouplingTag parse_tag(const std::string& name) {
    for (DecouplingTag tag :
         {DecouplingTag::PP, DecouplingTag::PM, DecouplingTag::MP, DecouplingTag::MM,
          DecouplingTag::PReg, DecouplingTag::MReg, DecouplingTag::RegP, DecouplingTag::RegM})
        if (name == to_string(tag)) return tag;
    throw UsageFailure("unknown decoupling case '" + name + "'");
}

int cmd_spectrum_decoupled(const CommonOpts& opts, const std::string& case_name,
                           double bound, const WindowOpts& window) {
    const SystemSpec spec = load_system(opts.config_path);
    const DecouplingTag tag = parse_tag(case_name);
    DecouplingCase dc = [&] {
        try {
            return DecouplingCase::make(tag, spec.v, spec.w, spec.q);
        } catch (const std::domain_error& e) {
            throw UsageFailure(e.what());
        }
    }();

    json payload;
    payload["case"] = case_name;
    payload["q"] = spec.q;
    if (is_double_decoupling(tag)) {
        const auto ladder = double_decoupled_spectrum(dc, bound);
        json roots = json::array();
        for (const auto& p : ladder)
            roots.push_back({{"k", p.k.real()}, {"residual", p.residual}});
        payload["roots"] = std::move(roots);
    } else {
        SolverStats stats;
        const auto poles = mixed_decoupled_spectrum(dc, window.solver(), &stats);
        log_stats(stats);
        json list = json::array();
        for (const auto& p : poles) list.push_back(spectral_point_json(p));
        payload["poles"] = std::move(list);
        if (tag == DecouplingTag::PReg || tag == DecouplingTag::RegM) {
            try {
                payload["limit_pole"] = spectral_point_json(mixed_limit_poles(dc));
            } catch (const std::domain_error&) {
                // transparent collapsed limit: nothing to append
            }
        }
    }

    const std::string format = opts.format.empty() ? "json" : opts.format;
    if (format == "json") {
        emit(opts.out_path,
             make_record("spectrum-decoupled", spec.echo, std::move(payload)).dump(2) + "\n");
    } else {
        std::string out;
        if (is_double_decoupling(tag)) {
            out = "k,residual\n";
            for (const auto& row : payload["roots"])
                out += csv_line({fmt(row["k"].get<double>()),
                                 fmt(row["residual"].get<double>())});
        } else {
            out = "k_re,k_im,kind,residual\n";
            for (const auto& row : payload["poles"])
                out += csv_line({fmt(row["k_re"].get<double>()), fmt(row["k_im"].get<double>()),
                                 row["kind"].get<std::string>(),
                                 fmt(row["residual"].get<double>())});
        }
        emit(opts.out_path, out);
    }
    return exit_ok;
}

int cmd_trace_curve(const CommonOpts& opts, double v1_min, double v1_max, int steps) {
    if (!(v1_min < v1_max) || steps < 2)
        throw UsageFailure("trace-curve requires v1-min < v1-max and steps >= 2");
    std::string out = "v1,trace,singular\n";
    json payload = json::array();
    for (int i = 0; i < steps; ++i) {
        const double v1 = v1_min + (v1_max - v1_min) * i / (steps - 1);
        const bool singular = std::abs(1.0 - v1 * v1) <= singularity_tolerance;
        if (singular) {
            out += csv_line({fmt(v1), "", "1"});
            payload.push_back({{"v1", v1}, {"singular", true}});
        } else {
            const double tr = trace(Couplings::regular(0.0, v1));
            out += csv_line({fmt(v1), fmt(tr), "0"});
            payload.push_back({{"v1", v1}, {"trace", tr}, {"singular", false}});
        }
    }
    const std::string format = opts.format.empty() ? "csv" : opts.format;
    if (format == "csv")
        emit(opts.out_path, out);
    else
        emit(opts.out_path,
             make_record("trace-curve", json::object(), std::move(payload)).dump(2) + "\n");
    return exit_ok;
}

int cmd_lambert_map(const CommonOpts& opts, const WindowOpts& window, int resolution) {
    const SystemSpec spec = load_system(opts.config_path);
    if (!(spec.q > 0.0)) throw UsageFailure("lambert-map requires q > 0");
    if (resolution < 2) throw UsageFailure("lambert-map requires resolution >= 2");
    const ReducedParams r = reduced_params(make_system(spec));

    std::string out = "z_re,z_im,residual_re,residual_im,compatibility\n";
    for (int i = 0; i < resolution; ++i) {
        const double zr = window.re_min + (window.re_max - window.re_min) * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double zi =
                window.im_min + (window.im_max - window.im_min) * j / (resolution - 1);
            const auto [re, im] = real_imag_residuals(zr, zi, r);
            double compat = std::numeric_limits<double>::quiet_NaN();
            try {
                compat = compatibility_residual(zr, zi, r);
            } catch (const PoleError&) {
            }
            out += csv_line({fmt(zr), fmt(zi), fmt(re), fmt(im), fmt(compat)});
        }
    }
    if (!opts.format.empty() && opts.format != "csv")
        throw UsageFailure("lambert-map emits CSV grids only");
    emit(opts.out_path, out);
    return exit_ok;
}

int cmd_heat(const CommonOpts& opts, double delta, double delta_prime, bool decoupled,
             double t_min, double t_max, int steps) {
    if (!(0.0 < t_min) || !(t_min < t_max) || steps < 2)
        throw UsageFailure("heat requires 0 < t-min < t-max and steps >= 2");
    Couplings c = Couplings{};
    if (decoupled) {
        if (delta_prime == 1.0)
            c = Couplings::decoupled_plus(delta);
        else if (delta_prime == -1.0)
            c = Couplings::decoupled_minus(delta);
        else
            throw UsageFailure("heat: --decoupled requires --delta-prime exactly +-1");
    } else {
        c = Couplings::regular(delta, delta_prime);
    }

    std::string out = "t,h_re,h_im\n";
    json payload = json::array();
    for (int i = 0; i < steps; ++i) {
        const double t = t_min + (t_max - t_min) * i / (steps - 1);
        const auto h = heat_trace(c, t);
        out += csv_line({fmt(t), fmt(h.real()), fmt(h.imag())});
        payload.push_back({{"t", t}, {"h_re", h.real()}, {"h_im", h.imag()}});
    }
    const std::string format = opts.format.empty() ? "csv" : opts.format;
    if (format == "csv")
        emit(opts.out_path, out);
    else
        emit(opts.out_path,
             make_record("heat", json::object(), std::move(payload)).dump(2) + "\n");
    return exit_ok;
}

int cmd_wave(const CommonOpts& opts, double k, const std::string& incident) {
    const SystemSpec spec = load_system(opts.config_path);
    if (!(k > 0.0)) throw UsageFailure("wave requires k > 0");
    const Incidence inc = incident == "left" ? Incidence::Left : Incidence::Right;
    const auto wave = piecewise_wave(make_system(spec), k, inc);

    json regions = json::array();
    for (int r = 0; r < 3; ++r)
        regions.push_back({{"a_re", wave.a[r].real()},
                           {"a_im", wave.a[r].imag()},
                           {"b_re", wave.b[r].real()},
                           {"b_im", wave.b[r].imag()}});
    json payload;
    payload["k"] = k;
    payload["incident"] = incident;
    payload["regions"] = std::move(regions);

    const std::string format = opts.format.empty() ? "json" : opts.format;
    if (format == "json") {
        emit(opts.out_path, make_record("wave", spec.echo, std::move(payload)).dump(2) + "\n");
    } else {
        std::string out = "region,a_re,a_im,b_re,b_im\n";
        for (int r = 0; r < 3; ++r)
            out += csv_line({std::to_string(r + 1), fmt(wave.a[r].real()),
                             fmt(wave.a[r].imag()), fmt(wave.b[r].real()),
                             fmt(wave.b[r].imag())});
        emit(opts.out_path, out);
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-point delta-delta' interactions: matching matrices, scattering, spectra"};
    app.require_subcommand(1);

    CommonOpts compose_opts;
    auto* compose_cmd = app.add_subcommand("compose", "collapse both interactions into one");
    add_common(compose_cmd, compose_opts);

    CommonOpts scatter_opts;
    double k_min = 0.1, k_max = 10.0;
    int k_steps = 100;
    auto* scatter_cmd = app.add_subcommand("scatter", "sweep scattering amplitudes over k");
    add_common(scatter_cmd, scatter_opts);
    scatter_cmd->add_option("--k-min", k_min, "first wavenumber")->required();
    scatter_cmd->add_option("--k-max", k_max, "last wavenumber")->required();
    scatter_cmd->add_option("--k-steps", k_steps, "grid size")->required();

    CommonOpts spectrum_opts;
    WindowOpts spectrum_window;
    auto* spectrum_cmd =
        app.add_subcommand("spectrum", "locate determinant zeros in a z-plane window");
    add_common(spectrum_cmd, spectrum_opts);
    spectrum_window.add(spectrum_cmd);

    CommonOpts decoupled_opts;
    WindowOpts decoupled_window;
    decoupled_window.re_min = -12.0;
    decoupled_window.re_max = 12.0;
    decoupled_window.im_min = -6.0;
    decoupled_window.im_max = 3.0;
    std::string case_name;
    double bound = 20.0;
    auto* decoupled_cmd = app.add_subcommand(
        "spectrum-decoupled", "spectra of configurations with opaque walls");
    add_common(decoupled_cmd, decoupled_opts);
    decoupled_cmd->add_option("--case", case_name, "PP, PM, MP, MM, PReg, MReg, RegP or RegM")
        ->required();
    decoupled_cmd->add_option("--bound", bound, "real-ladder search bound");
    decoupled_window.add(decoupled_cmd);

    CommonOpts trace_opts;
    double v1_min = -3.0, v1_max = 3.0;
    int trace_steps = 601;
    auto* trace_cmd = app.add_subcommand("trace-curve", "matching-matrix trace against c1");
    add_common(trace_cmd, trace_opts, /*config_required=*/false);
    trace_cmd->add_option("--v1-min", v1_min, "first delta-prime strength");
    trace_cmd->add_option("--v1-max", v1_max, "last delta-prime strength");
    trace_cmd->add_option("--steps", trace_steps, "grid size");

    CommonOpts lambert_opts;
    WindowOpts lambert_window;
    int resolution = 256;
    auto* lambert_cmd = app.add_subcommand(
        "lambert-map", "grid of zero-condition residuals for contour plots");
    add_common(lambert_cmd, lambert_opts);
    lambert_window.add(lambert_cmd);
    lambert_cmd->add_option("--resolution", resolution, "grid points per axis");

    CommonOpts heat_opts;
    double delta = 0.0, delta_prime = 0.0, t_min = 0.01, t_max = 10.0;
    int heat_steps = 100;
    bool heat_decoupled = false;
    auto* heat_cmd = app.add_subcommand("heat", "heat-trace sweep over proper time");
    add_common(heat_cmd, heat_opts, /*config_required=*/false);
    heat_cmd->add_option("--delta", delta, "delta strength")->required();
    heat_cmd->add_option("--delta-prime", delta_prime, "delta-prime strength");
    heat_cmd->add_flag("--decoupled", heat_decoupled, "treat the interaction as a wall");
    heat_cmd->add_option("--t-min", t_min, "first proper time")->required();
    heat_cmd->add_option("--t-max", t_max, "last proper time")->required();
    heat_cmd->add_option("--steps", heat_steps, "grid size");

    CommonOpts wave_opts;
    double wave_k = 1.0;
    std::string incident = "left";
    auto* wave_cmd = app.add_subcommand("wave", "piecewise plane-wave coefficients");
    add_common(wave_cmd, wave_opts);
    wave_cmd->add_option("--k", wave_k, "wavenumber")->required();
    wave_cmd->add_option("--incident", incident, "left or right")
        ->check(CLI::IsMember({"left", "right"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*compose_cmd) return cmd_compose(compose_opts);
        if (*scatter_cmd) return cmd_scatter(scatter_opts, k_min, k_max, k_steps);
        if (*spectrum_cmd) return cmd_spectrum(spectrum_opts, spectrum_window);
        if (*decoupled_cmd)
            return cmd_spectrum_decoupled(decoupled_opts, case_name, bound, decoupled_window);
        if (*trace_cmd) return cmd_trace_curve(trace_opts, v1_min, v1_max, trace_steps);
        if (*lambert_cmd) return cmd_lambert_map(lambert_opts, lambert_window, resolution);
        if (*heat_cmd)
            return cmd_heat(heat_opts, delta, delta_prime, heat_decoupled, t_min, t_max,
                            heat_steps);
        if (*wave_cmd) return cmd_wave(wave_opts, wave_k, incident);
    } catch (const DecoupledResult& e) {
        std::cerr << "deltaprime: " << e.what() << "\n";
        return exit_composition;
    } catch (const CompositionSingular& e) {
        std::cerr << "deltaprime: " << e.what() << "\n";
        return exit_composition;
    } catch (const SingularCoupling& e) {
        std::cerr << "deltaprime: " << e.what() << "\n";
        return exit_singular;
    } catch (const IoFailure& e) {
        std::cerr << "deltaprime: " << e.what() << "\n";
        return exit_io;
    } catch (const UsageFailure& e) {
        std::cerr << "deltaprime: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "deltaprime: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
