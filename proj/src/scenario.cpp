#include "kostin/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "kostin/error.hpp"
#include "kostin/pde.hpp"

namespace kostin {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    std::size_t line;
};

[[noreturn]] void bad_value(const std::string& key, std::size_t line, const std::string& why) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "': " + why, key, line);
}

double to_real(const std::string& key, const Entry& e) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last) bad_value(key, e.line, "expected a number, got '" + e.value + "'");
    if (!std::isfinite(v)) bad_value(key, e.line, "value must be finite");
    return v;
}

std::size_t to_count(const std::string& key, const Entry& e) {
    unsigned long long v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last)
        bad_value(key, e.line, "expected a non-negative integer, got '" + e.value + "'");
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const Entry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    bad_value(key, e.line, "expected true or false, got '" + e.value + "'");
}

std::vector<double> to_list(const std::string& key, const Entry& e) {
    std::vector<double> out;
    std::string_view rest = e.value;
    while (true) {
        const auto comma = rest.find(',');
        const std::string item(trim(rest.substr(0, comma)));
        if (item.empty()) bad_value(key, e.line, "empty list element");
        out.push_back(to_real(key, Entry{item, e.line}));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

// Builder state for the pieces that are assembled after all keys are read.
struct Draft {
    std::string potential_kind = "free";
    double force = 0.0;
    double omega = 1.0;
    double center = 0.0;
    std::vector<double> coefficients;
    std::set<std::string> potential_keys;
    std::optional<double> c_x_min, c_dx, c_x0_min, c_dx0, c_v_center, c_v_halfwidth;
    std::optional<std::size_t> c_n, c_n0, c_nodes;
};

using Setter = std::function<void(Scenario&, Draft&, const std::string&, const Entry&)>;

template <class F>
Setter real(F f) {
    return [f](Scenario& s, Draft& d, const std::string& k, const Entry& e) { f(s, d, to_real(k, e)); };
}
template <class F>
Setter count(F f) {
    return [f](Scenario& s, Draft& d, const std::string& k, const Entry& e) { f(s, d, to_count(k, e)); };
}
template <class F>
Setter flag(F f) {
    return [f](Scenario& s, Draft& d, const std::string& k, const Entry& e) { f(s, d, to_bool(k, e)); };
}

QuadratureRule to_rule(const std::string& key, const Entry& e) {
    if (e.value == "trapezoid") return QuadratureRule::Trapezoid;
    if (e.value == "gauss_legendre") return QuadratureRule::GaussLegendre;
    bad_value(key, e.line, "expected trapezoid or gauss_legendre, got '" + e.value + "'");
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"name", [](Scenario& s, Draft&, const std::string&, const Entry& e) { s.name = e.value; }},
        {"label", [](Scenario& s, Draft&, const std::string&, const Entry& e) { s.label = e.value; }},
        {"system.mass", real([](Scenario& s, Draft&, double v) { s.system.mass = v; })},
        {"system.hbar", real([](Scenario& s, Draft&, double v) { s.system.hbar = v; })},
        {"system.nu", real([](Scenario& s, Draft&, double v) { s.system.nu = v; })},
        {"potential.kind",
         [](Scenario&, Draft& d, const std::string& k, const Entry& e) {
             if (e.value != "free" && e.value != "linear" && e.value != "harmonic" &&
                 e.value != "polynomial")
                 bad_value(k, e.line,
                           "expected free, linear, harmonic or polynomial, got '" + e.value + "'");
             d.potential_kind = e.value;
         }},
        {"potential.force", real([](Scenario&, Draft& d, double v) { d.force = v; })},
        {"potential.omega", real([](Scenario&, Draft& d, double v) { d.omega = v; })},
        {"potential.center", real([](Scenario&, Draft& d, double v) { d.center = v; })},
        {"potential.coefficients",
         [](Scenario&, Draft& d, const std::string& k, const Entry& e) { d.coefficients = to_list(k, e); }},
        {"initial.x0", real([](Scenario& s, Draft&, double v) { s.initial.x0 = v; })},
        {"initial.v0", real([](Scenario& s, Draft&, double v) { s.initial.v0 = v; })},
        {"initial.a0", real([](Scenario& s, Draft&, double v) { s.initial.a0 = v; })},
        {"initial.b0", real([](Scenario& s, Draft&, double v) { s.initial.b0 = v; })},
        {"time.t_final", real([](Scenario& s, Draft&, double v) { s.t_final = v; })},
        {"time.dt_ode", real([](Scenario& s, Draft&, double v) { s.dt_ode = v; })},
        {"time.dt_pde", real([](Scenario& s, Draft&, double v) { s.dt_pde = v; })},
        {"time.snapshot_interval", real([](Scenario& s, Draft&, double v) { s.snapshot_interval = v; })},
        {"grid.x_min", real([](Scenario& s, Draft&, double v) { s.grid.x_min = v; })},
        {"grid.dx", real([](Scenario& s, Draft&, double v) { s.grid.dx = v; })},
        {"grid.n", count([](Scenario& s, Draft&, std::size_t v) { s.grid.n = v; })},
        {"continuity.dx", real([](Scenario& s, Draft&, double v) { s.continuity_dx = v; })},
        {"quadrature.v_center", real([](Scenario& s, Draft&, double v) { s.kernel.quadrature.v_center = v; })},
        {"quadrature.v_halfwidth",
         real([](Scenario& s, Draft&, double v) { s.kernel.quadrature.v_halfwidth = v; })},
        {"quadrature.n_nodes", count([](Scenario& s, Draft&, std::size_t v) { s.kernel.quadrature.n_nodes = v; })},
        {"quadrature.rule", [](Scenario& s, Draft&, const std::string& k,
                               const Entry& e) { s.kernel.quadrature.rule = to_rule(k, e); }},
        {"kernel.t", real([](Scenario& s, Draft&, double v) { s.kernel.t = v; })},
        {"kernel.x_min", real([](Scenario& s, Draft&, double v) { s.kernel.x_grid.x_min = v; })},
        {"kernel.dx", real([](Scenario& s, Draft&, double v) { s.kernel.x_grid.dx = v; })},
        {"kernel.n", count([](Scenario& s, Draft&, std::size_t v) { s.kernel.x_grid.n = v; })},
        {"kernel.x0_min", real([](Scenario& s, Draft&, double v) { s.kernel.x0_grid.x_min = v; })},
        {"kernel.dx0", real([](Scenario& s, Draft&, double v) { s.kernel.x0_grid.dx = v; })},
        {"kernel.n0", count([](Scenario& s, Draft&, std::size_t v) { s.kernel.x0_grid.n = v; })},
        {"kernel.v0_star", real([](Scenario& s, Draft&, double v) { s.kernel.v0_star = v; })},
        {"kernel.alt_a0", real([](Scenario& s, Draft&, double v) { s.kernel.alt_a0 = v; })},
        {"kernel.centering",
         [](Scenario& s, Draft&, const std::string& k, const Entry& e) {
             if (e.value == "source_point")
                 s.kernel.centering = FamilyCentering::SourcePoint;
             else if (e.value == "shared")
                 s.kernel.centering = FamilyCentering::Shared;
             else
                 bad_value(k, e.line, "expected source_point or shared, got '" + e.value + "'");
         }},
        {"causality.times", [](Scenario& s, Draft&, const std::string& k,
                               const Entry& e) { s.kernel.causality_times = to_list(k, e); }},
        {"causality.x_min", real([](Scenario&, Draft& d, double v) { d.c_x_min = v; })},
        {"causality.dx", real([](Scenario&, Draft& d, double v) { d.c_dx = v; })},
        {"causality.n", count([](Scenario&, Draft& d, std::size_t v) { d.c_n = v; })},
        {"causality.x0_min", real([](Scenario&, Draft& d, double v) { d.c_x0_min = v; })},
        {"causality.dx0", real([](Scenario&, Draft& d, double v) { d.c_dx0 = v; })},
        {"causality.n0", count([](Scenario&, Draft& d, std::size_t v) { d.c_n0 = v; })},
        {"causality.v_center", real([](Scenario&, Draft& d, double v) { d.c_v_center = v; })},
        {"causality.v_halfwidth", real([](Scenario&, Draft& d, double v) { d.c_v_halfwidth = v; })},
        {"causality.n_nodes", count([](Scenario&, Draft& d, std::size_t v) { d.c_nodes = v; })},
        {"pipeline.trajectory", flag([](Scenario& s, Draft&, bool v) { s.pipelines.trajectory = v; })},
        {"pipeline.packet", flag([](Scenario& s, Draft&, bool v) { s.pipelines.packet = v; })},
        {"pipeline.pde", flag([](Scenario& s, Draft&, bool v) { s.pipelines.pde = v; })},
        {"pipeline.kernel", flag([](Scenario& s, Draft&, bool v) { s.pipelines.kernel = v; })},
        {"tolerance.residual", real([](Scenario& s, Draft&, double v) { s.tolerance.residual = v; })},
        {"tolerance.closed_form", real([](Scenario& s, Draft&, double v) { s.tolerance.closed_form = v; })},
        {"tolerance.norm", real([](Scenario& s, Draft&, double v) { s.tolerance.norm = v; })},
        {"tolerance.continuity", real([](Scenario& s, Draft&, double v) { s.tolerance.continuity = v; })},
        {"tolerance.pde_norm", real([](Scenario& s, Draft&, double v) { s.tolerance.pde_norm = v; })},
        {"tolerance.ansatz_pde", real([](Scenario& s, Draft&, double v) { s.tolerance.ansatz_pde = v; })},
        {"tolerance.pde_order", real([](Scenario& s, Draft&, double v) { s.tolerance.pde_order = v; })},
        {"tolerance.pde_moments", real([](Scenario& s, Draft&, double v) { s.tolerance.pde_moments = v; })},
        {"tolerance.kernel_reconstruction",
         real([](Scenario& s, Draft&, double v) { s.tolerance.kernel_reconstruction = v; })},
        {"tolerance.free_kernel", real([](Scenario& s, Draft&, double v) { s.tolerance.free_kernel = v; })},
        {"tolerance.kernel_flatness",
         real([](Scenario& s, Draft&, double v) { s.tolerance.kernel_flatness = v; })},
        {"tolerance.a0_sensitivity",
         real([](Scenario& s, Draft&, double v) { s.tolerance.a0_sensitivity = v; })},
        {"tolerance.coherent_peak", real([](Scenario& s, Draft&, double v) { s.tolerance.coherent_peak = v; })},
        {"tolerance.causality", real([](Scenario& s, Draft&, double v) { s.tolerance.causality = v; })},
        {"tolerance.reduction", real([](Scenario& s, Draft&, double v) { s.tolerance.reduction = v; })},
        {"output.dir", [](Scenario& s, Draft&, const std::string&, const Entry& e) { s.output_dir = e.value; }},
    };
    return table;
}

bool whole_multiple(double interval, double dt) {
    const double r = interval / dt;
    return r >= 1.0 - 1e-9 && std::abs(r - std::round(r)) <= 1e-9 * r;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
    throw ConfigError("key '" + key + "': " + why, key, 0);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    std::map<std::string, Entry, std::less<>> entries;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" +
                                  std::string(line) + "'",
                              std::string(line), line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": missing key", key, line_no);
        if (!setters().contains(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", key,
                              line_no);
        if (value.empty()) bad_value(key, line_no, "missing value");
        if (auto it = entries.find(key); it != entries.end())
            bad_value(key, line_no, "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
        entries.emplace(key, Entry{value, line_no});
    }

    Scenario s;
    Draft d;
    for (const auto& [key, entry] : entries) {
        setters().find(key)->second(s, d, key, entry);
        if (key.starts_with("potential.") && key != "potential.kind") d.potential_keys.insert(key);
    }

    const std::map<std::string, std::set<std::string>> used = {
        {"free", {}},
        {"linear", {"potential.force"}},
        {"harmonic", {"potential.omega", "potential.center"}},
        {"polynomial", {"potential.coefficients"}},
    };
    for (const auto& key : d.potential_keys) {
        if (!used.at(d.potential_kind).contains(key)) {
            const auto line = entries.at(key).line;
            bad_value(key, line, "not used by potential.kind = " + d.potential_kind);
        }
    }
    try {
        if (d.potential_kind == "free")
            s.potential = PotentialModel(potential::Free{});
        else if (d.potential_kind == "linear")
            s.potential = PotentialModel(potential::Linear{d.force});
        else if (d.potential_kind == "harmonic")
            s.potential = PotentialModel(potential::Harmonic{d.omega, d.center});
        else {
            if (d.coefficients.empty()) invalid("potential.coefficients", "required for polynomial");
            s.potential = PotentialModel(potential::Polynomial{d.coefficients});
        }
    } catch (const DomainError& e) {
        const std::string key = d.potential_kind == "polynomial" ? "potential.coefficients"
                                                                 : "potential.omega";
        const auto it = entries.find(key);
        throw ConfigError(std::string("key '") + key + "': " + e.what(), key,
                          it == entries.end() ? 0 : it->second.line);
    }

    const bool any_causality = d.c_x_min || d.c_dx || d.c_n || d.c_x0_min || d.c_dx0 || d.c_n0 ||
                               d.c_v_center || d.c_v_halfwidth || d.c_nodes;
    if (any_causality) {
        if (!(d.c_x_min && d.c_dx && d.c_n && d.c_x0_min && d.c_dx0 && d.c_n0 && d.c_v_center &&
              d.c_v_halfwidth && d.c_nodes))
            invalid("causality", "grids and quadrature must be given together");
        s.kernel.causality_x_grid = SpatialGrid{*d.c_x_min, *d.c_dx, *d.c_n};
        s.kernel.causality_x0_grid = SpatialGrid{*d.c_x0_min, *d.c_dx0, *d.c_n0};
        s.kernel.causality_quadrature =
            QuadratureSpec{*d.c_v_center, *d.c_v_halfwidth, *d.c_nodes, s.kernel.quadrature.rule};
    }

    check_scenario(s);
    return s;
}

void check_scenario(const Scenario& s) {
    auto wrap = [](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const std::invalid_argument& e) {
            invalid(key, e.what());
        }
    };
    wrap("system", [&] { validate_system(s.system); });
    if (!(s.initial.a0 > 0.0)) invalid("initial.a0", "must be positive");
    if (!(s.t_final > 0.0)) invalid("time.t_final", "must be positive");
    if (!(s.dt_ode > 0.0)) invalid("time.dt_ode", "must be positive");
    if (!(s.snapshot_interval > 0.0)) invalid("time.snapshot_interval", "must be positive");
    if (s.pipelines.packet && !whole_multiple(s.snapshot_interval, s.dt_ode))
        invalid("time.snapshot_interval", "must be a whole multiple of time.dt_ode");
    if (s.pipelines.packet && !s.pipelines.trajectory)
        invalid("pipeline.packet", "needs pipeline.trajectory");
    if (s.pipelines.packet && !(s.continuity_dx > 0.0)) invalid("continuity.dx", "must be positive");
    if (s.pipelines.packet || s.pipelines.pde) wrap("grid", [&] { check_grid(s.grid); });
    if (s.pipelines.pde) {
        if (!(s.dt_pde > 0.0)) invalid("time.dt_pde", "must be positive");
        if (!is_power_of_two(s.grid.n)) invalid("grid.n", "must be a power of two when pipeline.pde is on");
        if (!whole_multiple(s.snapshot_interval, s.dt_pde))
            invalid("time.snapshot_interval", "must be a whole multiple of time.dt_pde");
        if (!s.pipelines.trajectory) invalid("pipeline.pde", "needs pipeline.trajectory for the comparison");
    }
    if (s.pipelines.kernel) {
        if (!(s.kernel.t > 0.0)) invalid("kernel.t", "must be positive");
        wrap("kernel", [&] {
            check_grid(s.kernel.x_grid);
            check_grid(s.kernel.x0_grid);
        });
        wrap("quadrature", [&] { check_quadrature(s.kernel.quadrature); });
        if (s.kernel.alt_a0 && !(*s.kernel.alt_a0 > 0.0)) invalid("kernel.alt_a0", "must be positive");
        double prev = std::numeric_limits<double>::infinity();
        for (double t : s.kernel.causality_times) {
            if (!(t > 0.0 && t <= 0.05)) invalid("causality.times", "each time must lie in (0, 0.05]");
            if (!(t < prev)) invalid("causality.times", "times must be strictly decreasing");
            prev = t;
        }
        if (!s.kernel.causality_times.empty() && !s.kernel.causality_quadrature)
            invalid("causality", "grids and quadrature are required when causality.times is set");
        if (s.kernel.causality_quadrature) {
            wrap("causality", [&] {
                check_grid(*s.kernel.causality_x_grid);
                check_grid(*s.kernel.causality_x0_grid);
                check_quadrature(*s.kernel.causality_quadrature);
            });
        }
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'", "", 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::vector<std::string> list_scenarios() {
    std::vector<std::string> names;
    for (const auto& b : bundled_scenarios()) names.emplace_back(b.name);
    return names;
}

std::optional<std::string_view> find_bundled(std::string_view name) {
    for (const auto& b : bundled_scenarios())
        if (b.name == name) return b.config;
    return std::nullopt;
}

}  // namespace kostin
