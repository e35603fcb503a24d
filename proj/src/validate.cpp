#include "kostin/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "kostin/csv.hpp"
#include "kostin/error.hpp"
#include "kostin/packet.hpp"
#include "kostin/pde.hpp"

namespace kostin {

namespace {

std::string grid_text(const SpatialGrid& g) {
    return "x_min=" + format_double(g.x_min) + ";dx=" + format_double(g.dx) +
           ";n=" + std::to_string(g.n);
}

std::size_t step_ratio(double interval, double dt) {
    return static_cast<std::size_t>(std::llround(interval / dt));
}

// Closed-form centre for free motion with friction.
double free_center(const InitialConditions& ic, double nu, double t) {
    if (nu == 0.0) return ic.x0 + ic.v0 * t;
    return ic.x0 + ic.v0 * (-std::expm1(-nu * t)) / nu;
}

double classical_harmonic(const potential::Harmonic& h, double x0, double v0, double t) {
    return h.center + (x0 - h.center) * std::cos(h.omega * t) + v0 / h.omega * std::sin(h.omega * t);
}

ComplexGridField analytic_at(const Scenario& s, double t, const SpatialGrid& grid) {
    const TrajectoryState st = t > 0.0 ? advance(s.initial, s.system, s.potential, t, s.dt_ode)
                                       : initial_state(s.initial, s.system);
    auto f = packet_psi(st, s.system, grid);
    f.time_tag = t;
    return f;
}

// Index range [n/4, n - n/4) of the central half of a grid.
std::pair<std::size_t, std::size_t> central_half(std::size_t n) { return {n / 4, n - n / 4}; }

}  // namespace

ComparisonReport make_report(const Scenario& s, std::string metric, double value, double tolerance,
                             std::string metadata) {
    ComparisonReport r;
    r.scenario = s.name;
    r.metric = std::move(metric);
    r.value = value;
    r.tolerance = tolerance;
    r.pass = value <= tolerance;
    r.label = s.label;
    r.metadata = std::move(metadata);
    return r;
}

std::vector<ComparisonReport> trajectory_checks(const Scenario& s, const TrajectorySeries& series) {
    std::vector<ComparisonReport> out;
    const std::string meta = "states=" + std::to_string(series.states.size()) +
                             ";dt=" + format_double(series.dt);

    double worst = 0.0;
    for (const auto& st : series.states) {
        const auto rates = derivatives(st, s.system, s.potential);
        const auto c = residual_coefficients(st, rates, s.system, s.potential);
        worst = std::max({worst, std::abs(c.c0), std::abs(c.c1), std::abs(c.c2)});
    }
    out.push_back(make_report(s, "coefficient_residual", worst, s.tolerance.residual, meta));

    const auto& ic = s.initial;
    const double nu = s.system.nu;
    if (s.potential.is_free()) {
        double dq = 0.0, dv = 0.0, da = 0.0;
        const double spread = s.system.hbar / (2.0 * s.system.mass * ic.a0);
        for (const auto& st : series.states) {
            dq = std::max(dq, std::abs(st.q - free_center(ic, nu, st.t)));
            dv = std::max(dv, std::abs(st.qdot - ic.v0 * std::exp(-nu * st.t)));
            if (nu == 0.0)
                da = std::max(da, std::abs(st.a - std::hypot(ic.a0 + ic.b0 * st.t, spread * st.t)));
        }
        out.push_back(make_report(s, "closed_form_center", dq, s.tolerance.closed_form, meta));
        out.push_back(make_report(s, "closed_form_velocity", dv, s.tolerance.closed_form, meta));
        if (nu == 0.0) out.push_back(make_report(s, "closed_form_width", da, s.tolerance.closed_form, meta));
    } else if (const auto* h = std::get_if<potential::Harmonic>(&s.potential.kind())) {
        if (nu == 0.0 && h->omega > 0.0) {
            double dq = 0.0;
            for (const auto& st : series.states)
                dq = std::max(dq, std::abs(st.q - classical_harmonic(*h, ic.x0, ic.v0, st.t)));
            out.push_back(make_report(s, "closed_form_center", dq, s.tolerance.closed_form, meta));
        }
        if (nu > 0.0) {
            // Mechanical energy of the centre may only decrease under friction.
            double rise = -std::numeric_limits<double>::infinity();
            double prev = 0.0;
            for (std::size_t k = 0; k < series.states.size(); ++k) {
                const auto& st = series.states[k];
                const double e = 0.5 * s.system.mass * st.qdot * st.qdot +
                                 potential_eval(s.potential, s.system, st.q, st.t).value;
                if (k > 0) rise = std::max(rise, e - prev);
                prev = e;
            }
            out.push_back(make_report(s, "energy_increase_per_step", rise, 1e-8, meta));
        }
    }
    return out;
}

std::vector<std::size_t> snapshot_indices(const Scenario& s, const TrajectorySeries& series) {
    const std::size_t stride = std::max<std::size_t>(1, step_ratio(s.snapshot_interval, series.dt));
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < series.states.size(); k += stride) idx.push_back(k);
    if (idx.back() != series.states.size() - 1) idx.push_back(series.states.size() - 1);
    return idx;
}

std::vector<ComparisonReport> packet_checks(const Scenario& s, const TrajectorySeries& series) {
    double norm_dev = 0.0;
    double cont = 0.0;
    const auto& states = series.states;
    const double span = s.grid.x_max() - s.grid.x_min;
    const auto fine = SpatialGrid::closed(
        s.grid.x_min, s.grid.x_max(), static_cast<std::size_t>(std::llround(span / s.continuity_dx)) + 1);
    for (std::size_t k : snapshot_indices(s, series)) {
        const auto f = packet_psi(states[k], s.system, s.grid);
        const double n = l2_norm(f);
        norm_dev = std::max(norm_dev, std::abs(n * n - 1.0));
        if (states.size() < 2) continue;
        const std::size_t a = k + 1 < states.size() ? k : k - 1;
        auto f0 = packet_psi(states[a], s.system, fine);
        auto f1 = packet_psi(states[a + 1], s.system, fine);
        f0.time_tag = states[a].t;
        f1.time_tag = states[a + 1].t;
        cont = std::max(cont, continuity_residual(f0, f1, s.system));
    }
    const std::string dt = ";dt=" + format_double(series.dt);
    return {make_report(s, "packet_norm_deviation", norm_dev, s.tolerance.norm, grid_text(s.grid) + dt),
            make_report(s, "continuity_residual", cont, s.tolerance.continuity, grid_text(fine) + dt)};
}

std::vector<ComplexGridField> run_pde(const Scenario& s, double dt_pde) {
    const auto st0 = initial_state(s.initial, s.system);
    const auto f0 = packet_psi(st0, s.system, s.grid);
    PhaseGauge gauge;
    gauge.phase.reserve(s.grid.n);
    for (std::size_t j = 0; j < s.grid.n; ++j)
        gauge.phase.push_back(packet_phase(st0, s.system, s.grid.x(j)));
    SolverConfig cfg;
    cfg.grid = s.grid;
    cfg.dt = dt_pde;
    const std::size_t every = std::max<std::size_t>(1, step_ratio(s.snapshot_interval, dt_pde));
    return kostin_evolve(f0, s.system, s.potential, cfg, s.t_final, every, std::move(gauge));
}

ComparisonReport compare_ansatz_pde(const Scenario& s, const std::vector<ComplexGridField>& pde) {
    double worst = 0.0;
    for (const auto& f : pde) {
        const auto ref = analytic_at(s, f.time_tag, s.grid);
        worst = std::max(worst, relative_l2_distance(f, ref));
    }
    const std::string meta = grid_text(s.grid) + ";dt_pde=" + format_double(s.dt_pde) +
                             ";checkpoints=" + std::to_string(pde.size()) +
                             ";t_end=" + format_double(pde.back().time_tag);
    return make_report(s, "ansatz_pde_distance", worst, s.tolerance.ansatz_pde, meta);
}

ComparisonReport compare_ansatz_pde(const Scenario& s) { return compare_ansatz_pde(s, run_pde(s, s.dt_pde)); }

std::vector<ComparisonReport> pde_checks(const Scenario& s, const std::vector<ComplexGridField>& pde) {
    std::vector<ComparisonReport> out;
    const auto m0 = density_moments(pde.front());
    double drift = 0.0;
    double moments = 0.0;
    std::vector<DensityMoments> ms;
    for (const auto& f : pde) {
        const auto m = density_moments(f);
        ms.push_back(m);
        const double steps = std::round(f.time_tag / s.dt_pde);
        drift = std::max(drift, std::abs(m.norm - m0.norm) / std::max(1.0, steps / 1000.0));
        const TrajectoryState st = f.time_tag > 0.0
                                       ? advance(s.initial, s.system, s.potential, f.time_tag, s.dt_ode)
                                       : initial_state(s.initial, s.system);
        moments = std::max({moments, std::abs(m.mean - st.q), std::abs(std::sqrt(m.variance) - st.a)});
    }
    const std::string meta = grid_text(s.grid) + ";dt_pde=" + format_double(s.dt_pde);
    out.push_back(make_report(s, "pde_norm_drift_per_1000_steps", drift, s.tolerance.pde_norm, meta));
    out.push_back(make_report(s, "pde_moments_vs_trajectory", moments, s.tolerance.pde_moments, meta));

    if (s.potential.is_free() && s.system.nu > 0.0 && s.initial.v0 != 0.0 && pde.size() >= 3) {
        // Centroid speed between consecutive snapshots must fall monotonically.
        double rise = -std::numeric_limits<double>::infinity();
        double prev = 0.0;
        for (std::size_t k = 1; k < pde.size(); ++k) {
            const double speed =
                std::abs(ms[k].mean - ms[k - 1].mean) / (pde[k].time_tag - pde[k - 1].time_tag);
            if (k > 1) rise = std::max(rise, speed - prev);
            prev = speed;
        }
        out.push_back(make_report(s, "centroid_speed_increase", rise, 0.0, meta));
    }
    return out;
}

ComparisonReport pde_order_check(const Scenario& s, double at_dt) {
    const double coarse = compare_ansatz_pde(s, run_pde(s, 2.0 * s.dt_pde)).value;
    const double ratio = coarse / at_dt;
    const std::string meta = "d(2dt)=" + format_double(coarse) + ";d(dt)=" + format_double(at_dt) +
                             ";ratio=" + format_double(ratio);
    return make_report(s, "pde_order_deviation", std::abs(std::log2(ratio) - 2.0), s.tolerance.pde_order,
                       meta);
}

PropagatorKernel scenario_kernel(const Scenario& s) {
    const FamilyParams fam{s.initial.x0, s.initial.a0, s.initial.b0};
    KernelOptions opt;
    opt.centering = s.kernel.centering;
    return kernel_eval(fam, s.system, s.potential, s.kernel.t, s.dt_ode, s.kernel.quadrature,
                       s.kernel.x_grid, s.kernel.x0_grid, opt);
}

ComparisonReport compare_kernel_reconstruction(const Scenario& s, const PropagatorKernel& k) {
    const double d = reconstruction_distance(k, s.system, s.potential, s.kernel.v0_star, s.dt_ode);
    const std::string meta = "t=" + format_double(k.t) + ";v0_star=" + format_double(s.kernel.v0_star) +
                             ";nodes=" + std::to_string(k.quadrature.n_nodes) +
                             ";v_halfwidth=" + format_double(k.quadrature.v_halfwidth) +
                             ";x0_grid:" + grid_text(k.x0_grid);
    return make_report(s, "kernel_reconstruction_distance", d, s.tolerance.kernel_reconstruction, meta);
}

ComparisonReport compare_kernel_reconstruction(const Scenario& s) {
    return compare_kernel_reconstruction(s, scenario_kernel(s));
}

std::vector<ComparisonReport> kernel_checks(const Scenario& s, const PropagatorKernel& k) {
    std::vector<ComparisonReport> out;
    if (!(s.potential.is_free() && s.system.nu == 0.0)) return out;
    const double ref = std::abs(free_propagator(s.system, 0.0, 0.0, k.t));
    const auto [i0, i1] = central_half(k.x_grid.n);
    const auto [j0, j1] = central_half(k.x0_grid.n);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = i0; i < i1; ++i)
        for (std::size_t j = j0; j < j1; ++j) {
            const double m = std::abs(k(i, j));
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    out.push_back(make_report(s, "kernel_modulus_spread", (hi - lo) / ref, s.tolerance.kernel_flatness,
                              "central half"));
    if (s.kernel.alt_a0) {
        Scenario alt = s;
        alt.initial.a0 = *s.kernel.alt_a0;
        const auto k2 = scenario_kernel(alt);
        double worst = 0.0;
        for (std::size_t i = i0; i < i1; ++i)
            for (std::size_t j = j0; j < j1; ++j) worst = std::max(worst, std::abs(k(i, j) - k2(i, j)) / ref);
        out.push_back(make_report(s, "kernel_a0_sensitivity", worst, s.tolerance.a0_sensitivity,
                                  "a0=" + format_double(s.initial.a0) + ";alt_a0=" +
                                      format_double(*s.kernel.alt_a0) + ";central half"));
    }
    return out;
}

std::vector<ComparisonReport> causality_check(const Scenario& s) {
    std::vector<ComparisonReport> out;
    const auto& times = s.kernel.causality_times;
    if (times.empty()) return out;
    const FamilyParams fam{s.initial.x0, s.initial.a0, s.initial.b0};
    KernelOptions opt;
    opt.centering = s.kernel.centering;
    std::vector<double> d;
    for (std::size_t i = 0; i < times.size(); ++i) {
        d.push_back(causality_probe(fam, s.system, s.potential, *s.kernel.causality_quadrature,
                                    s.kernel.v0_star, times[i], s.dt_ode, *s.kernel.causality_x_grid,
                                    *s.kernel.causality_x0_grid, 1.0, opt));
        const bool last = i + 1 == times.size();
        out.push_back(make_report(s, "causality_distance_t=" + format_double(times[i]), d.back(),
                                  last ? s.tolerance.causality : kUnchecked,
                                  "x0_grid:" + grid_text(*s.kernel.causality_x0_grid)));
    }
    double bad = 0.0;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (!(d[i] < d[i - 1])) bad += 1.0;
    out.push_back(make_report(s, "causality_nonmonotone_pairs", bad, 0.0, "strictly decreasing as t -> 0"));
    return out;
}

double density_peak(const ComplexGridField& f) {
    const std::size_t n = f.values.size();
    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::norm(f.values[i]) > std::norm(f.values[j])) j = i;
    if (j == 0 || j + 1 == n) return f.grid.x(j);
    const double lm = std::log(std::norm(f.values[j - 1]));
    const double l0 = std::log(std::norm(f.values[j]));
    const double lp = std::log(std::norm(f.values[j + 1]));
    const double curv = lm - 2.0 * l0 + lp;
    if (!(curv < 0.0)) return f.grid.x(j);
    return f.grid.x(j) + 0.5 * (lm - lp) / curv * f.grid.dx;
}

std::vector<ComparisonReport> schrodinger_reduction_check(const Scenario& s, const PropagatorKernel* k) {
    if (s.system.nu != 0.0) throw DomainError("schrodinger reduction check needs nu = 0");
    std::vector<ComparisonReport> out;

    PhysicalSystem plain = s.system;
    plain.nu = 0.0;
    const auto st = advance(s.initial, s.system, s.potential, s.t_final, s.dt_ode);
    const auto st_plain = advance(s.initial, plain, s.potential, s.t_final, s.dt_ode);
    const auto grid = SpatialGrid::closed(st.q - 12.0 * st.a, st.q + 12.0 * st.a, 1025);
    const double d = relative_l2_distance(packet_psi(st, s.system, grid), packet_psi(st_plain, plain, grid));
    out.push_back(make_report(s, "reduction_packet_distance", d, s.tolerance.reduction,
                              "t=" + format_double(s.t_final)));

    if (k == nullptr) return out;
    if (s.potential.is_free()) {
        const auto [i0, i1] = central_half(k->x_grid.n);
        const auto [j0, j1] = central_half(k->x0_grid.n);
        double worst = 0.0;
        for (std::size_t i = i0; i < i1; ++i)
            for (std::size_t j = j0; j < j1; ++j) {
                const cplx ref = free_propagator(s.system, k->x_grid.x(i), k->x0_grid.x(j), k->t);
                worst = std::max(worst, std::abs(k->operator()(i, j) - ref) / std::abs(ref));
            }
        out.push_back(make_report(s, "free_kernel_error", worst, s.tolerance.free_kernel,
                                  "t=" + format_double(k->t) + ";central half"));
    } else if (const auto* h = std::get_if<potential::Harmonic>(&s.potential.kind()); h && h->omega > 0.0) {
        const InitialConditions ic{k->family.center, s.kernel.v0_star, k->family.a0, k->family.b0};
        const auto psi0 = packet_psi(initial_state(ic, s.system), s.system, k->x0_grid);
        const double peak = density_peak(propagate(*k, psi0));
        const double expected = classical_harmonic(*h, ic.x0, ic.v0, k->t);
        out.push_back(make_report(s, "coherent_peak_error", std::abs(peak - expected),
                                  s.tolerance.coherent_peak,
                                  "t=" + format_double(k->t) + ";expected=" + format_double(expected)));
    }
    return out;
}

namespace {

std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void write_reports_csv(std::ostream& os, const std::vector<ComparisonReport>& reports) {
    os << "scenario,metric,value,tolerance,pass,label,metadata\n";
    for (const auto& r : reports) {
        os << csv_field(r.scenario) << ',' << csv_field(r.metric) << ',' << format_double(r.value) << ','
           << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << ','
           << csv_field(r.label) << ',' << csv_field(r.metadata) << '\n';
    }
}

void write_reports_text(std::ostream& os, const std::vector<ComparisonReport>& reports) {
    std::size_t width = 0;
    for (const auto& r : reports) width = std::max(width, r.metric.size());
    std::size_t failed = 0;
    for (const auto& r : reports) {
        std::ostringstream line;
        line << (r.pass ? "PASS  " : "FAIL  ") << r.scenario << "  " << r.metric
             << std::string(width - r.metric.size() + 2, ' ') << format_double(r.value);
        if (std::isfinite(r.tolerance))
            line << " <= " << format_double(r.tolerance);
        else
            line << " (reported)";
        if (!r.label.empty()) line << "  [" << r.label << "]";
        os << line.str() << '\n';
        if (!r.pass) ++failed;
    }
    os << reports.size() - failed << "/" << reports.size() << " checks passed\n";
}

}  // namespace kostin
