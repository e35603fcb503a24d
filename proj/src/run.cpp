#include "kostin/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "kostin/packet.hpp"

namespace kostin {

bool RunResult::all_pass() const {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

namespace {

void append(std::vector<ComparisonReport>& out, std::vector<ComparisonReport> more) {
    for (auto& r : more) out.push_back(std::move(r));
}

RunResult run_pipelines(const Scenario& s, const Progress& progress) {
    auto say = [&](std::string_view msg) {
        if (progress) progress(msg);
    };
    RunResult r;
    r.scenario = s;
    auto& reports = r.reports;

    if (s.pipelines.trajectory) {
        say("trajectory");
        r.series = integrate(s.initial, s.system, s.potential, s.t_final, s.dt_ode);
        append(reports, trajectory_checks(s, *r.series));
    }
    if (s.pipelines.packet) {
        say("packet");
        for (std::size_t k : snapshot_indices(s, *r.series)) {
            auto f = packet_psi(r.series->states[k], s.system, s.grid);
            f.time_tag = r.series->states[k].t;
            r.packet_snapshots.push_back(std::move(f));
        }
        append(reports, packet_checks(s, *r.series));
    }
    if (s.pipelines.pde) {
        say("pde");
        r.pde_snapshots = run_pde(s, s.dt_pde);
        auto cmp = compare_ansatz_pde(s, r.pde_snapshots);
        const double d = cmp.value;
        reports.push_back(std::move(cmp));
        append(reports, pde_checks(s, r.pde_snapshots));
        if (std::isfinite(s.tolerance.pde_order)) {
            say("pde order");
            reports.push_back(pde_order_check(s, d));
        }
    }
    if (s.pipelines.kernel) {
        say("kernel");
        r.kernel = scenario_kernel(s);
        reports.push_back(compare_kernel_reconstruction(s, *r.kernel));
        append(reports, kernel_checks(s, *r.kernel));
        if (s.system.nu == 0.0) append(reports, schrodinger_reduction_check(s, &*r.kernel));
        if (!s.kernel.causality_times.empty()) {
            say("causality");
            append(reports, causality_check(s));
        }
    } else if (s.system.nu == 0.0 && s.pipelines.trajectory) {
        append(reports, schrodinger_reduction_check(s));
    }
    return r;
}

std::string numbered(std::string_view stem, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%03zu.csv", i);
    return std::string(stem) + buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const Progress& progress) {
    try {
        return run_pipelines(s, progress);
    } catch (const std::exception& e) {
        throw std::runtime_error("scenario '" + s.name + "': " + e.what());
    }
}

std::vector<std::filesystem::path> write_artifacts(const RunResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    const auto& sys = r.scenario.system;
    if (r.series) {
        const auto p = dir / "trajectory.csv";
        auto os = open_out(p);
        write_trajectory_csv(os, *r.series);
        written.push_back(p);
    }
    for (std::size_t i = 0; i < r.packet_snapshots.size(); ++i) {
        const auto p = dir / numbered("packet", i);
        auto os = open_out(p);
        write_snapshot_csv(os, r.packet_snapshots[i], sys);
        written.push_back(p);
    }
    for (std::size_t i = 0; i < r.pde_snapshots.size(); ++i) {
        const auto p = dir / numbered("pde", i);
        auto os = open_out(p);
        write_snapshot_csv(os, r.pde_snapshots[i], sys);
        written.push_back(p);
    }
    if (r.kernel) {
        const auto p = dir / "kernel.csv";
        auto os = open_out(p);
        write_kernel_csv(os, *r.kernel);
        written.push_back(p);
    }
    {
        const auto p = dir / "report.csv";
        auto os = open_out(p);
        write_reports_csv(os, r.reports);
        written.push_back(p);
    }
    {
        const auto p = dir / "report.txt";
        auto os = open_out(p);
        write_reports_text(os, r.reports);
        written.push_back(p);
    }
    return written;
}

}  // namespace kostin
