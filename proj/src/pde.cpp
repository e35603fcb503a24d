#include "kostin/pde.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "kostin/error.hpp"

namespace kostin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Effective duration of a pointwise phase sub-step. With |psi| frozen the
// phase obeys dS/dt = -(V/hbar + nu S), whose exact flow over tau moves S by
// -(V/hbar + nu S) (1 - exp(-nu tau)) / nu.
double phase_flow_time(double nu, double tau) {
    if (nu == 0.0) return tau;
    return -std::expm1(-nu * tau) / nu;
}

}  // namespace

struct KostinSolver::Fft {
    explicit Fft(std::size_t n) : size(n) {
        buffer = fftw_alloc_complex(n);
        forward = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buffer);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buffer); }

    std::size_t size;
    fftw_complex* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

void check_solver_config(const SolverConfig& cfg) {
    check_grid(cfg.grid);
    if (!is_power_of_two(cfg.grid.n)) throw DomainError("solver grid size must be a power of two");
    if (!(cfg.dt > 0.0)) throw DomainError("solver dt must be positive");
    if (!(cfg.mask_threshold > 0.0)) throw DomainError("mask threshold must be positive");
}

KostinSolver::KostinSolver(const PhysicalSystem& sys, const PotentialModel& pot,
                           const SolverConfig& cfg)
    : sys_(validate_system(sys)), pot_(pot), cfg_(cfg) {
    check_solver_config(cfg_);
    const std::size_t n = cfg_.grid.n;
    potential_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        potential_[j] = potential_eval(pot_, sys_, cfg_.grid.x(j), 0.0).value;
    }
    kinetic_.resize(n);
    const double dk = kTwoPi / (static_cast<double>(n) * cfg_.grid.dx);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = dk * (j < n / 2 ? static_cast<double>(j)
                                         : static_cast<double>(j) - static_cast<double>(n));
        // The 1/n normalisation of the inverse FFT is folded in here.
        kinetic_[j] = std::polar(scale, -sys_.hbar * k * k * cfg_.dt / (2.0 * sys_.mass));
    }
    fft_ = std::make_unique<Fft>(n);
}

KostinSolver::~KostinSolver() = default;
KostinSolver::KostinSolver(KostinSolver&&) noexcept = default;
KostinSolver& KostinSolver::operator=(KostinSolver&&) noexcept = default;

void KostinSolver::check_edges(const std::vector<cplx>& psi, double t) const {
    double peak = 0.0;
    for (const auto& z : psi) peak = std::max(peak, std::norm(z));
    const double edge = std::max(std::norm(psi.front()), std::norm(psi.back()));
    if (edge > cfg_.edge_tolerance * peak) {
        std::ostringstream msg;
        msg << "packet too close to the periodic boundary at t = " << t << " (edge density "
            << edge / peak << " of peak)";
        throw SolverError(msg.str(), t);
    }
}

std::vector<double> KostinSolver::aligned_phase(const ComplexGridField& f,
                                                const std::vector<double>& ref, double t) const {
    HydroFields h = madelung_decompose(f, sys_, cfg_.mask_threshold);
    if (!h.connected) {
        std::ostringstream msg;
        msg << "unwrapping region split into disconnected pieces at t = " << t;
        throw SolverError(msg.str(), t);
    }
    if (!ref.empty()) {
        const double shift = kTwoPi * std::round((ref[h.peak] - h.S[h.peak]) / kTwoPi);
        if (shift != 0.0) {
            for (double& s : h.S) s += shift;
        }
    }
    return std::move(h.S);
}

void KostinSolver::potential_half_step(std::vector<cplx>& psi, std::vector<double>& S) const {
    const double tau = phase_flow_time(sys_.nu, 0.5 * cfg_.dt);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double delta = -(potential_[j] / sys_.hbar + sys_.nu * S[j]) * tau;
        psi[j] *= std::polar(1.0, delta);
        S[j] += delta;
    }
}

ComplexGridField KostinSolver::step(const ComplexGridField& f, PhaseGauge& gauge) {
    if (!same_grid(f.grid, cfg_.grid) || f.values.size() != cfg_.grid.n) {
        throw GridMismatch("kostin step: field grid differs from solver grid");
    }
    const double t = f.time_tag;
    check_edges(f.values, t);

    std::vector<cplx> psi = f.values;
    std::vector<double> S = aligned_phase(f, gauge.phase, t);
    potential_half_step(psi, S);

    cplx* buf = fft_->data();
    std::copy(psi.begin(), psi.end(), buf);
    fftw_execute(fft_->forward);
    for (std::size_t j = 0; j < psi.size(); ++j) buf[j] *= kinetic_[j];
    fftw_execute(fft_->backward);
    std::copy(buf, buf + psi.size(), psi.begin());

    ComplexGridField out{cfg_.grid, std::move(psi), t + cfg_.dt};
    std::vector<double> S_mid = aligned_phase(out, S, t + 0.5 * cfg_.dt);
    potential_half_step(out.values, S_mid);
    gauge.phase = std::move(S_mid);
    check_edges(out.values, out.time_tag);
    return out;
}

namespace {

void check_normalized(const ComplexGridField& f) {
    const double norm = l2_norm(f);
    if (std::abs(norm * norm - 1.0) > 1e-6) {
        throw DomainError("kostin solver expects a field normalized to 1 within 1e-6");
    }
}

}  // namespace

ComplexGridField kostin_step(const ComplexGridField& f, const PhysicalSystem& sys,
                             const PotentialModel& pot, const SolverConfig& cfg) {
    check_normalized(f);
    KostinSolver solver(sys, pot, cfg);
    PhaseGauge gauge;
    return solver.step(f, gauge);
}

std::vector<ComplexGridField> kostin_evolve(const ComplexGridField& f0, const PhysicalSystem& sys,
                                            const PotentialModel& pot, const SolverConfig& cfg,
                                            double t_final, std::size_t snapshot_every,
                                            PhaseGauge gauge) {
    if (snapshot_every == 0) throw DomainError("snapshot_every must be positive");
    check_solver_config(cfg);
    check_normalized(f0);
    std::vector<ComplexGridField> snapshots{f0};
    const auto steps = static_cast<std::size_t>(std::floor(t_final / cfg.dt + 0.5));
    if (t_final < cfg.dt || steps == 0) return snapshots;

    KostinSolver solver(sys, pot, cfg);
    ComplexGridField current = f0;
    for (std::size_t i = 1; i <= steps; ++i) {
        try {
            current = solver.step(current, gauge);
        } catch (const SolverError&) {
            throw;
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << e.what() << " (step " << i << ", t = " << current.time_tag << ")";
            throw SolverError(msg.str(), current.time_tag);
        }
        current.time_tag = f0.time_tag + static_cast<double>(i) * cfg.dt;
        if (i % snapshot_every == 0 || i == steps) snapshots.push_back(current);
    }
    return snapshots;
}

DensityMoments density_moments(const ComplexGridField& f) {
    const std::size_t n = f.values.size();
    std::vector<double> rho(n), xr(n), x2r(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = f.grid.x(j);
        rho[j] = std::norm(f.values[j]);
        xr[j] = x * rho[j];
    }
    DensityMoments m;
    m.norm = trapezoid(rho, f.grid.dx);
    m.mean = trapezoid(xr, f.grid.dx) / m.norm;
    for (std::size_t j = 0; j < n; ++j) {
        const double u = f.grid.x(j) - m.mean;
        x2r[j] = u * u * rho[j];
    }
    m.variance = trapezoid(x2r, f.grid.dx) / m.norm;
    return m;
}

}  // namespace kostin
