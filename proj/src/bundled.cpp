#include "kostin/scenario.hpp"

namespace kostin {

namespace {

constexpr std::string_view kFreeSpreading = R"(# Free packet spreading, no friction.
name = free_spreading
system.mass = 1
system.hbar = 1
system.nu = 0
potential.kind = free
initial.x0 = 0
initial.v0 = 0
initial.a0 = 1
initial.b0 = 0
time.t_final = 2
time.dt_ode = 1e-3
time.dt_pde = 1e-3
time.snapshot_interval = 0.25
grid.x_min = -20.48
grid.dx = 0.01
grid.n = 4096
pipeline.trajectory = true
pipeline.packet = true
pipeline.pde = true
tolerance.ansatz_pde = 1e-3
tolerance.pde_moments = 1e-4
output.dir = out/free_spreading
)";

constexpr std::string_view kDampedFree = R"(# Moving packet slowed by friction, no potential.
name = damped_free
system.mass = 1
system.hbar = 1
system.nu = 0.5
potential.kind = free
initial.x0 = 0
initial.v0 = 1
initial.a0 = 1
initial.b0 = 0
time.t_final = 2
time.dt_ode = 1e-3
time.dt_pde = 1e-3
time.snapshot_interval = 0.25
grid.x_min = -20.48
grid.dx = 0.01
grid.n = 4096
pipeline.trajectory = true
pipeline.packet = true
pipeline.pde = true
tolerance.ansatz_pde = 1e-3
tolerance.pde_moments = 1e-4
output.dir = out/damped_free
)";

constexpr std::string_view kHarmonicDamped = R"(# Displaced coherent packet in a damped harmonic well.
name = harmonic_damped
system.mass = 1
system.hbar = 1
system.nu = 0.2
potential.kind = harmonic
potential.omega = 1
potential.center = 0
initial.x0 = 1
initial.v0 = 0
initial.a0 = 0.7071067811865476
initial.b0 = 0
time.t_final = 2
time.dt_ode = 1e-3
time.dt_pde = 2.5e-4
time.snapshot_interval = 0.25
grid.x_min = -20
grid.dx = 0.01953125
grid.n = 2048
pipeline.trajectory = true
pipeline.packet = true
pipeline.pde = true
tolerance.ansatz_pde = 5e-3
tolerance.pde_order = 0.25
tolerance.pde_moments = 1e-3
output.dir = out/harmonic_damped
)";

constexpr std::string_view kCubic = R"(# Weak cubic anharmonicity; the Gaussian closure is only a local expansion here.
name = cubic_linearized
label = linearized-regime only
system.mass = 1
system.hbar = 1
system.nu = 0.3
potential.kind = polynomial
potential.coefficients = 0, 0, 0.5, 0.05
initial.x0 = 0.5
initial.v0 = 0
initial.a0 = 0.7071067811865476
initial.b0 = 0
time.t_final = 0.5
time.dt_ode = 1e-3
time.dt_pde = 2.5e-4
time.snapshot_interval = 0.25
grid.x_min = -20
grid.dx = 0.01953125
grid.n = 2048
pipeline.trajectory = true
pipeline.packet = true
pipeline.pde = true
tolerance.ansatz_pde = 5e-2
output.dir = out/cubic_linearized
)";

constexpr std::string_view kKernelFree = R"(# Free kernel against the closed-form propagator.
name = kernel_free
system.mass = 1
system.hbar = 1
system.nu = 0
potential.kind = free
initial.x0 = 0
initial.v0 = 1
initial.a0 = 1
initial.b0 = 0
time.t_final = 0.5
time.dt_ode = 1e-3
quadrature.v_center = 0
quadrature.v_halfwidth = 60
quadrature.n_nodes = 241
quadrature.rule = trapezoid
kernel.t = 0.5
kernel.x_min = -7.5
kernel.dx = 0.1
kernel.n = 161
kernel.x0_min = -9
kernel.dx0 = 0.1
kernel.n0 = 181
kernel.v0_star = 1
kernel.alt_a0 = 0.5
kernel.centering = source_point
pipeline.trajectory = true
pipeline.kernel = true
tolerance.kernel_reconstruction = 1e-3
output.dir = out/kernel_free
)";

constexpr std::string_view kKernelHarmonic = R"(# Harmonic kernel; the family member at v0 = 0 is a coherent state.
name = kernel_harmonic
system.mass = 1
system.hbar = 1
system.nu = 0
potential.kind = harmonic
potential.omega = 1
potential.center = 0
initial.x0 = 1
initial.v0 = 0
initial.a0 = 0.7071067811865476
initial.b0 = 0
time.t_final = 1
time.dt_ode = 1e-3
quadrature.v_center = 0
quadrature.v_halfwidth = 30
quadrature.n_nodes = 101
quadrature.rule = trapezoid
kernel.t = 1
kernel.x_min = -5
kernel.dx = 0.1
kernel.n = 121
kernel.x0_min = -5
kernel.dx0 = 0.1
kernel.n0 = 121
kernel.v0_star = 0
kernel.centering = source_point
pipeline.trajectory = true
pipeline.kernel = true
tolerance.kernel_reconstruction = 2e-3
output.dir = out/kernel_harmonic
)";

constexpr std::string_view kKernelHarmonicDamped = R"(# Damped harmonic kernel; reconstruction value is a regression bound.
name = kernel_harmonic_damped
label = regression bound
system.mass = 1
system.hbar = 1
system.nu = 0.2
potential.kind = harmonic
potential.omega = 1
potential.center = 0
initial.x0 = 1
initial.v0 = 0
initial.a0 = 0.7071067811865476
initial.b0 = 0
time.t_final = 1
time.dt_ode = 1e-3
quadrature.v_center = 0
quadrature.v_halfwidth = 30
quadrature.n_nodes = 101
quadrature.rule = trapezoid
kernel.t = 1
kernel.x_min = -5
kernel.dx = 0.1
kernel.n = 121
kernel.x0_min = -5
kernel.dx0 = 0.1
kernel.n0 = 121
kernel.v0_star = 0
kernel.centering = source_point
pipeline.trajectory = true
pipeline.kernel = true
tolerance.kernel_reconstruction = 0.1583
output.dir = out/kernel_harmonic_damped
)";

constexpr std::string_view kCausalityDamped = R"(# Reconstruction error as t -> 0 for a damped free family.
name = causality_damped
system.mass = 1
system.hbar = 1
system.nu = 0.2
potential.kind = free
initial.x0 = 0
initial.v0 = 1
initial.a0 = 0.25
initial.b0 = 0
time.t_final = 0.04
time.dt_ode = 1e-3
quadrature.v_center = 0
quadrature.v_halfwidth = 676
quadrature.n_nodes = 677
quadrature.rule = trapezoid
kernel.t = 0.04
kernel.x_min = -2
kernel.dx = 0.016
kernel.n = 251
kernel.x0_min = -2
kernel.dx0 = 0.016
kernel.n0 = 251
kernel.v0_star = 1
kernel.centering = source_point
causality.times = 0.04, 0.02, 0.01
causality.x_min = -2
causality.dx = 0.016
causality.n = 251
causality.x0_min = -2
causality.dx0 = 0.016
causality.n0 = 251
causality.v_center = 0
causality.v_halfwidth = 676
causality.n_nodes = 677
pipeline.trajectory = true
pipeline.kernel = true
tolerance.causality = 2e-3
output.dir = out/causality_damped
)";

}  // namespace

const std::vector<BundledScenario>& bundled_scenarios() {
    static const std::vector<BundledScenario> all = {
        {"free_spreading", kFreeSpreading},
        {"damped_free", kDampedFree},
        {"harmonic_damped", kHarmonicDamped},
        {"cubic_linearized", kCubic},
        {"kernel_free", kKernelFree},
        {"kernel_harmonic", kKernelHarmonic},
        {"kernel_harmonic_damped", kKernelHarmonicDamped},
        {"causality_damped", kCausalityDamped},
    };
    return all;
}

}  // namespace kostin
