#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "fclab/functionals.hpp"
#include "fclab/grid.hpp"
#include "fclab/params.hpp"

namespace fclab {

struct SolverConfig {
    int max_iters = 400;             // outer descent iterations
    double pde_residual_tol = 1e-6;
    // |P|/kinetic at the returned state.  The discrete dilation functional of
    // a residual-converged state carries an O(1/L) boundary defect from the
    // algebraic tails, so this tolerance is percent-scale, not zero-scale.
    double pohozaev_tol = 5e-2;
    double step_init = 0.5;
    double armijo_c = 1e-4;
    int multistart_count = 1;
    std::uint64_t seed = 0;
    bool continuation = true;        // warm-start sweeps from the neighboring c
    // Newton residual polish after the projected descent phase; descent alone
    // stalls at ~1e-2 residual because the energy is C^1 but not C^2 (the
    // q < 2 Hartree second derivative is singular where u is small).
    bool polish = true;
    int newton_iters = 80;
    double descent_switch_tol = 2e-2; // hand off to the polish below this residual
    double truncation_threshold = 2e-3;
};

struct TraceEntry {
    int iter = 0;
    double j = 0;
    double residual = 0;
    char phase = 'd'; // 'd' descent, 'n' newton polish
};

struct SolverResult {
    Field field;                 // nonnegative, mass = c^2 to 1e-12 relative
    double lambda = 0;
    double m1 = 0;               // J at the returned state
    double pde_residual = 0;
    double pohozaev_residual = 0; // |P|/kinetic
    double nehari_residual = 0;   // |n_c|/(kinetic - lambda mass)
    std::vector<TraceEntry> trace;
    bool converged = false;
    double multistart_best_gap = 0; // spread of J across converged starts
    std::string flag;               // diagnosis when converged is false
};

// Ground state at mass c by projected preconditioned descent on the zero set
// of the dilation functional (closed-form inner maximization), then Newton
// polish of the full first-order system.  Non-convergence is reported, not
// thrown.  A converged result additionally passes the spuriousness screens
// (lambda < 0, boundary shell below the truncation threshold).
SolverResult ground_state(const ProblemParams& pp, const Grid& g,
                          const SolverConfig& cfg,
                          const Field* warm_start = nullptr);

} // namespace fclab
