#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rdv/constants.hpp"
#include "rdv/elements.hpp"
#include "rdv/vec3.hpp"

namespace rdv {

enum class TerminalModel { two_body_terminal, fully_perturbed };

// Search-space encoding of a multiple-impulse transfer: n time ratios in
// [0,1] (decoded to a non-decreasing maneuver-time sequence) plus the first
// n-2 impulse vectors. The last two impulses come from the terminal
// boundary-value problem.
struct DesignVector {
    std::vector<double> etas;    // n ratios in [0, 1]
    std::vector<Vec3> impulses;  // n-2 free impulse vectors [m/s]
};

struct TransferSolution {
    std::vector<double> maneuver_times;  // n offsets from the departure epoch [s]
    std::vector<Vec3> impulses;          // n impulse vectors [m/s]
    double total_dv = 0.0;               // sum of impulse norms [m/s]
    double pos_residual = 0.0;           // terminal position mismatch [m]
    double vel_residual = 0.0;           // terminal velocity mismatch [m/s]
    TerminalModel model = TerminalModel::two_body_terminal;
};

struct OptimizerConfig {
    int n_impulses = 5;
    int restarts = 100;
    int de_population = 100;
    int de_generations = 3000;
    double de_weight = 0.7;     // differential weight F
    double de_crossover = 0.9;  // crossover rate CR
    std::uint64_t seed = 0;
    double eps_r = 1.0;    // acceptable terminal position error [m]
    double eps_v = 0.01;   // acceptable terminal velocity error [m/s]
    double impulse_bound = 300.0;  // per-component bound on free impulses [m/s]
    double impulse_init_bound = 60.0;  // initialization range for half the population [m/s]
    double de_dither = 0.6;            // per-generation uniform dither on the weight
    int de_phases = 3;                 // extra phases re-center the population on the incumbent
    int refine_max_evals = 3000;   // local-refinement evaluation budget
    int jobs = 1;                  // parallel restart workers
    PhysicalConstants constants;

    void validate() const {
        if (n_impulses < 3) throw std::invalid_argument("n_impulses must be >= 3");
        if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
        if (!(eps_r > 0.0) || !(eps_v > 0.0)) throw std::invalid_argument("eps_r and eps_v must be positive");
        if (de_population < 5) throw std::invalid_argument("de_population must be >= 5");
        if (de_generations < 1) throw std::invalid_argument("de_generations must be >= 1");
    }
};

struct EvaluatedCandidate {
    TransferSolution solution;
    double objective = 0.0;  // total_dv plus infeasibility penalty [m/s]
    bool feasible = false;
};

// Thrown by optimize_transfer when no restart produced a feasible solution;
// carries the best residuals seen for diagnostics.
class OptimizationFailure : public std::runtime_error {
public:
    OptimizationFailure(const std::string& what, double pos_res, double vel_res)
        : std::runtime_error(what), best_pos_residual(pos_res), best_vel_residual(vel_res) {}
    double best_pos_residual;
    double best_vel_residual;
};

// Decodes time ratios into maneuver times: T_n = eta_n * dt_max and
// T_i = eta_i * T_{i+1} for i < n. The output is non-decreasing by
// construction.
std::vector<double> decode_times(const std::vector<double>& etas, double dt_max);

// Inverse of decode_times (eta_i = 1 where T_{i+1} = 0).
std::vector<double> encode_times(const std::vector<double>& times, double dt_max);

// Simulates one candidate under the search model: secular-J2 coasts with the
// free impulses applied at the decoded times, a two-body terminal leg closed
// by the Lambert solver. Terminal failures mark the candidate infeasible and
// penalize the objective.
EvaluatedCandidate evaluate_candidate(const DesignVector& x, const OrbitalElements& dep,
                                      const OrbitalElements& tgt, double dt_max,
                                      const OptimizerConfig& cfg);

// Same candidate encoding evaluated under the fully perturbed model: every
// leg (including the target's) coasts with secular J2 and the terminal leg is
// closed by an aim-point-shifted Lambert shooting loop. The terminal-leg
// duration is capped at one period of the pre-terminal chaser orbit.
EvaluatedCandidate evaluate_candidate_perturbed(const DesignVector& x, const OrbitalElements& dep,
                                                const OrbitalElements& tgt, double dt_max,
                                                const OptimizerConfig& cfg);

// One differential-evolution run (DE/best/1/bin) over the design space under
// the two-body-terminal model. Deterministic for a fixed seed.
EvaluatedCandidate optimize_global(const OrbitalElements& dep, const OrbitalElements& tgt,
                                   double dt_max, const OptimizerConfig& cfg, std::uint64_t seed);
EvaluatedCandidate optimize_global(const OrbitalElements& dep, const OrbitalElements& tgt,
                                   double dt_max, const OptimizerConfig& cfg);

// Local refinement of a two-body-terminal solution under the fully perturbed
// model (Nelder-Mead descent on the penalized objective). Returns the refined
// candidate; .feasible reports whether the terminal tolerances were met.
EvaluatedCandidate refine_perturbed(const TransferSolution& init, const OrbitalElements& dep,
                                    const OrbitalElements& tgt, double dt_max,
                                    const OptimizerConfig& cfg);

// Full two-step pipeline: cfg.restarts independent (global + refine) runs
// with distinct sub-seeds; returns the feasible solution with minimum total
// dv (ties broken by lowest sub-seed). Throws OptimizationFailure if every
// restart is infeasible.
TransferSolution optimize_transfer(const OrbitalElements& dep, const OrbitalElements& tgt,
                                   double dt_max, const OptimizerConfig& cfg);

}  // namespace rdv
