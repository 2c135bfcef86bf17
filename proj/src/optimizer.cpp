#include "rdv/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rdv/angles.hpp"
#include "rdv/lambert.hpp"
#include "rdv/propagate.hpp"
#include "rdv/rng.hpp"

namespace rdv {

namespace {

constexpr double kMinLegDuration = 1e-3;    // terminal legs shorter than this are infeasible [s]
constexpr double kPenaltyWeight = 1e6;      // m/s per unit of scaled residual
constexpr double kCatastrophicObjective = 1e15;

double total_impulse(const std::vector<Vec3>& impulses) {
    double sum = 0.0;
    for (const auto& dv : impulses) sum += norm(dv);
    return sum;
}

// Free-impulse phase: secular-J2 coasts with the first n-2 impulses applied
// at their decoded times; returns the chaser elements at T_{n-1}. The applied
// impulses are echoed through `applied` when non-null (they become the head
// of the solution's impulse list).
OrbitalElements coast_with_impulses(const OrbitalElements& dep, const std::vector<double>& times,
                                    const std::vector<Vec3>& impulses, const PhysicalConstants& k,
                                    std::vector<Vec3>* applied = nullptr) {
    OrbitalElements s = dep;
    double t_now = 0.0;
    for (std::size_t i = 0; i < impulses.size(); ++i) {
        s = propagate_j2(s, times[i] - t_now, k);
        t_now = times[i];
        CartesianState cs = elements_to_cartesian(s, k);
        if (applied) applied->push_back(impulses[i]);
        cs.v += impulses[i];
        s = cartesian_to_elements(cs, k);
    }
    return propagate_j2(s, times[impulses.size()] - t_now, k);
}

EvaluatedCandidate infeasible_result(const std::vector<Vec3>& applied_inertial,
                                     const std::vector<double>& times, double pos_res,
                                     double vel_res, double extra_penalty,
                                     const OptimizerConfig& cfg) {
    EvaluatedCandidate out;
    out.solution.maneuver_times = times;
    out.solution.impulses = applied_inertial;
    out.solution.impulses.resize(static_cast<std::size_t>(cfg.n_impulses), Vec3{});
    out.solution.total_dv = total_impulse(applied_inertial);
    out.solution.pos_residual = pos_res;
    out.solution.vel_residual = vel_res;
    out.feasible = false;
    out.objective = out.solution.total_dv + extra_penalty +
                    kPenaltyWeight * (pos_res / cfg.eps_r + vel_res / cfg.eps_v);
    return out;
}

EvaluatedCandidate catastrophic_result(const std::vector<double>& times, const OptimizerConfig& cfg) {
    EvaluatedCandidate out = infeasible_result({}, times, 0.0, 0.0, 0.0, cfg);
    out.objective = kCatastrophicObjective;
    out.solution.pos_residual = std::numeric_limits<double>::max();
    out.solution.vel_residual = std::numeric_limits<double>::max();
    return out;
}

struct ShootingResult {
    bool converged = false;
    Vec3 v_depart;        // post-impulse velocity at T_{n-1}
    CartesianState arrival;  // chaser state at T_n before the final impulse
};

// Perturbed terminal boundary-value problem: solve the two-body problem to a
// shifted aim point, propagate the resulting orbit with secular J2, and move
// the aim by the arrival miss until the miss is inside tol_pos.
ShootingResult shoot_perturbed_leg(const CartesianState& start, const Vec3& r_target, double dt_leg,
                                   const PhysicalConstants& k, double tol_pos) {
    ShootingResult res;
    const Vec3 h_c = cross(start.r, start.v);
    const bool long_way = dot(cross(start.r, r_target), h_c) < 0.0;
    Vec3 aim = r_target;
    for (int it = 0; it < 25; ++it) {
        const LambertOutcome lam = try_solve_lambert(start.r, aim, dt_leg, k.mu, long_way);
        if (lam.status != LambertStatus::ok) return res;
        CartesianState post = start;
        post.v = lam.solution.v1;
        OrbitalElements el;
        try {
            el = cartesian_to_elements(post, k);
        } catch (const std::invalid_argument&) {
            return res;  // impulse kicked the leg non-elliptic
        }
        const CartesianState arrival = elements_to_cartesian(propagate_j2(el, dt_leg, k), k);
        const Vec3 miss = arrival.r - r_target;
        if (norm(miss) <= tol_pos) {
            res.converged = true;
            res.v_depart = lam.solution.v1;
            res.arrival = arrival;
            return res;
        }
        aim -= miss;
    }
    return res;
}

// --- flat vector encoding shared by DE and the local refiner ----------------

std::size_t flat_dim(const OptimizerConfig& cfg) {
    return static_cast<std::size_t>(cfg.n_impulses) + 3u * static_cast<std::size_t>(cfg.n_impulses - 2);
}

DesignVector unflatten(const std::vector<double>& v, const OptimizerConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.n_impulses);
    DesignVector x;
    x.etas.assign(v.begin(), v.begin() + n);
    x.impulses.resize(n - 2);
    for (std::size_t i = 0; i < n - 2; ++i) {
        x.impulses[i] = {v[n + 3 * i], v[n + 3 * i + 1], v[n + 3 * i + 2]};
    }
    return x;
}

std::vector<double> flatten(const DesignVector& x) {
    std::vector<double> v = x.etas;
    for (const auto& dv : x.impulses) {
        v.push_back(dv.x);
        v.push_back(dv.y);
        v.push_back(dv.z);
    }
    return v;
}

void clamp_flat(std::vector<double>& v, const OptimizerConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.n_impulses);
    for (std::size_t d = 0; d < v.size(); ++d) {
        const double lo = d < n ? 0.0 : -cfg.impulse_bound;
        const double hi = d < n ? 1.0 : cfg.impulse_bound;
        v[d] = std::clamp(v[d], lo, hi);
    }
}

// --- Nelder-Mead local descent ----------------------------------------------

template <typename F>
std::vector<double> nelder_mead(F&& f, const std::vector<double>& x0,
                                const std::vector<double>& init_step, int max_evals) {
    const std::size_t dim = x0.size();
    struct Point {
        std::vector<double> x;
        double fx;
    };
    std::vector<Point> simplex;
    simplex.reserve(dim + 1);
    int evals = 0;
    const auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    simplex.push_back({x0, eval(x0)});
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<double> x = x0;
        x[d] += init_step[d];
        simplex.push_back({std::move(x), 0.0});
        simplex.back().fx = eval(simplex.back().x);
    }

    const double rho = 1.0, chi = 2.0, gamma = 0.5, sigma = 0.5;
    while (evals < max_evals) {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Point& a, const Point& b) { return a.fx < b.fx; });
        const double spread = simplex.back().fx - simplex.front().fx;
        if (spread < 1e-9 * std::max(1.0, std::abs(simplex.front().fx))) break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i].x[d];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        const Point& worst = simplex.back();
        std::vector<double> xr(dim);
        for (std::size_t d = 0; d < dim; ++d) xr[d] = centroid[d] + rho * (centroid[d] - worst.x[d]);
        const double fr = eval(xr);

        if (fr < simplex.front().fx) {
            std::vector<double> xe(dim);
            for (std::size_t d = 0; d < dim; ++d) xe[d] = centroid[d] + chi * (xr[d] - centroid[d]);
            const double fe = eval(xe);
            if (fe < fr) simplex.back() = {std::move(xe), fe};
            else simplex.back() = {std::move(xr), fr};
        } else if (fr < simplex[dim - 1].fx) {
            simplex.back() = {std::move(xr), fr};
        } else if (fr < worst.fx) {
            std::vector<double> xc(dim);
            for (std::size_t d = 0; d < dim; ++d) xc[d] = centroid[d] + gamma * (xr[d] - centroid[d]);
            const double fc = eval(xc);
            if (fc <= fr) simplex.back() = {std::move(xc), fc};
            else goto shrink;
        } else {
            std::vector<double> xc(dim);
            for (std::size_t d = 0; d < dim; ++d) xc[d] = centroid[d] - gamma * (centroid[d] - worst.x[d]);
            const double fc = eval(xc);
            if (fc < worst.fx) simplex.back() = {std::move(xc), fc};
            else goto shrink;
        }
        continue;
    shrink:
        for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                simplex[i].x[d] = simplex[0].x[d] + sigma * (simplex[i].x[d] - simplex[0].x[d]);
            }
            simplex[i].fx = eval(simplex[i].x);
            if (evals >= max_evals) break;
        }
    }
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Point& a, const Point& b) { return a.fx < b.fx; });
    return simplex.front().x;
}

}  // namespace

std::vector<double> decode_times(const std::vector<double>& etas, double dt_max) {
    const std::size_t n = etas.size();
    std::vector<double> times(n);
    times[n - 1] = etas[n - 1] * dt_max;
    for (std::size_t i = n - 1; i-- > 0;) times[i] = etas[i] * times[i + 1];
    return times;
}

std::vector<double> encode_times(const std::vector<double>& times, double dt_max) {
    const std::size_t n = times.size();
    std::vector<double> etas(n);
    etas[n - 1] = dt_max > 0.0 ? std::clamp(times[n - 1] / dt_max, 0.0, 1.0) : 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        etas[i] = times[i + 1] > 0.0 ? std::clamp(times[i] / times[i + 1], 0.0, 1.0) : 1.0;
    }
    return etas;
}

EvaluatedCandidate evaluate_candidate(const DesignVector& x, const OrbitalElements& dep,
                                      const OrbitalElements& tgt, double dt_max,
                                      const OptimizerConfig& cfg) {
    const PhysicalConstants& k = cfg.constants;
    const std::vector<double> times = decode_times(x.etas, dt_max);
    try {
        std::vector<Vec3> applied;
        applied.reserve(x.impulses.size());
        const OrbitalElements chaser_pre = coast_with_impulses(dep, times, x.impulses, k, &applied);
        const CartesianState cs = elements_to_cartesian(chaser_pre, k);
        const OrbitalElements tgt_pre =
            propagate_j2(tgt, dep.epoch + times[times.size() - 2] - tgt.epoch, k);
        const CartesianState ts_pre = elements_to_cartesian(tgt_pre, k);
        const double dt_leg = times.back() - times[times.size() - 2];

        if (dt_leg >= kMinLegDuration) {
            const CartesianState tgt_f = propagate_twobody(ts_pre, dt_leg, k.mu);
            const Vec3 h_c = cross(cs.r, cs.v);
            const bool long_way = dot(cross(cs.r, tgt_f.r), h_c) < 0.0;
            const LambertOutcome lam = try_solve_lambert(cs.r, tgt_f.r, dt_leg, k.mu, long_way);
            if (lam.status == LambertStatus::ok) {
                EvaluatedCandidate out;
                out.solution.maneuver_times = times;
                out.solution.impulses = applied;
                out.solution.impulses.push_back(lam.solution.v1 - cs.v);
                out.solution.impulses.push_back(tgt_f.v - lam.solution.v2);
                out.solution.total_dv = total_impulse(out.solution.impulses);
                out.solution.pos_residual = 0.0;  // terminal BVP solved exactly in this model
                out.solution.vel_residual = 0.0;
                out.solution.model = TerminalModel::two_body_terminal;
                out.objective = out.solution.total_dv;
                out.feasible = true;
                return out;
            }
        }
        // No terminal solution: score the ballistic miss.
        const CartesianState chaser_f = dt_leg > 0.0 ? propagate_twobody(cs, dt_leg, k.mu) : cs;
        const CartesianState tgt_f = dt_leg > 0.0 ? propagate_twobody(ts_pre, dt_leg, k.mu) : ts_pre;
        EvaluatedCandidate out = infeasible_result(applied, times, norm(chaser_f.r - tgt_f.r),
                                                   norm(chaser_f.v - tgt_f.v), 0.0, cfg);
        out.solution.model = TerminalModel::two_body_terminal;
        return out;
    } catch (const std::exception&) {
        EvaluatedCandidate out = catastrophic_result(times, cfg);
        out.solution.model = TerminalModel::two_body_terminal;
        return out;
    }
}

EvaluatedCandidate evaluate_candidate_perturbed(const DesignVector& x, const OrbitalElements& dep,
                                                const OrbitalElements& tgt, double dt_max,
                                                const OptimizerConfig& cfg) {
    const PhysicalConstants& k = cfg.constants;
    const std::vector<double> times = decode_times(x.etas, dt_max);
    try {
        std::vector<Vec3> applied;
        applied.reserve(x.impulses.size());
        const OrbitalElements chaser_pre = coast_with_impulses(dep, times, x.impulses, k, &applied);
        const double dt_leg = times.back() - times[times.size() - 2];
        const double period_cap = orbital_period(chaser_pre, k);
        const OrbitalElements tgt_f_el = propagate_j2(tgt, dep.epoch + times.back() - tgt.epoch, k);
        const CartesianState tgt_f = elements_to_cartesian(tgt_f_el, k);

        if (dt_leg >= kMinLegDuration && dt_leg <= period_cap) {
            const CartesianState cs = elements_to_cartesian(chaser_pre, k);
            const ShootingResult shot = shoot_perturbed_leg(cs, tgt_f.r, dt_leg, k, 0.1 * cfg.eps_r);
            if (shot.converged) {
                EvaluatedCandidate out;
                out.solution.maneuver_times = times;
                out.solution.impulses = applied;
                out.solution.impulses.push_back(shot.v_depart - cs.v);
                const Vec3 final_impulse = tgt_f.v - shot.arrival.v;
                out.solution.impulses.push_back(final_impulse);
                out.solution.total_dv = total_impulse(out.solution.impulses);
                out.solution.pos_residual = norm(shot.arrival.r - tgt_f.r);
                out.solution.vel_residual = norm(shot.arrival.v + final_impulse - tgt_f.v);
                out.solution.model = TerminalModel::fully_perturbed;
                out.feasible = out.solution.pos_residual <= cfg.eps_r &&
                               out.solution.vel_residual <= cfg.eps_v;
                out.objective = out.solution.total_dv;
                if (!out.feasible) {
                    out.objective += kPenaltyWeight * (out.solution.pos_residual / cfg.eps_r +
                                                       out.solution.vel_residual / cfg.eps_v);
                }
                return out;
            }
        }
        // Leg duration out of bounds or shooting failed: ballistic miss under J2.
        const CartesianState chaser_f =
            elements_to_cartesian(propagate_j2(chaser_pre, std::max(dt_leg, 0.0), k), k);
        const double cap_penalty =
            dt_leg > period_cap ? kPenaltyWeight * (dt_leg / period_cap - 1.0) : 0.0;
        EvaluatedCandidate out = infeasible_result(applied, times, norm(chaser_f.r - tgt_f.r),
                                                   norm(chaser_f.v - tgt_f.v), cap_penalty, cfg);
        out.solution.model = TerminalModel::fully_perturbed;
        return out;
    } catch (const std::exception&) {
        EvaluatedCandidate out = catastrophic_result(times, cfg);
        out.solution.model = TerminalModel::fully_perturbed;
        return out;
    }
}

EvaluatedCandidate optimize_global(const OrbitalElements& dep, const OrbitalElements& tgt,
                                   double dt_max, const OptimizerConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");

    Rng rng(seed);
    const std::size_t dim = flat_dim(cfg);
    const std::size_t n = static_cast<std::size_t>(cfg.n_impulses);
    const std::size_t pop_size = static_cast<std::size_t>(cfg.de_population);

    const auto eval = [&](const std::vector<double>& v) {
        return evaluate_candidate(unflatten(v, cfg), dep, tgt, dt_max, cfg).objective;
    };

    // Terminal-leg lengths used when seeding "coast then correct" members:
    // eta_{n-1} is set so the last leg spans a fraction of an orbit.
    const double period_frac = orbital_period(dep, cfg.constants) / dt_max;

    std::vector<std::vector<double>> pop(pop_size, std::vector<double>(dim));
    std::vector<double> fitness(pop_size);
    for (std::size_t p = 0; p < pop_size; ++p) {
        // Mixed-scale impulse initialization; every fourth member starts as a
        // pure coasting arc so two-impulse solutions are in the gene pool.
        const double init_bound = (p % 4 == 0)   ? 0.0
                                  : (p % 2 == 0) ? cfg.impulse_init_bound
                                                 : cfg.impulse_bound;
        for (std::size_t d = 0; d < dim; ++d) {
            pop[p][d] = d < n ? rng.uniform01() : rng.uniform(-init_bound, init_bound);
        }
        if (p % 8 == 0) {
            // Half of the coasting seeds use the whole window with a short
            // terminal leg at its very end; long-window optima live there.
            pop[p][n - 1] = rng.uniform(0.9, 1.0);
            const double leg = rng.uniform(0.2, 1.0) * period_frac / pop[p][n - 1];
            pop[p][n - 2] = std::clamp(1.0 - leg, 0.0, 1.0);
        }
        fitness[p] = eval(pop[p]);
    }
    std::size_t best = 0;
    for (std::size_t p = 1; p < pop_size; ++p) {
        if (fitness[p] < fitness[best]) best = p;
    }

    std::vector<double> trial(dim);
    const int phases = std::max(1, cfg.de_phases);
    for (int phase = 0; phase < phases; ++phase) {
        if (phase > 0) {
            // Intensification restart: re-seed everything except the incumbent
            // in a progressively tighter box around it.
            const double shrink = std::pow(0.35, phase - 1);
            const std::vector<double> center = pop[best];
            for (std::size_t p = 0; p < pop_size; ++p) {
                if (p == best) continue;
                for (std::size_t d = 0; d < dim; ++d) {
                    const double span = (d < n ? 0.12 : 20.0) * shrink;
                    const double lo = d < n ? 0.0 : -cfg.impulse_bound;
                    const double hi = d < n ? 1.0 : cfg.impulse_bound;
                    pop[p][d] = std::clamp(center[d] + rng.uniform(-span, span), lo, hi);
                }
                fitness[p] = eval(pop[p]);
                if (fitness[p] < fitness[best]) best = p;
            }
        }
        for (int gen = 0; gen < cfg.de_generations / phases; ++gen) {
            const double weight = cfg.de_dither > 0.0
                                      ? cfg.de_weight + cfg.de_dither * (rng.uniform01() - 0.5)
                                      : cfg.de_weight;
            for (std::size_t kk = 0; kk < pop_size; ++kk) {
                std::size_t r1 = rng.index(pop_size);
                while (r1 == kk) r1 = rng.index(pop_size);
                std::size_t r2 = rng.index(pop_size);
                while (r2 == kk || r2 == r1) r2 = rng.index(pop_size);
                const std::size_t j_rand = rng.index(dim);
                for (std::size_t d = 0; d < dim; ++d) {
                    if (d == j_rand || rng.uniform01() < cfg.de_crossover) {
                        const double m = pop[best][d] + weight * (pop[r1][d] - pop[r2][d]);
                        const double lo = d < n ? 0.0 : -cfg.impulse_bound;
                        const double hi = d < n ? 1.0 : cfg.impulse_bound;
                        trial[d] = std::clamp(m, lo, hi);
                    } else {
                        trial[d] = pop[kk][d];
                    }
                }
                const double f_trial = eval(trial);
                if (f_trial <= fitness[kk]) {
                    pop[kk] = trial;
                    fitness[kk] = f_trial;
                    if (f_trial < fitness[best]) best = kk;
                }
            }
        }
    }
    return evaluate_candidate(unflatten(pop[best], cfg), dep, tgt, dt_max, cfg);
}

EvaluatedCandidate optimize_global(const OrbitalElements& dep, const OrbitalElements& tgt,
                                   double dt_max, const OptimizerConfig& cfg) {
    return optimize_global(dep, tgt, dt_max, cfg, cfg.seed);
}

EvaluatedCandidate refine_perturbed(const TransferSolution& init, const OrbitalElements& dep,
                                    const OrbitalElements& tgt, double dt_max,
                                    const OptimizerConfig& cfg) {
    cfg.validate();
    const PhysicalConstants& k = cfg.constants;
    const std::size_t n = static_cast<std::size_t>(cfg.n_impulses);

    DesignVector x0;
    x0.etas = encode_times(init.maneuver_times, dt_max);
    x0.impulses.assign(init.impulses.begin(), init.impulses.begin() + (n - 2));

    // Pull the terminal leg inside the one-revolution cap before refining.
    {
        std::vector<double> times = decode_times(x0.etas, dt_max);
        const double t_n = times.back();
        const double dt_leg = t_n - times[times.size() - 2];
        if (t_n > 0.0 && dt_leg > 0.0) {
            try {
                const OrbitalElements pre = coast_with_impulses(dep, times, x0.impulses, k);
                const double cap = orbital_period(pre, k);
                if (dt_leg > 0.98 * cap) {
                    x0.etas[n - 2] = std::clamp(1.0 - 0.95 * cap / t_n, 0.0, 1.0);
                }
            } catch (const std::exception&) {
                // leave the start point alone; the penalty steers the refiner
            }
        }
    }

    std::vector<double> v0 = flatten(x0);
    clamp_flat(v0, cfg);
    const auto objective = [&](const std::vector<double>& v) {
        std::vector<double> vc = v;
        clamp_flat(vc, cfg);
        return evaluate_candidate_perturbed(unflatten(vc, cfg), dep, tgt, dt_max, cfg).objective;
    };

    std::vector<double> step(v0.size());
    for (std::size_t d = 0; d < v0.size(); ++d) {
        if (d < n) step[d] = v0[d] + 0.02 <= 1.0 ? 0.02 : -0.02;
        else step[d] = 0.5;
    }
    const std::vector<double> best = nelder_mead(objective, v0, step, cfg.refine_max_evals);
    std::vector<double> bc = best;
    clamp_flat(bc, cfg);
    return evaluate_candidate_perturbed(unflatten(bc, cfg), dep, tgt, dt_max, cfg);
}

TransferSolution optimize_transfer(const OrbitalElements& dep, const OrbitalElements& tgt,
                                   double dt_max, const OptimizerConfig& cfg) {
    cfg.validate();
    if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");

    const int restarts = cfg.restarts;
    std::vector<EvaluatedCandidate> results(static_cast<std::size_t>(restarts));

    const auto run_one = [&](int s) {
        const std::uint64_t sub_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(s));
        try {
            const EvaluatedCandidate global = optimize_global(dep, tgt, dt_max, cfg, sub_seed);
            results[static_cast<std::size_t>(s)] =
                refine_perturbed(global.solution, dep, tgt, dt_max, cfg);
        } catch (const std::exception&) {
            EvaluatedCandidate bad;
            bad.feasible = false;
            bad.objective = kCatastrophicObjective;
            bad.solution.pos_residual = std::numeric_limits<double>::max();
            bad.solution.vel_residual = std::numeric_limits<double>::max();
            results[static_cast<std::size_t>(s)] = bad;
        }
    };

    const int workers = std::max(1, std::min(cfg.jobs, restarts));
    if (workers == 1) {
        for (int s = 0; s < restarts; ++s) run_one(s);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int s = next.fetch_add(1); s < restarts; s = next.fetch_add(1)) run_one(s);
            });
        }
        for (auto& t : pool) t.join();
    }

    int best = -1;
    for (int s = 0; s < restarts; ++s) {
        const auto& r = results[static_cast<std::size_t>(s)];
        if (!r.feasible) continue;
        if (best < 0 || r.solution.total_dv < results[static_cast<std::size_t>(best)].solution.total_dv) {
            best = s;  // ties keep the lowest sub-seed
        }
    }
    if (best < 0) {
        double pos = std::numeric_limits<double>::max();
        double vel = std::numeric_limits<double>::max();
        double obj = std::numeric_limits<double>::max();
        for (const auto& r : results) {
            if (r.objective < obj) {
                obj = r.objective;
                pos = r.solution.pos_residual;
                vel = r.solution.vel_residual;
            }
        }
        throw OptimizationFailure("optimize_transfer: no feasible restart (best residuals " +
                                      std::to_string(pos) + " m, " + std::to_string(vel) + " m/s)",
                                  pos, vel);
    }
    return results[static_cast<std::size_t>(best)].solution;
}

}  // namespace rdv
