#include "rdv/sweep.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "rdv/angles.hpp"
#include "rdv/rng.hpp"

namespace rdv {

OrbitalElements demo_sweep_departure() {
    OrbitalElements el;
    el.a = 7142116.504;
    el.e = 0.006172;
    el.i = deg2rad(98.581);
    el.raan = deg2rad(96.0);
    el.argp = deg2rad(257.367);
    el.mean_anomaly = true_to_mean_anomaly(deg2rad(135.368), el.e);
    el.epoch = 0.0;
    return el;
}

OrbitalElements demo_sweep_target() {
    OrbitalElements el;
    el.a = 7052562.111;
    el.e = 0.007721;
    el.i = deg2rad(97.203);
    el.raan = deg2rad(100.0);
    el.argp = deg2rad(13.265);
    el.mean_anomaly = true_to_mean_anomaly(deg2rad(311.656), el.e);
    el.epoch = 0.0;
    return el;
}

std::vector<SweepCell> run_sweep(const OrbitalElements& dep, const OrbitalElements& tgt,
                                 const SweepConfig& cfg) {
    if (cfg.offsets_deg.empty()) throw std::invalid_argument("sweep: offset list is empty");
    if (cfg.dt_days.empty()) throw std::invalid_argument("sweep: dt list is empty");
    cfg.opt.validate();

    const std::size_t n_cells = cfg.offsets_deg.size() * cfg.dt_days.size();
    std::vector<SweepCell> cells(n_cells);

    const auto work = [&](std::size_t c) {
        const std::size_t oi = c / cfg.dt_days.size();
        const std::size_t ti = c % cfg.dt_days.size();
        SweepCell& cell = cells[c];
        cell.offset_deg = cfg.offsets_deg[oi];
        cell.dt_days = cfg.dt_days[ti];
        cell.restarts = cfg.opt.restarts;

        OrbitalElements tgt_cell = tgt;
        tgt_cell.raan = wrap_two_pi(dep.raan - deg2rad(cell.offset_deg));
        const double dt_max = cell.dt_days * 86400.0;

        cell.type = classify_transfer(dep, tgt_cell, dt_max, cfg.opt.constants);
        OptimizerConfig opt = cfg.opt;
        opt.seed = mix_seed(cfg.opt.seed, c);
        opt.jobs = 1;
        cell.dv = optimize_transfer(dep, tgt_cell, dt_max, opt).total_dv;
    };

    const int workers = std::max(1, std::min<int>(cfg.opt.jobs, static_cast<int>(n_cells)));
    if (workers == 1) {
        for (std::size_t c = 0; c < n_cells; ++c) work(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t c = next.fetch_add(1); c < n_cells; c = next.fetch_add(1)) work(c);
            });
        }
        for (auto& t : pool) t.join();
    }
    return cells;
}

}  // namespace rdv
