#include "rdv/datagen.hpp"

#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "rdv/angles.hpp"
#include "rdv/json_io.hpp"
#include "rdv/propagate.hpp"

namespace rdv {

namespace {

OrbitalElements draw_elements(const GenerationConfig& cfg, Rng& rng, double epoch) {
    OrbitalElements el;
    el.a = rng.uniform(cfg.a.lo, cfg.a.hi);
    el.e = rng.uniform(cfg.e.lo, cfg.e.hi);
    el.i = rng.uniform(cfg.inc.lo, cfg.inc.hi);
    el.raan = rng.uniform(0.0, two_pi);
    el.argp = rng.uniform(0.0, two_pi);
    el.mean_anomaly = true_to_mean_anomaly(rng.uniform(0.0, two_pi), el.e);
    el.epoch = epoch;
    return el;
}

}  // namespace

void GenerationConfig::validate() const {
    if (!(d1 > 0.0 && d1 < pi) || !(d2 > 0.0 && d2 < pi)) {
        throw std::invalid_argument("d1 and d2 must be in (0, pi)");
    }
    if (!(a.lo <= a.hi) || !(e.lo <= e.hi) || !(inc.lo <= inc.hi)) {
        throw std::invalid_argument("element ranges must be non-empty");
    }
    if (!(dt_max > 0.0) || !(dt_min >= 0.0) || !(dt_min <= dt_max)) {
        throw std::invalid_argument("window range must satisfy 0 <= dt_min <= dt_max");
    }
    if (samples_per_type < 1 || restarts_per_sample < 1) {
        throw std::invalid_argument("sample and restart counts must be >= 1");
    }
}

GeneratedPair gen_closing(const GenerationConfig& cfg, Rng& rng, const PhysicalConstants& k) {
    const double window = cfg.dt_min + rng.uniform_open_zero(cfg.dt_max - cfg.dt_min);
    OrbitalElements dep_f = draw_elements(cfg, rng, window);
    OrbitalElements tgt_f = draw_elements(cfg, rng, window);
    const double dnode_f = rng.uniform_open_zero(cfg.d1);
    const double rate_c = raan_rate(dep_f, k);
    const double rate_t = raan_rate(tgt_f, k);
    tgt_f.raan = wrap_two_pi(rate_c < rate_t ? dep_f.raan - dnode_f : dep_f.raan + dnode_f);

    GeneratedPair out;
    out.dep0 = propagate_j2(dep_f, -window, k);
    out.tgt0 = propagate_j2(tgt_f, -window, k);
    out.dt_max = window;
    return out;
}

GeneratedPair gen_intersecting(const GenerationConfig& cfg, Rng& rng, const PhysicalConstants& k) {
    const double window = cfg.dt_min + rng.uniform_open_zero(cfg.dt_max - cfg.dt_min);
    const double crossing = rng.uniform_open_zero(window);
    OrbitalElements dep_m = draw_elements(cfg, rng, crossing);
    OrbitalElements tgt_m = draw_elements(cfg, rng, crossing);
    tgt_m.raan = dep_m.raan;  // nodes coincide at the crossing epoch

    GeneratedPair out;
    out.dep0 = propagate_j2(dep_m, -crossing, k);
    out.tgt0 = propagate_j2(tgt_m, -crossing, k);
    out.dt_max = window;
    return out;
}

GeneratedPair gen_separating(const GenerationConfig& cfg, Rng& rng, const PhysicalConstants& k) {
    const double window = cfg.dt_min + rng.uniform_open_zero(cfg.dt_max - cfg.dt_min);
    OrbitalElements dep0 = draw_elements(cfg, rng, 0.0);
    OrbitalElements tgt0 = draw_elements(cfg, rng, 0.0);
    const double dnode_0 = rng.uniform_open_zero(cfg.d2);
    const double rate_c = raan_rate(dep0, k);
    const double rate_t = raan_rate(tgt0, k);
    tgt0.raan = wrap_two_pi(rate_c < rate_t ? dep0.raan + dnode_0 : dep0.raan - dnode_0);

    GeneratedPair out;
    out.dep0 = dep0;
    out.tgt0 = tgt0;
    out.dt_max = window;
    return out;
}

GeneratedPair generate_pair(TransferType type, const GenerationConfig& cfg, Rng& rng,
                            const PhysicalConstants& k) {
    switch (type) {
        case TransferType::Closing: return gen_closing(cfg, rng, k);
        case TransferType::Intersecting: return gen_intersecting(cfg, rng, k);
        case TransferType::Separating: return gen_separating(cfg, rng, k);
    }
    throw std::logic_error("unreachable");
}

TransferSample make_sample(TransferType type, int index, const GenerationConfig& cfg,
                           const PhysicalConstants& k) {
    const std::uint64_t sample_seed =
        mix_seed(cfg.seed, (static_cast<std::uint64_t>(type) << 32) | static_cast<std::uint64_t>(index));
    Rng rng(sample_seed);
    const GeneratedPair pair = generate_pair(type, cfg, rng, k);

    OptimizerConfig opt = cfg.opt;
    opt.constants = k;
    opt.restarts = cfg.restarts_per_sample;
    opt.seed = mix_seed(sample_seed, 1);
    opt.jobs = 1;  // parallelism lives at the sample level
    const TransferSolution sol = optimize_transfer(pair.dep0, pair.tgt0, pair.dt_max, opt);

    TransferSample s;
    s.dep0 = pair.dep0;
    s.tgt0 = pair.tgt0;
    s.dt_max = pair.dt_max;
    s.type = type;
    s.dv_opt = sol.total_dv;
    s.seed = sample_seed;
    s.restarts = cfg.restarts_per_sample;
    s.alg = to_string(type);
    return s;
}

int build_dataset(TransferType type, const GenerationConfig& cfg, const PhysicalConstants& k,
                  const std::string& out_path, const std::function<void(const std::string&)>& log) {
    cfg.validate();

    int existing = 0;
    {
        std::ifstream in(out_path, std::ios::binary);
        if (in) {
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty()) ++existing;
            }
        }
    }
    if (existing >= cfg.samples_per_type) return 0;

    std::ofstream out(out_path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot open dataset file for writing: " + out_path);

    // Work proceeds in chunks so partial progress survives interruption.
    int written = 0;
    int index = existing;
    const int chunk = std::max(8, 8 * cfg.jobs);
    std::vector<std::string> lines;
    while (index < cfg.samples_per_type) {
        const int todo = std::min(chunk, cfg.samples_per_type - index);
        lines.assign(static_cast<std::size_t>(todo), std::string());

        const auto work = [&](int slot) {
            try {
                const TransferSample s = make_sample(type, index + slot, cfg, k);
                lines[static_cast<std::size_t>(slot)] = sample_to_json(s).dump();
            } catch (const OptimizationFailure& e) {
                if (log) log("sample " + std::to_string(index + slot) + " skipped: " + e.what());
            }
        };

        const int workers = std::max(1, std::min(cfg.jobs, todo));
        if (workers == 1) {
            for (int slot = 0; slot < todo; ++slot) work(slot);
        } else {
            std::atomic<int> next{0};
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&] {
                    for (int s = next.fetch_add(1); s < todo; s = next.fetch_add(1)) work(s);
                });
            }
            for (auto& t : pool) t.join();
        }

        for (const auto& line : lines) {
            if (line.empty()) continue;
            out << line << "\n";
            ++written;
        }
        out.flush();
        if (!out) throw std::runtime_error("failed writing dataset file: " + out_path);
        index += todo;
    }
    return written;
}

}  // namespace rdv
