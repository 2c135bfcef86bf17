#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "rdv/constants.hpp"
#include "rdv/optimizer.hpp"
#include "rdv/rng.hpp"
#include "rdv/sample.hpp"

namespace rdv {

struct ElementRange {
    double lo = 0.0;
    double hi = 0.0;
};

// Sampling configuration for the transfer database. Default element ranges
// cover the sun-synchronous LEO debris band the estimators are built for;
// angles are drawn over the full circle and the anomaly is drawn as a true
// anomaly, then stored as mean anomaly.
struct GenerationConfig {
    ElementRange a{6.9e6, 7.3e6};      // [m]
    ElementRange e{0.0, 0.02};
    ElementRange inc{1.675516081914556, 1.762782544514273};  // 96..101 deg [rad]
    double dt_min = 1.0 * 86400.0;     // shortest sampled window [s]
    double dt_max = 30.0 * 86400.0;    // longest sampled window [s]
    double d1 = 0.17453292519943295;   // max final node difference, 10 deg [rad]
    double d2 = 0.17453292519943295;   // max initial node difference, 10 deg [rad]
    int samples_per_type = 1000;
    int restarts_per_sample = 20;
    std::uint64_t seed = 0;
    OptimizerConfig opt;  // per-sample optimizer settings; seed/restarts overridden per sample
    int jobs = 1;

    void validate() const;
};

struct GeneratedPair {
    OrbitalElements dep0;
    OrbitalElements tgt0;
    double dt_max = 0.0;  // window bound for this sample [s]
};

// Endpoint generators for the three transfer families. Each draws terminal
// (or mid/initial) elements uniformly in the configured ranges, pins the
// target's node relative to the chaser's, and inverse-propagates to the
// common initial epoch. The outputs classify to the intended type by
// construction.
GeneratedPair gen_closing(const GenerationConfig& cfg, Rng& rng, const PhysicalConstants& k);
GeneratedPair gen_intersecting(const GenerationConfig& cfg, Rng& rng, const PhysicalConstants& k);
GeneratedPair gen_separating(const GenerationConfig& cfg, Rng& rng, const PhysicalConstants& k);

GeneratedPair generate_pair(TransferType type, const GenerationConfig& cfg, Rng& rng,
                            const PhysicalConstants& k);

// Generates and optimizes the sample with the given index (seeded
// independently of every other index).
TransferSample make_sample(TransferType type, int index, const GenerationConfig& cfg,
                           const PhysicalConstants& k);

// Appends labeled samples to a JSON-Lines file until it holds
// cfg.samples_per_type records (existing lines count toward the quota).
// Samples whose optimization fails entirely are skipped and logged. Returns
// the number of records written by this call.
int build_dataset(TransferType type, const GenerationConfig& cfg, const PhysicalConstants& k,
                  const std::string& out_path,
                  const std::function<void(const std::string&)>& log = {});

}  // namespace rdv
