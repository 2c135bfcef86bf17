#pragma once

#include <cstdint>
#include <vector>

#include "rdv/classify.hpp"
#include "rdv/constants.hpp"
#include "rdv/optimizer.hpp"

namespace rdv {

// Characteristic-curve study: optimal dv as a function of the transfer-time
// bound and the initial node difference, for a fixed body pair.
struct SweepCell {
    double offset_deg = 0.0;  // imposed initial node difference (chaser - target)
    double dt_days = 0.0;     // transfer-time bound
    TransferType type = TransferType::Closing;
    double dv = 0.0;          // best total dv found [m/s]
    int restarts = 0;
};

struct SweepConfig {
    std::vector<double> offsets_deg;
    std::vector<double> dt_days;
    OptimizerConfig opt;  // restarts/seed/jobs taken from here; per-cell sub-seeds derived
};

// Built-in demonstration pair: two sun-synchronous LEO bodies whose nodes
// drift toward each other at about 0.12 deg/day.
OrbitalElements demo_sweep_departure();
OrbitalElements demo_sweep_target();

// One optimized transfer per (offset, dt) cell; the target's node is set to
// the departure node minus the offset before each cell. Cells are seeded
// independently, so results do not depend on evaluation order.
std::vector<SweepCell> run_sweep(const OrbitalElements& dep, const OrbitalElements& tgt,
                                 const SweepConfig& cfg);

}  // namespace rdv
