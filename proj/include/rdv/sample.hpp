#pragma once

#include <cstdint>
#include <string>

#include "rdv/classify.hpp"
#include "rdv/elements.hpp"

namespace rdv {

// One labeled training record: endpoint elements at a common epoch, the
// transfer-time bound, the transfer type, and the optimized velocity
// increment, plus the provenance needed to regenerate it.
struct TransferSample {
    OrbitalElements dep0;
    OrbitalElements tgt0;
    double dt_max = 0.0;  // [s]
    TransferType type = TransferType::Closing;
    double dv_opt = 0.0;  // [m/s]

    std::uint64_t seed = 0;   // per-sample sub-seed
    int restarts = 0;         // optimizer restarts used for the label
    std::string alg;          // generator that produced the endpoints
};

}  // namespace rdv
