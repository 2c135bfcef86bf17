#pragma once

#include <string>

#include "rdv/constants.hpp"
#include "rdv/elements.hpp"

namespace rdv {

// Transfer taxonomy by the evolution of the node difference between the two
// bodies over the transfer window: the difference shrinks (Closing), changes
// sign (Intersecting), or grows (Separating).
enum class TransferType { Closing, Intersecting, Separating };

std::string to_string(TransferType t);
TransferType transfer_type_from_string(const std::string& s);

// Node differences (signed principal values) at the start and end of the
// window; exposed for reporting.
struct NodeDeltas {
    double initial = 0.0;  // [rad]
    double final = 0.0;    // [rad]
};

NodeDeltas node_deltas(const OrbitalElements& dep, const OrbitalElements& tgt, double dt,
                       const PhysicalConstants& k);

// Classifies the (departure, target, window) triple. Ties: zero initial
// difference is Closing; zero final difference (with nonzero initial) is
// Intersecting; a sign flip through the anti-aligned configuration counts as
// Separating. If the element epochs differ, the target is first propagated to
// the departure epoch.
TransferType classify_transfer(const OrbitalElements& dep, const OrbitalElements& tgt, double dt,
                               const PhysicalConstants& k);

}  // namespace rdv
