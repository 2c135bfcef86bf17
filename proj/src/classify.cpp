#include "rdv/classify.hpp"

#include <cmath>
#include <stdexcept>

#include "rdv/angles.hpp"
#include "rdv/propagate.hpp"

namespace rdv {

std::string to_string(TransferType t) {
    switch (t) {
        case TransferType::Closing: return "closing";
        case TransferType::Intersecting: return "intersecting";
        case TransferType::Separating: return "separating";
    }
    throw std::logic_error("unreachable");
}

TransferType transfer_type_from_string(const std::string& s) {
    if (s == "closing") return TransferType::Closing;
    if (s == "intersecting") return TransferType::Intersecting;
    if (s == "separating") return TransferType::Separating;
    throw std::invalid_argument("unknown transfer type: " + s);
}

NodeDeltas node_deltas(const OrbitalElements& dep, const OrbitalElements& tgt, double dt,
                       const PhysicalConstants& k) {
    const OrbitalElements tgt0 = (tgt.epoch == dep.epoch) ? tgt : propagate_j2(tgt, dep.epoch - tgt.epoch, k);
    const OrbitalElements dep_f = propagate_j2(dep, dt, k);
    const OrbitalElements tgt_f = propagate_j2(tgt0, dt, k);
    NodeDeltas d;
    d.initial = wrap_pi(dep.raan - tgt0.raan);
    d.final = wrap_pi(dep_f.raan - tgt_f.raan);
    return d;
}

TransferType classify_transfer(const OrbitalElements& dep, const OrbitalElements& tgt, double dt,
                               const PhysicalConstants& k) {
    if (!(dt > 0.0)) throw std::invalid_argument("classify_transfer requires dt > 0");
    const NodeDeltas d = node_deltas(dep, tgt, dt, k);

    if (d.initial == 0.0) {
        // Nodes aligned at the window start: a crossing at t=0 unless they
        // also end aligned (equal drift rates).
        return d.final == 0.0 ? TransferType::Closing : TransferType::Intersecting;
    }
    if (d.final == 0.0) return TransferType::Intersecting;

    if (std::signbit(d.initial) != std::signbit(d.final)) {
        // The sign flipped either through zero or through the anti-aligned
        // configuration at +/-pi; the relative drift direction tells which.
        const double rel_rate = raan_rate(dep, k) - raan_rate(tgt, k);
        return (d.initial * rel_rate < 0.0) ? TransferType::Intersecting : TransferType::Separating;
    }
    return (std::abs(d.final) < std::abs(d.initial)) ? TransferType::Closing : TransferType::Separating;
}

}  // namespace rdv
