#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdv/classify.hpp"
#include "rdv/constants.hpp"
#include "rdv/elements.hpp"
#include "rdv/mlp.hpp"

namespace rdv {

// One leg of a multi-target rendezvous chain. Elements are taken at the
// departure epoch; if their stored epoch differs they are propagated there
// first. dv_opt carries an optional reference value for comparison output.
struct ChainLeg {
    OrbitalElements dep;
    OrbitalElements tgt;
    double departure_time = 0.0;   // [s]
    double rendezvous_time = 0.0;  // [s]
    std::optional<double> dv_opt;  // [m/s]
};

struct ChainSpec {
    std::vector<ChainLeg> legs;
};

// Throws std::invalid_argument if any leg has rendezvous_time <=
// departure_time or the legs are not in non-decreasing epoch order.
void validate(const ChainSpec& spec);

ChainSpec load_chain(const std::string& path);

struct LegEstimate {
    TransferType type = TransferType::Closing;
    double dv = 0.0;  // [m/s]
};

using LegEstimator =
    std::function<LegEstimate(const OrbitalElements& dep, const OrbitalElements& tgt, double dt)>;

using ModelSet = std::map<TransferType, MlpModel>;

ModelSet load_models(const std::string& dir);

// Classifies the leg, routes it to the type's model, and evaluates the
// surrogate. Throws if the classified type has no model.
LegEstimate estimate_leg(const OrbitalElements& dep, const OrbitalElements& tgt, double dt,
                         const ModelSet& models, const PhysicalConstants& k);

struct ChainEstimate {
    std::vector<LegEstimate> per_leg;
    std::vector<double> cumulative;  // exact prefix sums of per-leg dv
};

ChainEstimate estimate_chain(const ChainSpec& spec, const LegEstimator& estimator);
ChainEstimate estimate_chain(const ChainSpec& spec, const ModelSet& models,
                             const PhysicalConstants& k);

// CSV rows: leg_index,type,dv_est_mps,cum_est_mps[,dv_opt_mps,cum_opt_mps]
// (the reference columns appear when every leg carries dv_opt).
std::string chain_estimate_csv(const ChainSpec& spec, const ChainEstimate& est);

}  // namespace rdv
