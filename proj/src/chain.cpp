#include "rdv/chain.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rdv/json_io.hpp"
#include "rdv/propagate.hpp"
#include "rdv/sample.hpp"

namespace rdv {

void validate(const ChainSpec& spec) {
    double prev_end = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.legs.size(); ++i) {
        const ChainLeg& leg = spec.legs[i];
        if (!(leg.rendezvous_time > leg.departure_time)) {
            throw std::invalid_argument("chain leg " + std::to_string(i) +
                                        ": rendezvous_time must exceed departure_time");
        }
        if (leg.departure_time < prev_end) {
            throw std::invalid_argument("chain leg " + std::to_string(i) +
                                        ": epochs must be non-decreasing across legs");
        }
        prev_end = leg.rendezvous_time;
    }
}

ChainSpec load_chain(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open chain file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed chain file " + path + ": " + e.what());
    }
    ChainSpec spec;
    try {
        for (const auto& jl : j.at("legs")) {
            ChainLeg leg;
            leg.dep = elements_from_json(jl.at("dep"));
            leg.tgt = elements_from_json(jl.at("tgt"));
            leg.departure_time = jl.at("departure_time_s").get<double>();
            leg.rendezvous_time = jl.at("rendezvous_time_s").get<double>();
            if (jl.contains("dv_opt_mps")) leg.dv_opt = jl.at("dv_opt_mps").get<double>();
            spec.legs.push_back(std::move(leg));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed chain file " + path + ": " + e.what());
    }
    validate(spec);
    return spec;
}

ModelSet load_models(const std::string& dir) {
    ModelSet models;
    for (TransferType t : {TransferType::Closing, TransferType::Intersecting, TransferType::Separating}) {
        const std::string path = dir + "/" + to_string(t) + ".json";
        MlpModel m = load_model(path);
        if (m.type != t) throw std::runtime_error(path + ": model type does not match its filename");
        models.emplace(t, std::move(m));
    }
    return models;
}

LegEstimate estimate_leg(const OrbitalElements& dep, const OrbitalElements& tgt, double dt,
                         const ModelSet& models, const PhysicalConstants& k) {
    if (!(dt > 0.0)) throw std::invalid_argument("estimate_leg requires dt > 0");
    LegEstimate est;
    est.type = classify_transfer(dep, tgt, dt, k);
    const auto it = models.find(est.type);
    if (it == models.end()) {
        throw std::runtime_error("no model available for transfer type " + to_string(est.type));
    }
    TransferSample s;
    s.dep0 = dep;
    s.tgt0 = tgt;
    s.dt_max = dt;
    s.type = est.type;
    est.dv = forward(it->second, extract(s, it->second.schema, k));
    return est;
}

ChainEstimate estimate_chain(const ChainSpec& spec, const LegEstimator& estimator) {
    validate(spec);
    ChainEstimate out;
    double running = 0.0;
    for (const ChainLeg& leg : spec.legs) {
        const double dt = leg.rendezvous_time - leg.departure_time;
        out.per_leg.push_back(estimator(leg.dep, leg.tgt, dt));
        running += out.per_leg.back().dv;
        out.cumulative.push_back(running);
    }
    return out;
}

ChainEstimate estimate_chain(const ChainSpec& spec, const ModelSet& models,
                             const PhysicalConstants& k) {
    ChainEstimate out;
    double running = 0.0;
    validate(spec);
    for (const ChainLeg& leg : spec.legs) {
        const double dt = leg.rendezvous_time - leg.departure_time;
        OrbitalElements dep = leg.dep, tgt = leg.tgt;
        if (dep.epoch != leg.departure_time) dep = propagate_j2(dep, leg.departure_time - dep.epoch, k);
        if (tgt.epoch != leg.departure_time) tgt = propagate_j2(tgt, leg.departure_time - tgt.epoch, k);
        out.per_leg.push_back(estimate_leg(dep, tgt, dt, models, k));
        running += out.per_leg.back().dv;
        out.cumulative.push_back(running);
    }
    return out;
}

std::string chain_estimate_csv(const ChainSpec& spec, const ChainEstimate& est) {
    bool with_reference = !spec.legs.empty();
    for (const auto& leg : spec.legs) {
        if (!leg.dv_opt.has_value()) with_reference = false;
    }
    std::string csv = with_reference
                          ? "leg_index,type,dv_est_mps,cum_est_mps,dv_opt_mps,cum_opt_mps\n"
                          : "leg_index,type,dv_est_mps,cum_est_mps\n";
    double cum_opt = 0.0;
    for (std::size_t i = 0; i < est.per_leg.size(); ++i) {
        csv += std::to_string(i) + "," + to_string(est.per_leg[i].type) + "," +
               format_double(est.per_leg[i].dv) + "," + format_double(est.cumulative[i]);
        if (with_reference) {
            cum_opt += *spec.legs[i].dv_opt;
            csv += "," + format_double(*spec.legs[i].dv_opt) + "," + format_double(cum_opt);
        }
        csv += "\n";
    }
    return csv;
}

}  // namespace rdv
