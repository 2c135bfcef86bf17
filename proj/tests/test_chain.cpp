#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rdv/chain.hpp"
#include "rdv/datagen.hpp"
#include "rdv/json_io.hpp"
#include "rdv/rng.hpp"

using namespace rdv;

namespace {

const PhysicalConstants kEarth{};

// Constant-output model: zero weights, target mean = value.
MlpModel constant_model(TransferType type, double value) {
    MlpModel m = init_model(type, default_schema(type), {4}, 0.01, 1);
    for (auto& layer : m.weights) {
        for (auto& w : layer) w = 0.0;
    }
    m.target_mean = value;
    return m;
}

ModelSet constant_models() {
    ModelSet models;
    models.emplace(TransferType::Closing, constant_model(TransferType::Closing, 100.0));
    models.emplace(TransferType::Intersecting, constant_model(TransferType::Intersecting, 200.0));
    models.emplace(TransferType::Separating, constant_model(TransferType::Separating, 300.0));
    return models;
}

ChainSpec synthetic_chain(int legs, std::uint64_t seed) {
    GenerationConfig cfg;
    Rng rng(seed);
    ChainSpec spec;
    double t = 0.0;
    for (int i = 0; i < legs; ++i) {
        const TransferType type = static_cast<TransferType>(i % 3);
        const GeneratedPair pair = generate_pair(type, cfg, rng, kEarth);
        ChainLeg leg;
        leg.dep = pair.dep0;
        leg.tgt = pair.tgt0;
        leg.dep.epoch = t;
        leg.tgt.epoch = t;
        leg.departure_time = t;
        leg.rendezvous_time = t + pair.dt_max;
        leg.dv_opt = 50.0 + 10.0 * i;
        spec.legs.push_back(leg);
        t = leg.rendezvous_time + 5.0 * 86400.0;
    }
    return spec;
}

}  // namespace

TEST_CASE("single-leg chains reduce to the leg estimate") {
    const ChainSpec spec = synthetic_chain(1, 7);
    const ChainEstimate est = estimate_chain(spec, constant_models(), kEarth);
    REQUIRE(est.per_leg.size() == 1);
    CHECK(est.cumulative[0] == est.per_leg[0].dv);
}

TEST_CASE("cumulative totals are exact prefix sums") {
    const ChainSpec spec = synthetic_chain(9, 8);
    const ChainEstimate est = estimate_chain(spec, constant_models(), kEarth);
    double running = 0.0;
    for (std::size_t i = 0; i < est.per_leg.size(); ++i) {
        running += est.per_leg[i].dv;
        CHECK(est.cumulative[i] == running);  // bitwise: same summation order
    }
}

TEST_CASE("legs are routed to the model of their classified type") {
    const ChainSpec spec = synthetic_chain(9, 9);
    const ChainEstimate est = estimate_chain(spec, constant_models(), kEarth);
    for (std::size_t i = 0; i < spec.legs.size(); ++i) {
        const TransferType expected = classify_transfer(
            spec.legs[i].dep, spec.legs[i].tgt,
            spec.legs[i].rendezvous_time - spec.legs[i].departure_time, kEarth);
        CHECK(est.per_leg[i].type == expected);
        const double by_type = expected == TransferType::Closing        ? 100.0
                               : expected == TransferType::Intersecting ? 200.0
                                                                        : 300.0;
        CHECK(est.per_leg[i].dv == doctest::Approx(by_type));
    }
}

TEST_CASE("an oracle estimator makes the chain error identically zero") {
    const ChainSpec spec = synthetic_chain(10, 10);
    // Substitute the reference labels for the surrogate.
    std::size_t index = 0;
    const ChainEstimate est = estimate_chain(spec, [&](const OrbitalElements&, const OrbitalElements&,
                                                       double) {
        LegEstimate e;
        e.type = TransferType::Closing;
        e.dv = *spec.legs[index++].dv_opt;
        return e;
    });
    double cum_ref = 0.0;
    for (std::size_t i = 0; i < spec.legs.size(); ++i) {
        cum_ref += *spec.legs[i].dv_opt;
        CHECK(est.cumulative[i] == cum_ref);
    }
    CHECK(std::abs(est.cumulative.back() - cum_ref) == 0.0);
}

TEST_CASE("independent legs evaluate independently of their position") {
    ChainSpec spec = synthetic_chain(4, 11);
    const ChainEstimate base = estimate_chain(spec, constant_models(), kEarth);

    // Swap two legs (keeping timeline validity by swapping whole slots).
    ChainSpec swapped = spec;
    std::swap(swapped.legs[1], swapped.legs[2]);
    std::swap(swapped.legs[1].departure_time, swapped.legs[2].departure_time);
    std::swap(swapped.legs[1].rendezvous_time, swapped.legs[2].rendezvous_time);
    swapped.legs[1].dep.epoch = swapped.legs[1].departure_time;
    swapped.legs[1].tgt.epoch = swapped.legs[1].departure_time;
    swapped.legs[2].dep.epoch = swapped.legs[2].departure_time;
    swapped.legs[2].tgt.epoch = swapped.legs[2].departure_time;
    // Types survive the re-timing only because the estimates are constant per
    // type and classification depends on the pair geometry, not on wall time.
    const ChainEstimate after = estimate_chain(swapped, constant_models(), kEarth);
    CHECK(after.per_leg[1].type == base.per_leg[2].type);
    CHECK(after.per_leg[2].type == base.per_leg[1].type);
    CHECK(after.per_leg[1].dv == base.per_leg[2].dv);
    CHECK(after.per_leg[2].dv == base.per_leg[1].dv);
    CHECK(after.cumulative.back() == doctest::Approx(base.cumulative.back()));
}

TEST_CASE("missing models are reported") {
    ModelSet models = constant_models();
    models.erase(TransferType::Separating);
    const ChainSpec spec = synthetic_chain(9, 12);
    CHECK_THROWS_WITH_AS(estimate_chain(spec, models, kEarth),
                         doctest::Contains("no model available"), std::runtime_error);
}

TEST_CASE("chain spec validation") {
    ChainSpec spec = synthetic_chain(2, 13);
    spec.legs[1].rendezvous_time = spec.legs[1].departure_time;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);

    spec = synthetic_chain(2, 14);
    spec.legs[1].departure_time = spec.legs[0].departure_time - 1.0;
    CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

TEST_CASE("chain files round trip") {
    const ChainSpec spec = synthetic_chain(3, 15);
    nlohmann::json j;
    j["legs"] = nlohmann::json::array();
    for (const auto& leg : spec.legs) {
        nlohmann::json jl;
        jl["dep"] = elements_to_json(leg.dep);
        jl["tgt"] = elements_to_json(leg.tgt);
        jl["departure_time_s"] = leg.departure_time;
        jl["rendezvous_time_s"] = leg.rendezvous_time;
        jl["dv_opt_mps"] = *leg.dv_opt;
        j["legs"].push_back(jl);
    }
    const std::string path = "chain_unit_test.json";
    {
        std::ofstream out(path, std::ios::binary);
        out << j.dump(1) << "\n";
    }
    const ChainSpec loaded = load_chain(path);
    REQUIRE(loaded.legs.size() == spec.legs.size());
    for (std::size_t i = 0; i < spec.legs.size(); ++i) {
        CHECK(loaded.legs[i].dep.a == spec.legs[i].dep.a);
        CHECK(loaded.legs[i].departure_time == spec.legs[i].departure_time);
        CHECK(loaded.legs[i].dv_opt.has_value());
    }

    const ChainEstimate est = estimate_chain(loaded, constant_models(), kEarth);
    const std::string csv = chain_estimate_csv(loaded, est);
    CHECK(csv.find("leg_index,type,dv_est_mps,cum_est_mps,dv_opt_mps,cum_opt_mps") !=
          std::string::npos);
    CHECK(csv.find("\r") == std::string::npos);  // LF endings only
    std::remove(path.c_str());
}

TEST_CASE("wrong-type model files are rejected by the loader") {
    // closing.json containing a separating-type model must not load.
    const std::string dir = ".";
    MlpModel wrong = constant_model(TransferType::Separating, 10.0);
    save_model(wrong, "closing.json");
    save_model(constant_model(TransferType::Intersecting, 10.0), "intersecting.json");
    save_model(constant_model(TransferType::Separating, 10.0), "separating.json");
    CHECK_THROWS(load_models(dir));
    std::remove("closing.json");
    std::remove("intersecting.json");
    std::remove("separating.json");
}
