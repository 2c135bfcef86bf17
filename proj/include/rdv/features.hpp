#pragma once

#include <string>
#include <vector>

#include "rdv/classify.hpp"
#include "rdv/constants.hpp"
#include "rdv/sample.hpp"

namespace rdv {

// Ordered list of regression inputs for one transfer type. Units in feature
// space: km for semi-major axes, radians for angles and node differences,
// days for times, rad/day for node rates.
struct FeatureSchema {
    TransferType type = TransferType::Closing;
    std::vector<std::string> names;

    std::size_t dimension() const { return names.size(); }
};

// The per-type selections used by the shipped estimators:
//   closing      a_c a_t e_c e_t i_c i_t draan_c0_t0 draan_cf_tf dt_days   (9)
//   intersecting a_c a_t e_c e_t i_c i_t                                   (6)
//   separating   a_c a_t e_c e_t i_c i_t draan_c0_t0 draan_cf_tf draan_c0_tf dt_days (10)
FeatureSchema default_schema(TransferType type);

// Every feature name extract_extended understands (superset of the defaults,
// including node rates and phase differences).
const std::vector<std::string>& all_feature_names();

struct FeatureVector {
    std::vector<double> values;  // schema order
};

FeatureVector extract(const TransferSample& sample, const FeatureSchema& schema,
                      const PhysicalConstants& k);

// Arbitrary feature-name combinations, for ablation studies. Throws on an
// unknown name or an empty list.
FeatureVector extract_extended(const TransferSample& sample, const std::vector<std::string>& names,
                               const PhysicalConstants& k);

// Per-column z-scoring with a stddev floor of 1e-12 (population stddev).
struct Normalizer {
    std::vector<double> mean;
    std::vector<double> stddev;
};

Normalizer fit_normalizer(const std::vector<FeatureVector>& rows);  // needs >= 2 rows
std::vector<double> apply_normalizer(const Normalizer& nz, const std::vector<double>& values);
std::vector<double> invert_normalizer(const Normalizer& nz, const std::vector<double>& values);

}  // namespace rdv
