#include "rdv/features.hpp"

#include <cmath>
#include <stdexcept>

#include "rdv/angles.hpp"
#include "rdv/propagate.hpp"

namespace rdv {

namespace {

constexpr double kSecondsPerDay = 86400.0;

struct EndpointStates {
    OrbitalElements dep0, tgt0, dep_f, tgt_f;
};

EndpointStates endpoint_states(const TransferSample& s, const PhysicalConstants& k) {
    EndpointStates e;
    e.dep0 = normalized_angles(s.dep0);
    e.tgt0 = normalized_angles(s.tgt0);
    if (e.tgt0.epoch != e.dep0.epoch) e.tgt0 = propagate_j2(e.tgt0, e.dep0.epoch - e.tgt0.epoch, k);
    e.dep_f = propagate_j2(e.dep0, s.dt_max, k);
    e.tgt_f = propagate_j2(e.tgt0, s.dt_max, k);
    return e;
}

double phase_difference(const OrbitalElements& a, const OrbitalElements& b) {
    return wrap_pi(argument_of_latitude(a) - argument_of_latitude(b));
}

double feature_value(const std::string& name, const EndpointStates& e, double dt_max,
                     const PhysicalConstants& k) {
    if (name == "a_c") return e.dep0.a / 1000.0;
    if (name == "a_t") return e.tgt0.a / 1000.0;
    if (name == "e_c") return e.dep0.e;
    if (name == "e_t") return e.tgt0.e;
    if (name == "i_c") return e.dep0.i;
    if (name == "i_t") return e.tgt0.i;
    if (name == "draan_c0_t0") return wrap_pi(e.dep0.raan - e.tgt0.raan);
    if (name == "draan_cf_tf") return wrap_pi(e.dep_f.raan - e.tgt_f.raan);
    if (name == "draan_c0_tf") return wrap_pi(e.dep0.raan - e.tgt_f.raan);
    if (name == "raan_rate_c") return raan_rate(e.dep0, k) * kSecondsPerDay;
    if (name == "raan_rate_t") return raan_rate(e.tgt0, k) * kSecondsPerDay;
    if (name == "dphase_0") return phase_difference(e.dep0, e.tgt0);
    if (name == "dphase_f") return phase_difference(e.dep_f, e.tgt_f);
    if (name == "dt_days") return dt_max / kSecondsPerDay;
    throw std::invalid_argument("unknown feature name: " + name);
}

}  // namespace

FeatureSchema default_schema(TransferType type) {
    FeatureSchema s;
    s.type = type;
    s.names = {"a_c", "a_t", "e_c", "e_t", "i_c", "i_t"};
    switch (type) {
        case TransferType::Closing:
            s.names.insert(s.names.end(), {"draan_c0_t0", "draan_cf_tf", "dt_days"});
            break;
        case TransferType::Intersecting:
            break;
        case TransferType::Separating:
            s.names.insert(s.names.end(), {"draan_c0_t0", "draan_cf_tf", "draan_c0_tf", "dt_days"});
            break;
    }
    return s;
}

const std::vector<std::string>& all_feature_names() {
    static const std::vector<std::string> names = {
        "a_c", "a_t", "e_c", "e_t", "i_c", "i_t", "draan_c0_t0", "draan_cf_tf", "draan_c0_tf",
        "raan_rate_c", "raan_rate_t", "dphase_0", "dphase_f", "dt_days"};
    return names;
}

FeatureVector extract(const TransferSample& sample, const FeatureSchema& schema,
                      const PhysicalConstants& k) {
    return extract_extended(sample, schema.names, k);
}

FeatureVector extract_extended(const TransferSample& sample, const std::vector<std::string>& names,
                               const PhysicalConstants& k) {
    if (names.empty()) throw std::invalid_argument("feature name list is empty");
    const EndpointStates e = endpoint_states(sample, k);
    FeatureVector fv;
    fv.values.reserve(names.size());
    for (const auto& name : names) fv.values.push_back(feature_value(name, e, sample.dt_max, k));
    return fv;
}

Normalizer fit_normalizer(const std::vector<FeatureVector>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("fit_normalizer needs at least 2 rows");
    const std::size_t dim = rows.front().values.size();
    Normalizer nz;
    nz.mean.assign(dim, 0.0);
    nz.stddev.assign(dim, 0.0);
    for (const auto& r : rows) {
        if (r.values.size() != dim) throw std::invalid_argument("inconsistent feature dimensions");
        for (std::size_t d = 0; d < dim; ++d) nz.mean[d] += r.values[d];
    }
    for (double& m : nz.mean) m /= static_cast<double>(rows.size());
    for (const auto& r : rows) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double dev = r.values[d] - nz.mean[d];
            nz.stddev[d] += dev * dev;
        }
    }
    for (double& s : nz.stddev) s = std::max(std::sqrt(s / static_cast<double>(rows.size())), 1e-12);
    return nz;
}

std::vector<double> apply_normalizer(const Normalizer& nz, const std::vector<double>& values) {
    if (values.size() != nz.mean.size()) throw std::invalid_argument("normalizer dimension mismatch");
    std::vector<double> out(values.size());
    for (std::size_t d = 0; d < values.size(); ++d) out[d] = (values[d] - nz.mean[d]) / nz.stddev[d];
    return out;
}

std::vector<double> invert_normalizer(const Normalizer& nz, const std::vector<double>& values) {
    if (values.size() != nz.mean.size()) throw std::invalid_argument("normalizer dimension mismatch");
    std::vector<double> out(values.size());
    for (std::size_t d = 0; d < values.size(); ++d) out[d] = values[d] * nz.stddev[d] + nz.mean[d];
    return out;
}

}  // namespace rdv
