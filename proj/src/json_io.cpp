#include "rdv/json_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace rdv {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::json elements_to_json(const OrbitalElements& el) {
    return nlohmann::json{{"a_m", el.a},
                          {"e", el.e},
                          {"i_rad", el.i},
                          {"raan_rad", el.raan},
                          {"argp_rad", el.argp},
                          {"mean_anom_rad", el.mean_anomaly},
                          {"epoch_s", el.epoch}};
}

OrbitalElements elements_from_json(const nlohmann::json& j) {
    OrbitalElements el;
    el.a = j.at("a_m").get<double>();
    el.e = j.at("e").get<double>();
    el.i = j.at("i_rad").get<double>();
    el.raan = j.at("raan_rad").get<double>();
    el.argp = j.at("argp_rad").get<double>();
    const bool has_mean = j.contains("mean_anom_rad");
    const bool has_true = j.contains("true_anom_rad");
    if (has_mean == has_true) {
        throw std::runtime_error("element object needs exactly one of mean_anom_rad / true_anom_rad");
    }
    el.mean_anomaly = has_mean ? j.at("mean_anom_rad").get<double>()
                               : true_to_mean_anomaly(j.at("true_anom_rad").get<double>(), el.e);
    el.epoch = j.value("epoch_s", 0.0);
    el = normalized_angles(el);
    validate(el);
    return el;
}

OrbitalElements load_elements(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open element file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed element file " + path + ": " + e.what());
    }
    return elements_from_json(j);
}

void save_elements(const OrbitalElements& el, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open element file for writing: " + path);
    out << elements_to_json(el).dump(1) << "\n";
}

nlohmann::json sample_to_json(const TransferSample& s) {
    return nlohmann::json{{"type", to_string(s.type)},
                          {"dep0", elements_to_json(s.dep0)},
                          {"tgt0", elements_to_json(s.tgt0)},
                          {"dt_max_s", s.dt_max},
                          {"dv_mps", s.dv_opt},
                          {"seed", s.seed},
                          {"restarts", s.restarts},
                          {"alg", s.alg}};
}

TransferSample sample_from_json(const nlohmann::json& j) {
    TransferSample s;
    s.type = transfer_type_from_string(j.at("type").get<std::string>());
    s.dep0 = elements_from_json(j.at("dep0"));
    s.tgt0 = elements_from_json(j.at("tgt0"));
    s.dt_max = j.at("dt_max_s").get<double>();
    s.dv_opt = j.at("dv_mps").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.restarts = j.at("restarts").get<int>();
    s.alg = j.at("alg").get<std::string>();
    return s;
}

std::vector<TransferSample> load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::vector<TransferSample> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(sample_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad record: " + e.what());
        }
    }
    return out;
}

nlohmann::json solution_to_json(const TransferSolution& sol) {
    nlohmann::json impulses = nlohmann::json::array();
    for (const auto& dv : sol.impulses) impulses.push_back({dv.x, dv.y, dv.z});
    return nlohmann::json{
        {"maneuver_times_s", sol.maneuver_times},
        {"impulses_mps", impulses},
        {"total_dv_mps", sol.total_dv},
        {"pos_residual_m", sol.pos_residual},
        {"vel_residual_mps", sol.vel_residual},
        {"model", sol.model == TerminalModel::fully_perturbed ? "fully_perturbed" : "two_body_terminal"}};
}

}  // namespace rdv
