#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdv/angles.hpp"
#include "rdv/chain.hpp"
#include "rdv/classify.hpp"
#include "rdv/constants.hpp"
#include "rdv/datagen.hpp"
#include "rdv/features.hpp"
#include "rdv/json_io.hpp"
#include "rdv/lambert.hpp"
#include "rdv/mlp.hpp"
#include "rdv/optimizer.hpp"
#include "rdv/propagate.hpp"
#include "rdv/sweep.hpp"

namespace {

using namespace rdv;

struct CommonOpts {
    std::string constants_file;
    int jobs = 1;
};

PhysicalConstants resolve_constants(const CommonOpts& c) {
    return c.constants_file.empty() ? PhysicalConstants{} : load_constants(c.constants_file);
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << body;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

Vec3 parse_vec3(const std::vector<double>& v, const char* flag) {
    if (v.size() != 3) throw std::runtime_error(std::string(flag) + " needs exactly three components");
    return {v[0], v[1], v[2]};
}

nlohmann::json constants_json(const PhysicalConstants& k) {
    return {{"mu", k.mu}, {"j2", k.j2}, {"re", k.re}};
}

nlohmann::json optimizer_config_json(const OptimizerConfig& cfg) {
    return {{"n_impulses", cfg.n_impulses},
            {"restarts", cfg.restarts},
            {"de_population", cfg.de_population},
            {"de_generations", cfg.de_generations},
            {"de_phases", cfg.de_phases},
            {"de_weight", cfg.de_weight},
            {"de_crossover", cfg.de_crossover},
            {"de_dither", cfg.de_dither},
            {"seed", cfg.seed},
            {"eps_r", cfg.eps_r},
            {"eps_v", cfg.eps_v},
            {"impulse_bound", cfg.impulse_bound},
            {"impulse_init_bound", cfg.impulse_init_bound},
            {"refine_max_evals", cfg.refine_max_evals},
            {"constants", constants_json(cfg.constants)}};
}

void add_optimizer_flags(CLI::App* cmd, OptimizerConfig& opt) {
    cmd->add_option("--population", opt.de_population, "DE population size");
    cmd->add_option("--generations", opt.de_generations, "DE generations per restart");
    cmd->add_option("--phases", opt.de_phases, "DE intensification phases per restart");
    cmd->add_option("--refine-evals", opt.refine_max_evals, "local refinement evaluation budget");
    cmd->add_option("--eps-r", opt.eps_r, "terminal position tolerance [m]");
    cmd->add_option("--eps-v", opt.eps_v, "terminal velocity tolerance [m/s]");
    cmd->add_option("--impulse-bound", opt.impulse_bound, "per-component impulse bound [m/s]");
    cmd->add_option("--impulses", opt.n_impulses, "impulse count");
}

std::vector<int> parse_hidden(const std::string& s) {
    std::vector<int> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

void apply_range_overrides(GenerationConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ranges file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (auto& c : line) {
            if (c == '=') c = ' ';
        }
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        double value = 0.0;
        if (!(ls >> value)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing value for '" + key + "'");
        }
        if (key == "a_min_km") cfg.a.lo = value * 1000.0;
        else if (key == "a_max_km") cfg.a.hi = value * 1000.0;
        else if (key == "e_min") cfg.e.lo = value;
        else if (key == "e_max") cfg.e.hi = value;
        else if (key == "i_min_deg") cfg.inc.lo = deg2rad(value);
        else if (key == "i_max_deg") cfg.inc.hi = deg2rad(value);
        else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
}

int cmd_propagate(const std::string& el_file, double dt_days, const CommonOpts& common,
                  const std::string& out_file) {
    const PhysicalConstants k = resolve_constants(common);
    const OrbitalElements el = load_elements(el_file);
    const OrbitalElements out = propagate_j2(el, dt_days * 86400.0, k);
    nlohmann::json j = elements_to_json(out);
    j["provenance"] = {{"command", "propagate"},
                       {"input", el_file},
                       {"dt_days", dt_days},
                       {"constants", constants_json(k)}};
    const std::string body = j.dump(1) + "\n";
    if (out_file.empty()) std::cout << body;
    else write_text_file(out_file, body);
    return 0;
}

int cmd_lambert(const std::vector<double>& r1v, const std::vector<double>& r2v, double dt,
                double mu, bool long_way, const std::string& out_file) {
    const Vec3 r1 = parse_vec3(r1v, "--r1");
    const Vec3 r2 = parse_vec3(r2v, "--r2");
    const LambertSolution sol = solve_lambert(r1, r2, dt, mu, long_way);
    nlohmann::json j = {{"v1_mps", {sol.v1.x, sol.v1.y, sol.v1.z}},
                        {"v2_mps", {sol.v2.x, sol.v2.y, sol.v2.z}},
                        {"iterations", sol.iterations},
                        {"provenance",
                         {{"command", "lambert"},
                          {"r1_m", r1v},
                          {"r2_m", r2v},
                          {"dt_s", dt},
                          {"mu", mu},
                          {"long_way", long_way}}}};
    const std::string body = j.dump(1) + "\n";
    if (out_file.empty()) std::cout << body;
    else write_text_file(out_file, body);
    return 0;
}

int cmd_classify(const std::string& dep_file, const std::string& tgt_file, double dt_days,
                 const CommonOpts& common) {
    const PhysicalConstants k = resolve_constants(common);
    const OrbitalElements dep = load_elements(dep_file);
    const OrbitalElements tgt = load_elements(tgt_file);
    const double dt = dt_days * 86400.0;
    const TransferType type = classify_transfer(dep, tgt, dt, k);
    const NodeDeltas d = node_deltas(dep, tgt, dt, k);
    std::cout << to_string(type) << " d0_deg=" << format_double(rad2deg(d.initial))
              << " df_deg=" << format_double(rad2deg(d.final)) << "\n";
    return 0;
}

int cmd_optimize(const std::string& dep_file, const std::string& tgt_file, double dt_max_days,
                 OptimizerConfig opt, const CommonOpts& common, const std::string& out_file) {
    opt.constants = resolve_constants(common);
    opt.jobs = common.jobs;
    const OrbitalElements dep = load_elements(dep_file);
    const OrbitalElements tgt = load_elements(tgt_file);
    const double dt_max = dt_max_days * 86400.0;
    const TransferSolution sol = optimize_transfer(dep, tgt, dt_max, opt);

    nlohmann::json j = solution_to_json(sol);
    j["config"] = optimizer_config_json(opt);
    j["config"]["dep_file"] = dep_file;
    j["config"]["tgt_file"] = tgt_file;
    j["config"]["dt_max_days"] = dt_max_days;
    const std::string body = j.dump(1) + "\n";
    if (!out_file.empty()) write_text_file(out_file, body);
    std::cout << "total_dv_mps=" << format_double(sol.total_dv)
              << " pos_residual_m=" << format_double(sol.pos_residual)
              << " vel_residual_mps=" << format_double(sol.vel_residual) << "\n";
    return 0;
}

int cmd_gen_dataset(const std::string& type_name, GenerationConfig cfg, const CommonOpts& common,
                    const std::string& ranges_file, const std::string& out_file) {
    const PhysicalConstants k = resolve_constants(common);
    cfg.opt.constants = k;
    cfg.jobs = common.jobs;
    if (!ranges_file.empty()) apply_range_overrides(cfg, ranges_file);
    const TransferType type = transfer_type_from_string(type_name);
    const int written = build_dataset(type, cfg, k, out_file,
                                      [](const std::string& msg) { std::cerr << msg << "\n"; });
    // Records carry per-sample provenance; the full generation config goes in
    // a sidecar so the file pair reproduces the dataset exactly.
    nlohmann::json meta = {{"command", "gen-dataset"},
                           {"type", to_string(type)},
                           {"count", cfg.samples_per_type},
                           {"restarts", cfg.restarts_per_sample},
                           {"seed", cfg.seed},
                           {"dt_min_s", cfg.dt_min},
                           {"dt_max_s", cfg.dt_max},
                           {"d1_rad", cfg.d1},
                           {"d2_rad", cfg.d2},
                           {"a_m", {cfg.a.lo, cfg.a.hi}},
                           {"e", {cfg.e.lo, cfg.e.hi}},
                           {"i_rad", {cfg.inc.lo, cfg.inc.hi}},
                           {"optimizer", optimizer_config_json(cfg.opt)}};
    write_text_file(out_file + ".meta.json", meta.dump(1) + "\n");
    std::cout << "wrote " << written << " samples to " << out_file << "\n";
    return 0;
}

int cmd_train(const std::string& data_file, const std::string& type_name, TrainConfig tc,
              const std::string& hidden_spec, const CommonOpts& common,
              const std::string& out_file, const std::string& trace_file, bool scale_sweep,
              const std::string& sweep_out) {
    const PhysicalConstants k = resolve_constants(common);
    const TransferType type = transfer_type_from_string(type_name);
    if (!hidden_spec.empty()) tc.hidden_layers = parse_hidden(hidden_spec);

    const std::vector<TransferSample> all = load_dataset(data_file);
    const FeatureSchema schema = default_schema(type);
    std::vector<FeatureVector> X;
    std::vector<double> y;
    for (const auto& s : all) {
        if (s.type != type) continue;
        X.push_back(extract(s, schema, k));
        y.push_back(s.dv_opt);
    }

    if (scale_sweep) {
        std::string csv = "# command=train --scale-sweep data=" + data_file + " type=" + type_name +
                          " seed=" + std::to_string(tc.seed) + " epochs=" + std::to_string(tc.max_epochs) +
                          " rows=" + std::to_string(X.size()) + "\n";
        csv += "hidden_layers,width,val_mre\n";
        for (int layers = 2; layers <= 4; ++layers) {
            for (int width = 10; width <= 100; width += 10) {
                TrainConfig cfg = tc;
                cfg.hidden_layers.assign(static_cast<std::size_t>(layers), width);
                std::vector<EpochStats> trace;
                train_mlp(X, y, type, schema, cfg, &trace);
                double best_mre = trace.front().val_mre;
                double best_loss = trace.front().val_loss;
                for (const auto& ep : trace) {
                    if (ep.val_loss < best_loss) {
                        best_loss = ep.val_loss;
                        best_mre = ep.val_mre;
                    }
                }
                csv += std::to_string(layers) + "," + std::to_string(width) + "," +
                       format_double(best_mre) + "\n";
            }
        }
        if (sweep_out.empty()) std::cout << csv;
        else write_text_file(sweep_out, csv);
        return 0;
    }

    std::vector<EpochStats> trace;
    MlpModel model = train_mlp(X, y, type, schema, tc, &trace);
    save_model(model, out_file);
    {
        // Re-write with provenance appended (save_model pins the model keys).
        std::ifstream in(out_file, std::ios::binary);
        nlohmann::json j;
        in >> j;
        j["provenance"] = {{"command", "train"},
                           {"data", data_file},
                           {"rows", X.size()},
                           {"epochs", tc.max_epochs},
                           {"batch_size", tc.batch_size},
                           {"seed", tc.seed},
                           {"constants", constants_json(k)}};
        write_text_file(out_file, j.dump(1) + "\n");
    }
    if (!trace_file.empty()) {
        std::string csv = "# command=train data=" + data_file + " type=" + type_name +
                          " seed=" + std::to_string(tc.seed) + "\n";
        csv += "epoch,train_loss,val_loss,val_mre\n";
        for (std::size_t ep = 0; ep < trace.size(); ++ep) {
            csv += std::to_string(ep) + "," + format_double(trace[ep].train_loss) + "," +
                   format_double(trace[ep].val_loss) + "," + format_double(trace[ep].val_mre) + "\n";
        }
        write_text_file(trace_file, csv);
    }
    double best_mre = trace.empty() ? 0.0 : trace.front().val_mre;
    double best_loss = trace.empty() ? 0.0 : trace.front().val_loss;
    for (const auto& ep : trace) {
        if (ep.val_loss < best_loss) {
            best_loss = ep.val_loss;
            best_mre = ep.val_mre;
        }
    }
    std::cout << "trained on " << X.size() << " rows, " << trace.size()
              << " epochs, val_mre=" << format_double(best_mre) << "\n";
    return 0;
}

int cmd_evaluate(const std::string& model_file, const std::string& data_file,
                 const CommonOpts& common) {
    const PhysicalConstants k = resolve_constants(common);
    const MlpModel model = load_model(model_file);
    const std::vector<TransferSample> all = load_dataset(data_file);
    std::vector<FeatureVector> X;
    std::vector<double> y;
    for (const auto& s : all) {
        if (s.type != model.type) continue;
        X.push_back(extract(s, model.schema, k));
        y.push_back(s.dv_opt);
    }
    std::cout << "rows=" << X.size() << " mre=" << format_double(evaluate_mre(model, X, y)) << "\n";
    return 0;
}

int cmd_eval_chain(const std::string& chain_file, const std::string& models_dir,
                   const CommonOpts& common, const std::string& out_file) {
    const PhysicalConstants k = resolve_constants(common);
    const ChainSpec spec = load_chain(chain_file);
    const ModelSet models = load_models(models_dir);
    const ChainEstimate est = estimate_chain(spec, models, k);
    std::string csv = "# command=eval-chain chain=" + chain_file + " models=" + models_dir + "\n";
    csv += chain_estimate_csv(spec, est);
    if (out_file.empty()) std::cout << csv;
    else write_text_file(out_file, csv);
    return 0;
}

int cmd_sweep(const std::string& dep_file, const std::string& tgt_file, SweepConfig cfg,
              const CommonOpts& common, const std::string& out_file) {
    cfg.opt.constants = resolve_constants(common);
    cfg.opt.jobs = common.jobs;
    const OrbitalElements dep = dep_file.empty() ? demo_sweep_departure() : load_elements(dep_file);
    const OrbitalElements tgt = tgt_file.empty() ? demo_sweep_target() : load_elements(tgt_file);
    const std::vector<SweepCell> cells = run_sweep(dep, tgt, cfg);

    std::string csv = "# command=sweep seed=" + std::to_string(cfg.opt.seed) +
                      " restarts=" + std::to_string(cfg.opt.restarts) +
                      " population=" + std::to_string(cfg.opt.de_population) +
                      " generations=" + std::to_string(cfg.opt.de_generations) +
                      " phases=" + std::to_string(cfg.opt.de_phases) +
                      " dep=" + (dep_file.empty() ? "builtin" : dep_file) +
                      " tgt=" + (tgt_file.empty() ? "builtin" : tgt_file) + "\n";
    csv += "offset_deg,dt_days,type,dv_mps,restarts\n";
    for (const auto& cell : cells) {
        csv += format_double(cell.offset_deg) + "," + format_double(cell.dt_days) + "," +
               to_string(cell.type) + "," + format_double(cell.dv) + "," +
               std::to_string(cell.restarts) + "\n";
    }
    if (out_file.empty()) std::cout << csv;
    else write_text_file(out_file, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEO multiple-impulse rendezvous toolkit: optimize transfers, build labeled "
                 "databases, train dv estimators, and score transfer chains"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--constants", common.constants_file, "constants config file (mu, j2, re)")
        ->envname("RDV_CONSTANTS");
    app.add_option("--jobs", common.jobs, "worker thread cap for parallel stages");

    std::string p_el, p_out;
    double p_dt_days = 0.0;
    auto* p = app.add_subcommand("propagate", "secular-J2 propagation of an element file");
    p->add_option("--el", p_el, "element JSON file")->required();
    p->add_option("--dt-days", p_dt_days, "propagation span [days]")->required();
    p->add_option("--out", p_out, "output file (stdout if omitted)");

    std::vector<double> l_r1, l_r2;
    double l_dt = 0.0, l_mu = PhysicalConstants{}.mu;
    bool l_long = false;
    std::string l_out;
    auto* l = app.add_subcommand("lambert", "zero-revolution Lambert targeting (debug surface)");
    l->add_option("--r1", l_r1, "departure position [m]")->delimiter(',')->expected(3)->required();
    l->add_option("--r2", l_r2, "arrival position [m]")->delimiter(',')->expected(3)->required();
    l->add_option("--dt", l_dt, "time of flight [s]")->required();
    l->add_option("--mu", l_mu, "gravitational parameter");
    l->add_flag("--long-way", l_long, "take the > pi transfer-angle branch");
    l->add_option("--out", l_out, "output file (stdout if omitted)");

    std::string c_dep, c_tgt;
    double c_dt_days = 0.0;
    auto* c = app.add_subcommand("classify", "transfer-type classification of an element pair");
    c->add_option("--dep", c_dep, "departure element file")->required();
    c->add_option("--tgt", c_tgt, "target element file")->required();
    c->add_option("--dt-days", c_dt_days, "transfer window [days]")->required();

    std::string o_dep, o_tgt, o_out;
    double o_dt_max_days = 0.0;
    OptimizerConfig o_cfg;
    auto* o = app.add_subcommand("optimize", "two-step multiple-impulse transfer optimization");
    o->add_option("--dep", o_dep, "departure element file")->required();
    o->add_option("--tgt", o_tgt, "target element file")->required();
    o->add_option("--dt-max-days", o_dt_max_days, "maximum transfer time [days]")->required();
    o->add_option("--restarts", o_cfg.restarts, "independent restarts");
    o->add_option("--seed", o_cfg.seed, "RNG seed");
    o->add_option("--out", o_out, "solution JSON output file");
    add_optimizer_flags(o, o_cfg);

    std::string g_type, g_out, g_ranges;
    GenerationConfig g_cfg;
    double g_dt_max_days = 30.0, g_dt_min_days = 1.0, g_d1_deg = 10.0, g_d2_deg = 10.0;
    auto* g = app.add_subcommand("gen-dataset", "generate labeled transfer samples (JSON lines)");
    g->add_option("--type", g_type, "closing|intersecting|separating")->required();
    g->add_option("--count", g_cfg.samples_per_type, "samples to reach in the output file")->required();
    g->add_option("--restarts", g_cfg.restarts_per_sample, "optimizer restarts per sample");
    g->add_option("--seed", g_cfg.seed, "RNG seed");
    g->add_option("--out", g_out, "output JSONL file")->required();
    g->add_option("--dt-max-days", g_dt_max_days, "transfer-window upper bound [days]");
    g->add_option("--dt-min-days", g_dt_min_days, "transfer-window lower bound [days]");
    g->add_option("--d1-deg", g_d1_deg, "max final node difference [deg]");
    g->add_option("--d2-deg", g_d2_deg, "max initial node difference [deg]");
    g->add_option("--ranges", g_ranges, "element-range override file");
    add_optimizer_flags(g, g_cfg.opt);

    std::string t_data, t_type, t_out = "model.json", t_trace, t_hidden, t_sweep_out;
    TrainConfig t_cfg;
    bool t_scale_sweep = false;
    auto* t = app.add_subcommand("train", "train a per-type dv regression network");
    t->add_option("--data", t_data, "dataset JSONL file")->required();
    t->add_option("--type", t_type, "closing|intersecting|separating")->required();
    t->add_option("--epochs", t_cfg.max_epochs, "maximum training epochs");
    t->add_option("--seed", t_cfg.seed, "RNG seed");
    t->add_option("--batch", t_cfg.batch_size, "mini-batch size");
    t->add_option("--patience", t_cfg.early_stop_patience, "early-stop patience [epochs]");
    t->add_option("--hidden", t_hidden, "hidden widths, e.g. 60,60,60 (default per type)");
    t->add_option("--out", t_out, "model JSON output file");
    t->add_option("--trace", t_trace, "per-epoch CSV output file");
    t->add_flag("--scale-sweep", t_scale_sweep, "grid over 2-4 layers x 10-100 nodes, CSV output");
    t->add_option("--sweep-out", t_sweep_out, "scale-sweep CSV file (stdout if omitted)");

    std::string e_model, e_data;
    auto* e = app.add_subcommand("evaluate", "mean relative error of a model on a dataset");
    e->add_option("--model", e_model, "model JSON file")->required();
    e->add_option("--data", e_data, "dataset JSONL file")->required();

    std::string ch_chain, ch_models, ch_out;
    auto* ch = app.add_subcommand("eval-chain", "estimate per-leg and cumulative dv of a chain");
    ch->add_option("--chain", ch_chain, "chain JSON file")->required();
    ch->add_option("--models", ch_models, "directory with closing/intersecting/separating models")
        ->required();
    ch->add_option("--out", ch_out, "CSV output file (stdout if omitted)");

    std::string s_dep, s_tgt, s_out;
    SweepConfig s_cfg;
    auto* s = app.add_subcommand("sweep", "dv vs transfer time and node offset study (CSV)");
    s->add_option("--offsets-deg", s_cfg.offsets_deg, "initial node offsets [deg]")
        ->delimiter(',')
        ->required();
    s->add_option("--dt-days", s_cfg.dt_days, "transfer-time bounds [days]")->delimiter(',')->required();
    s->add_option("--dep", s_dep, "departure element file (built-in demo pair if omitted)");
    s->add_option("--tgt", s_tgt, "target element file (built-in demo pair if omitted)");
    s->add_option("--restarts", s_cfg.opt.restarts, "restarts per cell");
    s->add_option("--seed", s_cfg.opt.seed, "RNG seed");
    s->add_option("--out", s_out, "CSV output file (stdout if omitted)");
    add_optimizer_flags(s, s_cfg.opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (p->parsed()) return cmd_propagate(p_el, p_dt_days, common, p_out);
        if (l->parsed()) return cmd_lambert(l_r1, l_r2, l_dt, l_mu, l_long, l_out);
        if (c->parsed()) return cmd_classify(c_dep, c_tgt, c_dt_days, common);
        if (o->parsed()) return cmd_optimize(o_dep, o_tgt, o_dt_max_days, o_cfg, common, o_out);
        if (g->parsed()) {
            g_cfg.dt_max = g_dt_max_days * 86400.0;
            g_cfg.dt_min = g_dt_min_days * 86400.0;
            g_cfg.d1 = deg2rad(g_d1_deg);
            g_cfg.d2 = deg2rad(g_d2_deg);
            return cmd_gen_dataset(g_type, g_cfg, common, g_ranges, g_out);
        }
        if (t->parsed())
            return cmd_train(t_data, t_type, t_cfg, t_hidden, common, t_out, t_trace, t_scale_sweep,
                             t_sweep_out);
        if (e->parsed()) return cmd_evaluate(e_model, e_data, common);
        if (ch->parsed()) return cmd_eval_chain(ch_chain, ch_models, common, ch_out);
        if (s->parsed()) return cmd_sweep(s_dep, s_tgt, s_cfg, common, s_out);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
