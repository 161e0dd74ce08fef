#include "gapscope/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gapscope {

double RegimeTable::at(double sweep_value) const {
    for (const auto& band : bands)
        if (sweep_value < band.below) return band.value;
    return fallback;
}

void ExperimentConfig::validate() const {
    if (sweep_grid.empty()) throw ConfigError("sweep.grid: at least one value required");
    for (std::size_t k = 0; k + 1 < sweep_grid.size(); ++k)
        if (!(sweep_grid[k] < sweep_grid[k + 1]))
            throw ConfigError("sweep.grid: values must be strictly increasing");
    for (double v : sweep_grid)
        if (!std::isfinite(v)) throw ConfigError("sweep.grid: non-finite value");

    if (model == ModelKind::IsingChain && sites < 2)
        throw ConfigError("model.sites: chain needs at least 2 sites");
    if (model == ModelKind::IsingLattice && (rows < 2 || cols < 2))
        throw ConfigError("model.rows/cols: lattice extents must be >= 2");
    if (model != ModelKind::Molecule && !(j1 > 0))
        throw ConfigError("model.j1: coupling must be positive");
    if (model == ModelKind::Molecule) {
        if (molecule_files.size() != sweep_grid.size())
            throw ConfigError("model.files: need one molecule file per sweep value");
        if (sweep_parameter != "bond_length_angstrom")
            throw ConfigError("sweep.parameter: molecule sweeps use bond_length_angstrom");
    }

    if (ap_steps < 1) throw ConfigError("ap.steps: at least 1 required");
    if (evo_steps < 2) throw ConfigError("evo.steps: at least 2 required");
    for (const auto& band : delta_tau.bands)
        if (!(band.value > 0)) throw ConfigError("ap.delta_tau: step durations must be positive");
    if (!(delta_tau.fallback > 0))
        throw ConfigError("ap.delta_tau: step durations must be positive");
    if (t_max && !(*t_max > 0)) throw ConfigError("evo.t_max: must be positive or \"auto\"");
    if (!(periods > 0)) throw ConfigError("evo.periods: must be positive");
    for (int idx : node_subset)
        if (idx < 0 || idx >= evo_steps)
            throw ConfigError("evo.node_subset: index out of range [0, evo.steps)");
    if (freq_lo && *freq_lo < 0) throw ConfigError("fit.freq_lo: must be non-negative");
    if (freq_lo && freq_hi && !(*freq_hi > *freq_lo))
        throw ConfigError("fit.freq_hi: must exceed fit.freq_lo");
    if (shots != -1 && shots < 1) throw ConfigError("shots: positive count or \"exact\"");
    if (initial_state == InitialStateKind::CustomFile && initial_state_file.empty())
        throw ConfigError("ap.initial_state_file: required for custom_file");
    if (eigen_i == eigen_j || eigen_i < 0 || eigen_j < 0)
        throw ConfigError("ap.eigen_pair: two distinct non-negative indices");

    if (noise_enabled) {
        try {
            noise.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("noise: ") + e.what());
        }
        if (trajectories < 1) throw ConfigError("noise.trajectories: at least 1 required");
        if (model == ModelKind::Molecule)
            throw ConfigError("noise: molecular runs are noiseless (native-gate compilation "
                              "covers the Ising models only)");
    }
}

namespace {

// Representative trapped-ion gate fidelities; the hardware numbers are not
// public in citable form, so these are assumptions, not measurements.
constexpr double kAssumedFidelity1q = 0.9995;
constexpr double kAssumedFidelity2q = 0.996;

nlohmann::json noise_defaults_json(bool enabled) {
    return {
        {"enabled", enabled},
        {"t1_s", 100.0},
        {"t2_s", 1.0},
        {"tg1_s", 135e-6},
        {"tg2_s", 600e-6},
        {"f1", kAssumedFidelity1q},
        {"f2", kAssumedFidelity2q},
        {"readout_flip", 0.0039},
        {"backend", "density"},
        {"trajectories", 100},
        {"two_qubit_channel", "independent_1q"},
    };
}

nlohmann::json grid_json(double lo, double hi, int n) {
    nlohmann::json grid = nlohmann::json::array();
    for (int k = 0; k < n; ++k) grid.push_back(lo + k * (hi - lo) / (n - 1));
    return grid;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"ising-paper", "ising-paper-l10", "ising-lattice-2x2", "ising-noisy-paper",
            "ising-shots-paper", "molecule-paper", "molecule-paper-he2"};
}

nlohmann::json preset_json(const std::string& name) {
    if (name == "ising-paper") {
        return {
            {"model", {{"type", "ising_chain"}, {"sites", 4}, {"j1", 1.0}}},
            {"sweep", {{"parameter", "h3_over_j1"}, {"grid", grid_json(2.0, 7.5, 10)}}},
            {"ap",
             {{"steps", 15},
              {"delta_tau",
               {{"breakpoints",
                 nlohmann::json::array({{{"below", 3.6}, {"value", 0.25}},
                                        {{"below", 5.0}, {"value", 0.325}}})},
                {"default", 0.125}}},
              {"initial_state", "plus_all"}}},
            {"evo", {{"steps", 25}, {"t_max", "auto"}, {"periods", 1.5}}},
            {"observable", "auto"},
            {"shots", "exact"},
            {"seed", 20240801},
            {"plot",
             {{"bands", nlohmann::json::array(
                            {{{"from", 0.0}, {"to", 1.5}, {"label", "infrared limit"}},
                             {{"from", 8.0}, {"to", 12.0}, {"label", "adiabatic limit"}}})}}},
        };
    }
    if (name == "ising-paper-l10") {
        nlohmann::json j = preset_json("ising-paper");
        j["model"]["sites"] = 10;
        j["ap"]["delta_tau"] = {{"breakpoints", nlohmann::json::array(
                                                    {{{"below", 3.6}, {"value", 0.35}},
                                                     {{"below", 5.0}, {"value", 0.35}}})},
                                {"default", 0.325}};
        return j;
    }
    if (name == "ising-lattice-2x2") {
        nlohmann::json j = preset_json("ising-paper");
        j["model"] = {{"type", "ising_lattice"}, {"rows", 2}, {"cols", 2}, {"j1", 1.0}};
        return j;
    }
    if (name == "ising-noisy-paper") {
        nlohmann::json j = preset_json("ising-paper");
        // the observable-oscillation working point of the waves figure
        j["sweep"]["grid"] = nlohmann::json::array({7.257});
        j["shots"] = 8192;
        j["noise"] = noise_defaults_json(true);
        return j;
    }
    if (name == "ising-shots-paper") {
        nlohmann::json j = preset_json("ising-paper");
        j["sweep"]["grid"] = nlohmann::json::array({4.0});
        j["shots"] = 8192;
        return j;
    }
    if (name == "molecule-paper") {
        nlohmann::json files = nlohmann::json::array();
        nlohmann::json grid = nlohmann::json::array();
        for (const char* r : {"0.500", "0.600", "0.735", "0.900", "1.100", "1.300", "1.600",
                              "1.900", "2.200", "2.500"}) {
            files.push_back(std::string("fixtures/h2/h2_") + r + ".json");
            grid.push_back(std::stod(r));
        }
        return {
            {"model", {{"type", "molecule"}, {"files", files}}},
            {"sweep", {{"parameter", "bond_length_angstrom"}, {"grid", grid}}},
            {"ap",
             {{"steps", 5},
              {"delta_tau", 0.5},
              {"initial_state", "diagonal_pair"},
              {"eigen_pair", nlohmann::json::array({0, 1})}}},
            {"evo", {{"steps", 35}, {"t_max", "auto"}, {"periods", 1.0}}},
            {"observable", "auto"},
            {"shots", "exact"},
            {"seed", 20240802},
        };
    }
    if (name == "molecule-paper-he2") {
        nlohmann::json j = preset_json("molecule-paper");
        nlohmann::json files = nlohmann::json::array();
        nlohmann::json grid = nlohmann::json::array();
        for (const char* r : {"1.000", "1.500", "2.000", "2.500", "3.000"}) {
            files.push_back(std::string("fixtures/he2/he2_") + r + ".json");
            grid.push_back(std::stod(r));
        }
        j["model"]["files"] = files;
        j["sweep"]["grid"] = grid;
        return j;
    }
    throw ConfigError("unknown preset: " + name);
}

namespace {

void merge_patch(nlohmann::json& base, const nlohmann::json& overlay) {
    base.update(overlay, /*merge_objects=*/true);
}

template <typename T>
T require(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + "." + key + ": required key missing");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

template <typename T>
T get_or(const nlohmann::json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

RegimeTable parse_delta_tau(const nlohmann::json& j) {
    RegimeTable table;
    if (j.is_number()) {
        table.fallback = j.get<double>();
        return table;
    }
    if (!j.is_object())
        throw ConfigError("ap.delta_tau: number or {breakpoints, default} expected");
    for (const auto& band : j.value("breakpoints", nlohmann::json::array()))
        table.bands.push_back({require<double>(band, "below", "ap.delta_tau.breakpoints"),
                               require<double>(band, "value", "ap.delta_tau.breakpoints")});
    table.fallback = require<double>(j, "default", "ap.delta_tau");
    for (std::size_t k = 0; k + 1 < table.bands.size(); ++k)
        if (!(table.bands[k].below < table.bands[k + 1].below))
            throw ConfigError("ap.delta_tau.breakpoints: `below` must increase");
    return table;
}

} // namespace

ExperimentConfig parse_config(const nlohmann::json& input) {
    nlohmann::json j = input;
    // a manifest reruns the config it recorded
    if (j.contains("config") && j.contains("environment")) j = j.at("config");

    ExperimentConfig cfg;
    if (j.contains("preset")) {
        cfg.preset_name = j.at("preset").get<std::string>();
        nlohmann::json base = preset_json(cfg.preset_name);
        nlohmann::json overlay = j;
        overlay.erase("preset");
        merge_patch(base, overlay);
        j = base;
    }

    const nlohmann::json model = require<nlohmann::json>(j, "model", "config");
    const std::string type = require<std::string>(model, "type", "model");
    if (type == "ising_chain") {
        cfg.model = ModelKind::IsingChain;
        cfg.sites = require<int>(model, "sites", "model");
        cfg.j1 = get_or(model, "j1", 1.0);
    } else if (type == "ising_lattice") {
        cfg.model = ModelKind::IsingLattice;
        cfg.rows = require<int>(model, "rows", "model");
        cfg.cols = require<int>(model, "cols", "model");
        cfg.j1 = get_or(model, "j1", 1.0);
    } else if (type == "molecule") {
        cfg.model = ModelKind::Molecule;
        cfg.molecule_files = require<std::vector<std::string>>(model, "files", "model");
    } else {
        throw ConfigError("model.type: one of ising_chain | ising_lattice | molecule");
    }

    const nlohmann::json sweep = require<nlohmann::json>(j, "sweep", "config");
    cfg.sweep_parameter = require<std::string>(sweep, "parameter", "sweep");
    cfg.sweep_grid = require<std::vector<double>>(sweep, "grid", "sweep");

    const nlohmann::json ap = require<nlohmann::json>(j, "ap", "config");
    cfg.ap_steps = require<int>(ap, "steps", "ap");
    cfg.delta_tau = parse_delta_tau(
        ap.contains("delta_tau") ? ap.at("delta_tau") : nlohmann::json(0.25));
    const std::string init = get_or<std::string>(ap, "initial_state", "plus_all");
    if (init == "plus_all") {
        cfg.initial_state = InitialStateKind::PlusAll;
    } else if (init == "diagonal_pair") {
        cfg.initial_state = InitialStateKind::DiagonalPair;
    } else if (init == "custom_file") {
        cfg.initial_state = InitialStateKind::CustomFile;
        cfg.initial_state_file = require<std::string>(ap, "initial_state_file", "ap");
    } else {
        throw ConfigError("ap.initial_state: one of plus_all | diagonal_pair | custom_file");
    }
    if (ap.contains("eigen_pair")) {
        const auto pair = ap.at("eigen_pair").get<std::vector<int>>();
        if (pair.size() != 2) throw ConfigError("ap.eigen_pair: expected [i, j]");
        cfg.eigen_i = pair[0];
        cfg.eigen_j = pair[1];
    }

    const nlohmann::json evo = require<nlohmann::json>(j, "evo", "config");
    cfg.evo_steps = require<int>(evo, "steps", "evo");
    if (evo.contains("t_max") && !evo.at("t_max").is_string())
        cfg.t_max = evo.at("t_max").get<double>();
    cfg.periods = get_or(evo, "periods", 1.5);
    cfg.node_subset = get_or(evo, "node_subset", std::vector<int>{});

    if (j.contains("fit")) {
        const nlohmann::json fit = j.at("fit");
        if (fit.contains("freq_lo") && !fit.at("freq_lo").is_string())
            cfg.freq_lo = fit.at("freq_lo").get<double>();
        if (fit.contains("freq_hi") && !fit.at("freq_hi").is_string())
            cfg.freq_hi = fit.at("freq_hi").get<double>();
    }

    cfg.observable = get_or<std::string>(j, "observable", "auto");

    if (j.contains("shots") && !j.at("shots").is_string())
        cfg.shots = j.at("shots").get<std::int64_t>();

    if (j.contains("noise")) {
        const nlohmann::json noise = j.at("noise");
        cfg.noise_enabled = get_or(noise, "enabled", false);
        if (cfg.noise_enabled) {
            cfg.noise.t1_s = require<double>(noise, "t1_s", "noise");
            cfg.noise.t2_s = require<double>(noise, "t2_s", "noise");
            cfg.noise.gate_time_1q_s = require<double>(noise, "tg1_s", "noise");
            cfg.noise.gate_time_2q_s = require<double>(noise, "tg2_s", "noise");
            cfg.noise.fidelity_1q = require<double>(noise, "f1", "noise");
            cfg.noise.fidelity_2q = require<double>(noise, "f2", "noise");
            cfg.noise.readout_flip = require<double>(noise, "readout_flip", "noise");
            const std::string backend = get_or<std::string>(noise, "backend", "density");
            if (backend == "density") {
                cfg.noise_backend = NoiseBackend::Density;
            } else if (backend == "trajectories") {
                cfg.noise_backend = NoiseBackend::Trajectories;
            } else {
                throw ConfigError("noise.backend: density | trajectories");
            }
            cfg.trajectories = get_or(noise, "trajectories", 100);
            const std::string channel =
                get_or<std::string>(noise, "two_qubit_channel", "independent_1q");
            if (channel == "independent_1q") {
                cfg.noise.joint_two_qubit_channel = false;
            } else if (channel == "joint_2q") {
                cfg.noise.joint_two_qubit_channel = true;
            } else {
                throw ConfigError("noise.two_qubit_channel: independent_1q | joint_2q");
            }
        }
    }

    cfg.seed = get_or<std::uint64_t>(j, "seed", 1);

    if (j.contains("plot")) {
        for (const auto& band : j.at("plot").value("bands", nlohmann::json::array())) {
            cfg.plot_bands.push_back({require<double>(band, "from", "plot.bands"),
                                      require<double>(band, "to", "plot.bands"),
                                      get_or<std::string>(band, "label", "")});
        }
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    switch (cfg.model) {
        case ModelKind::IsingChain:
            j["model"] = {{"type", "ising_chain"}, {"sites", cfg.sites}, {"j1", cfg.j1}};
            break;
        case ModelKind::IsingLattice:
            j["model"] = {{"type", "ising_lattice"},
                          {"rows", cfg.rows},
                          {"cols", cfg.cols},
                          {"j1", cfg.j1}};
            break;
        case ModelKind::Molecule:
            j["model"] = {{"type", "molecule"}, {"files", cfg.molecule_files}};
            break;
    }
    j["sweep"] = {{"parameter", cfg.sweep_parameter}, {"grid", cfg.sweep_grid}};

    nlohmann::json dt;
    if (cfg.delta_tau.bands.empty()) {
        dt = cfg.delta_tau.fallback;
    } else {
        nlohmann::json bands = nlohmann::json::array();
        for (const auto& band : cfg.delta_tau.bands)
            bands.push_back({{"below", band.below}, {"value", band.value}});
        dt = {{"breakpoints", bands}, {"default", cfg.delta_tau.fallback}};
    }
    j["ap"] = {{"steps", cfg.ap_steps},
               {"delta_tau", dt},
               {"initial_state", cfg.initial_state == InitialStateKind::PlusAll ? "plus_all"
                                 : cfg.initial_state == InitialStateKind::DiagonalPair
                                     ? "diagonal_pair"
                                     : "custom_file"},
               {"eigen_pair", {cfg.eigen_i, cfg.eigen_j}}};
    if (!cfg.initial_state_file.empty()) j["ap"]["initial_state_file"] = cfg.initial_state_file;

    j["evo"] = {{"steps", cfg.evo_steps}, {"periods", cfg.periods}};
    j["evo"]["t_max"] = cfg.t_max ? nlohmann::json(*cfg.t_max) : nlohmann::json("auto");
    if (!cfg.node_subset.empty()) j["evo"]["node_subset"] = cfg.node_subset;

    j["fit"] = {{"freq_lo", cfg.freq_lo ? nlohmann::json(*cfg.freq_lo) : nlohmann::json("auto")},
                {"freq_hi", cfg.freq_hi ? nlohmann::json(*cfg.freq_hi) : nlohmann::json("auto")}};

    j["observable"] = cfg.observable;
    j["shots"] = cfg.shots == -1 ? nlohmann::json("exact") : nlohmann::json(cfg.shots);

    nlohmann::json noise = {{"enabled", cfg.noise_enabled}};
    if (cfg.noise_enabled) {
        noise["t1_s"] = cfg.noise.t1_s;
        noise["t2_s"] = cfg.noise.t2_s;
        noise["tg1_s"] = cfg.noise.gate_time_1q_s;
        noise["tg2_s"] = cfg.noise.gate_time_2q_s;
        noise["f1"] = cfg.noise.fidelity_1q;
        noise["f2"] = cfg.noise.fidelity_2q;
        noise["readout_flip"] = cfg.noise.readout_flip;
        noise["backend"] =
            cfg.noise_backend == NoiseBackend::Density ? "density" : "trajectories";
        noise["trajectories"] = cfg.trajectories;
        noise["two_qubit_channel"] =
            cfg.noise.joint_two_qubit_channel ? "joint_2q" : "independent_1q";
    }
    j["noise"] = noise;
    j["seed"] = cfg.seed;

    if (!cfg.plot_bands.empty()) {
        nlohmann::json bands = nlohmann::json::array();
        for (const auto& band : cfg.plot_bands)
            bands.push_back({{"from", band.from}, {"to", band.to}, {"label", band.label}});
        j["plot"] = {{"bands", bands}};
    }
    return j;
}

} // namespace gapscope
