#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gapscope/models.hpp"
#include "gapscope/noise.hpp"

namespace gapscope {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Piecewise-constant value keyed by the sweep parameter: the first
/// breakpoint with sweep_value < below wins, otherwise fallback.
struct RegimeTable {
    struct Band {
        double below;
        double value;
    };
    std::vector<Band> bands;
    double fallback = 0.0;

    double at(double sweep_value) const;
    static RegimeTable constant(double v) { return {{}, v}; }
};

enum class ModelKind { IsingChain, IsingLattice, Molecule };
enum class InitialStateKind { PlusAll, DiagonalPair, CustomFile };
enum class NoiseBackend { Density, Trajectories };

struct ExperimentConfig {
    std::string preset_name;  // empty when fully explicit

    ModelKind model = ModelKind::IsingChain;
    int sites = 4;
    int rows = 2, cols = 2;
    double j1 = 1.0;
    std::vector<std::string> molecule_files;  // aligned with sweep.grid

    std::string sweep_parameter = "h3_over_j1";
    std::vector<double> sweep_grid;

    int ap_steps = 15;
    RegimeTable delta_tau = RegimeTable::constant(0.25);
    InitialStateKind initial_state = InitialStateKind::PlusAll;
    std::string initial_state_file;
    int eigen_i = 0, eigen_j = 1;

    int evo_steps = 25;
    std::optional<double> t_max;  // nullopt = auto (pilot pass)
    double periods = 1.5;         // oscillation periods in the auto window
    std::vector<int> node_subset;  // empty = all nodes

    std::optional<double> freq_lo, freq_hi;  // nullopt = auto from pilot

    std::string observable = "auto";  // axes string, "auto", or file:<path>

    std::int64_t shots = -1;  // -1 = exact

    bool noise_enabled = false;
    NoiseModel noise;
    NoiseBackend noise_backend = NoiseBackend::Density;
    int trajectories = 100;

    std::uint64_t seed = 1;

    /// Shaded parameter bands for the sweep plot (regions where the budget
    /// is known to be insufficient); plain data, nothing is computed.
    struct ShadedBand {
        double from, to;
        std::string label;
    };
    std::vector<ShadedBand> plot_bands;

    int expected_budget() const { return ap_steps + evo_steps; }
    void validate() const;
};

/// Named presets carrying the paper budgets and tuned schedule tables.
std::vector<std::string> preset_names();
nlohmann::json preset_json(const std::string& name);

/// Parse a config object; {"preset": name, ...} merges overrides onto the
/// preset, and a manifest ({"config": {...}}) reruns its embedded config.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Fully explicit JSON form of a parsed config (presets expanded).
nlohmann::json config_to_json(const ExperimentConfig& cfg);

} // namespace gapscope
