#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdnls/solver.hpp"

namespace tdnls {

// Minimal sectioned key=value config format:
//   [grid]
//   dim = 1
//   points = 1024     # comments allowed
class ConfigMap {
public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& section,
                                             const std::string& key) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return data_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> data_;
};

OscillatorModel build_oscillator_model(const ConfigMap& cfg);
SimConfig build_sim_config(const ConfigMap& cfg);

struct ExperimentSpec {
    SimConfig base;
    std::vector<double> amplitudes;       // empty = just the base amplitude
    std::vector<double> p_values;
    std::vector<std::string> model_names; // zero | example1 | example2 | sub_quadratic
    int refine_levels = 0;                // >= 2 enables the dt-refinement study
    bool run_cross_validate = false;
    bool run_profile = false;
    bool run_fits = true;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

ExperimentSpec build_experiment_spec(const ConfigMap& cfg);

OscillatorModel model_by_name(const std::string& name, const ConfigMap& cfg);

}  // namespace tdnls
