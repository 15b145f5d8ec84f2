#include "tdnls/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tdnls {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = lower(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: expected key = value, got: " + line);
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string val = trim(line.substr(eq + 1));
        cfg.data_[section][key] = val;
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool ConfigMap::has(const std::string& section, const std::string& key) const {
    const auto s = data_.find(lower(section));
    return s != data_.end() && s->second.count(lower(key)) > 0;
}

std::string ConfigMap::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    const auto s = data_.find(lower(section));
    if (s == data_.end()) return fallback;
    const auto k = s->second.find(lower(key));
    return k == s->second.end() ? fallback : k->second;
}

double ConfigMap::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    if (!has(section, key)) return fallback;
    return std::stod(get_string(section, key, ""));
}

int ConfigMap::get_int(const std::string& section, const std::string& key,
                       int fallback) const {
    if (!has(section, key)) return fallback;
    return std::stoi(get_string(section, key, ""));
}

bool ConfigMap::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = lower(get_string(section, key, ""));
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw DomainError("config: bad boolean for " + section + "." + key + ": " + v);
}

std::vector<double> ConfigMap::get_list(const std::string& section,
                                        const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : get_string_list(section, key)) out.push_back(std::stod(tok));
    return out;
}

std::vector<std::string> ConfigMap::get_string_list(const std::string& section,
                                                    const std::string& key) const {
    std::vector<std::string> out;
    std::string raw = get_string(section, key, "");
    if (raw.empty()) return out;
    std::stringstream ss(raw);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

OscillatorModel model_by_name(const std::string& raw, const ConfigMap& cfg) {
    const std::string name = lower(raw);
    const double ts = cfg.get_double("oscillator", "t_start", 1.0);
    const double T0 = cfg.get_double("oscillator", "t0", 1.0);
    if (name == "zero" || name == "free") return OscillatorModel::zero(T0);
    if (name == "example1" || name == "inverse_square_attractive")
        return OscillatorModel::inverse_square_attractive(
            cfg.get_double("oscillator", "sigma0", 3.0 / 16.0), ts, T0);
    if (name == "example2" || name == "inverse_square_repulsive")
        return OscillatorModel::inverse_square_repulsive(
            cfg.get_double("oscillator", "rho", 1.0), ts, T0);
    if (name == "example3" || name == "sub_quadratic")
        return OscillatorModel::sub_quadratic(cfg.get_double("oscillator", "c", 1.0),
                                              cfg.get_double("oscillator", "q", 3.0), T0);
    if (name == "tabulated") {
        std::vector<double> knots, vals;
        for (const auto& pairstr : cfg.get_string_list("oscillator", "table")) {
            const auto colon = pairstr.find(':');
            if (colon == std::string::npos)
                throw DomainError("config: tabulated entries look like t:sigma");
            knots.push_back(std::stod(pairstr.substr(0, colon)));
            vals.push_back(std::stod(pairstr.substr(colon + 1)));
        }
        return OscillatorModel::tabulated(std::move(knots), std::move(vals), T0);
    }
    throw DomainError("config: unknown oscillator kind: " + raw);
}

OscillatorModel build_oscillator_model(const ConfigMap& cfg) {
    return model_by_name(cfg.get_string("oscillator", "kind", "zero"), cfg);
}

SimConfig build_sim_config(const ConfigMap& cfg) {
    SimConfig sc;
    sc.grid.dim = cfg.get_int("grid", "dim", 1);
    sc.grid.points = cfg.get_int("grid", "points", 1024);
    sc.grid.half_width = cfg.get_double("grid", "half_width", 64.0);
    sc.model = build_oscillator_model(cfg);
    sc.nl.p = cfg.get_double("nonlinearity", "p", 3.0);
    sc.nl.lambda_re = cfg.get_double("nonlinearity", "lambda_re", 0.0);
    sc.nl.lambda_im = cfg.get_double("nonlinearity", "lambda_im", -1.0);

    const std::string init = lower(cfg.get_string("run", "initial", "gaussian"));
    if (init == "gaussian")
        sc.initial.kind = InitialKind::Gaussian;
    else if (init == "fourier_bump")
        sc.initial.kind = InitialKind::FourierBump;
    else if (init == "random_field")
        sc.initial.kind = InitialKind::RandomField;
    else if (init == "from_file")
        sc.initial.kind = InitialKind::FromFile;
    else
        throw DomainError("config: unknown initial kind: " + init);
    sc.initial.width = cfg.get_double("run", "width", 1.0);
    sc.initial.amplitude = cfg.get_double("run", "amplitude", 1.0);
    sc.initial.center = cfg.get_double("run", "center", 0.0);
    sc.initial.chirp = cfg.get_double("run", "chirp", 0.0);
    sc.initial.bump_k0 = cfg.get_double("run", "bump_k0", 2.0);
    sc.initial.bump_width = cfg.get_double("run", "bump_width", 0.5);
    sc.initial.path = cfg.get_string("run", "initial_path", "");

    sc.t0 = cfg.get_double("run", "t0", sc.model.T0);
    sc.t_end = cfg.get_double("run", "t_end", 50.0);
    sc.dt = cfg.get_double("run", "dt", 0.005);
    const std::string frame = lower(cfg.get_string("run", "frame", "lens"));
    if (frame == "lens")
        sc.frame = FrameTag::Lens;
    else if (frame == "original")
        sc.frame = FrameTag::Original;
    else
        throw DomainError("config: unknown frame: " + frame);
    const std::string split = lower(cfg.get_string("run", "splitting", "strang"));
    if (split == "strang")
        sc.splitting = Splitting::Strang;
    else if (split == "lie")
        sc.splitting = Splitting::Lie;
    else
        throw DomainError("config: unknown splitting: " + split);
    sc.record_every = cfg.get_int("run", "record_every", 20);
    sc.s = cfg.get_double("run", "s", 2.0);
    sc.epsilon1 = cfg.get_double("run", "epsilon1", 0.1);
    sc.adaptive = cfg.get_bool("run", "adaptive", true);
    sc.step_ledger_tol = cfg.get_double("run", "step_ledger_tol", 1e-6);
    sc.dt_min = cfg.get_double("run", "dt_min", 1e-7);
    sc.dealias = cfg.get_bool("run", "dealias", false);
    sc.record_profile = cfg.get_bool("run", "record_profile", false);
    sc.record_x_norm = cfg.get_bool("run", "record_x_norm", true);
    sc.linf_ceiling = cfg.get_double("run", "linf_ceiling", 1e9);
    sc.boundary_warn = cfg.get_double("run", "boundary_warn", 1e-10);
    sc.save_fields_every = cfg.get_int("run", "save_fields_every", 0);
    return sc;
}

ExperimentSpec build_experiment_spec(const ConfigMap& cfg) {
    ExperimentSpec spec;
    spec.base = build_sim_config(cfg);
    spec.amplitudes = cfg.get_list("sweep", "amplitudes");
    spec.p_values = cfg.get_list("sweep", "ps");
    spec.model_names = cfg.get_string_list("sweep", "models");
    spec.refine_levels = cfg.get_int("sweep", "refine_levels", 0);
    spec.run_cross_validate = cfg.get_bool("sweep", "cross_validate", false);
    spec.run_profile = cfg.get_bool("sweep", "profile", false);
    spec.run_fits = cfg.get_bool("sweep", "fits", true);
    spec.out_dir = cfg.get_string("sweep", "out_dir", "out");
    if (spec.refine_levels == 1)
        throw DomainError("config: refinement studies need at least 2 levels");
    const bool has_axis = !spec.amplitudes.empty() || !spec.p_values.empty() ||
                          !spec.model_names.empty() || spec.refine_levels >= 2;
    if (!has_axis) spec.amplitudes = {spec.base.initial.amplitude};
    return spec;
}

}  // namespace tdnls
