#include "qram/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qram/cavity_model.hpp"

namespace qram {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}
}  // namespace

RunConfig::RunConfig() {
    values_ = {
        {"omega_c_thz", 406.774},
        {"kappa_ghz", 20.34},
        {"gamma_mhz", 94.0},
        {"cooperativity", 100.0},
        {"kappa_wg_over_kappa", 0.97},
        {"tau_reset_us", 5.0},
        {"eta_str_db_per_m", 2.7},
        {"eta_bend_db_per_m", 9.3},
        {"eta_det_db", 1.3},
        {"r_resonator_um", 50.0},
        {"n_eff", 2.2645},
        {"n_g_pic", 2.3862},
        {"n_g_dmd", 2.4513},
        {"t_e_to_n_us", 16.0},
        {"t_n_to_e_ns", 30.0},
        {"fit_a", 1.7094},
        {"fit_b", 0.79386},
        {"ell_pic_um", 500.0},
        {"ell_dmd_um", 10.0},
        {"bends_per_layer", 2.0},
        {"bend_length_um", 10.0},
        {"attempt_time_ns", 200.0},
        {"eta_path", 0.0},  // 0 -> derive from the layer-1 propagation efficiency
        {"t2_nuclear_s", 1.0},
        {"t2_electron_s", 0.01},
        {"decoherence_calibration", 0.0},  // 0 -> calibrate at the F_q = 0.5 anchor
        {"bucket_brigade_error_coeff", 1.0},
    };
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path.string());
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        cfg.parse_line(line, path.string() + ":" + std::to_string(lineno));
    }
    cfg.validate();
    return cfg;
}

void RunConfig::parse_line(const std::string& raw, const std::string& where) {
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
    line = trim(line);
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: missing '=' at " + where);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!values_.count(key)) throw std::invalid_argument("config: unknown key '" + key + "' at " + where);
    std::size_t consumed = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value for '" + key + "' at " + where);
    }
    if (consumed != value.size()) throw std::invalid_argument("config: trailing junk for '" + key + "' at " + where);
    values_[key] = v;
}

void RunConfig::apply_env_overrides() {
    for (auto& [key, value] : values_) {
        std::string env = "QRAM_" + key;
        std::transform(env.begin(), env.end(), env.begin(), [](unsigned char c) { return std::toupper(c); });
        if (const char* s = std::getenv(env.c_str())) {
            try {
                value = std::stod(s);
            } catch (const std::exception&) {
                throw std::invalid_argument("config: bad environment override " + env);
            }
        }
    }
    validate();
}

double RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    return it->second;
}

void RunConfig::set(const std::string& key, double value) {
    if (!values_.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
    values_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return values_.count(key) > 0; }

void RunConfig::dump(std::ostream& os) const {
    for (const auto& [key, value] : values_) os << key << " = " << format_double(value) << "\n";
}

std::string RunConfig::dump_string() const {
    std::ostringstream ss;
    dump(ss);
    return ss.str();
}

std::uint64_t RunConfig::hash() const {
    const std::string text = dump_string();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

double RunConfig::kappa() const { return kTwoPi * get("kappa_ghz") * 1e9; }
double RunConfig::gamma() const { return kTwoPi * get("gamma_mhz") * 1e6; }
double RunConfig::omega_c() const { return kTwoPi * get("omega_c_thz") * 1e12; }
double RunConfig::cooperativity() const { return get("cooperativity"); }
double RunConfig::kappa_wg_ratio() const { return get("kappa_wg_over_kappa"); }
double RunConfig::tau_reset() const { return get("tau_reset_us") * 1e-6; }
double RunConfig::eta_det_linear() const { return std::pow(10.0, -get("eta_det_db") / 10.0); }
double RunConfig::t_e_to_n() const { return get("t_e_to_n_us") * 1e-6; }
double RunConfig::t_n_to_e() const { return get("t_n_to_e_ns") * 1e-9; }
double RunConfig::attempt_time() const { return get("attempt_time_ns") * 1e-9; }

glm::TreeConfig RunConfig::tree_config(int depth) const {
    return glm::TreeConfig::layered(depth, get("ell_pic_um") * 1e-6, get("ell_dmd_um") * 1e-6, get("n_g_pic"),
                                    get("n_g_dmd"), tau_reset());
}

glm::LossModel RunConfig::loss_model() const {
    glm::LossModel loss;
    loss.propagation_loss_straight_db_per_m = get("eta_str_db_per_m");
    loss.propagation_loss_bend_db_per_m = get("eta_bend_db_per_m");
    loss.detection_efficiency = eta_det_linear();
    loss.path_efficiency = get("eta_path");
    loss.r_cav = 1.0;
    loss.r_m = 1.0;
    loss.bends_per_layer = static_cast<int>(get("bends_per_layer"));
    loss.bend_length = get("bend_length_um") * 1e-6;
    return loss;
}

teleport::FitModel RunConfig::fit_model() const { return {get("fit_a"), get("fit_b")}; }

teleport::CoherenceModel RunConfig::coherence_model() const {
    double calibration = get("decoherence_calibration");
    if (calibration <= 0.0) calibration = teleport::calibrate_decoherence_constant(t_e_to_n());
    return {get("t2_nuclear_s"), get("t2_electron_s"), calibration};
}

teleport::TeleportCurveInputs RunConfig::teleport_inputs() const {
    teleport::TeleportCurveInputs in;
    in.kappa = kappa();
    in.gamma = gamma();
    in.omega_c = omega_c();
    in.cooperativity = cooperativity();
    in.tree_template = tree_config(1);
    in.loss_template = loss_model();
    in.eta_path_override = get("eta_path");
    in.swap_to_nuclear_time = t_e_to_n();
    in.swap_to_broker_time = t_n_to_e();
    in.attempt_time = attempt_time();
    in.fit = fit_model();
    in.coherence = coherence_model();
    return in;
}

void RunConfig::validate() const {
    if (!(get("kappa_ghz") > 0.0) || !(get("gamma_mhz") > 0.0) || !(get("omega_c_thz") > 0.0))
        throw std::invalid_argument("config: rates and omega_c must be positive");
    const double ratio = get("kappa_wg_over_kappa");
    if (!(ratio > 0.0) || ratio > 1.0)
        throw std::invalid_argument("config: invariant kappa_wg <= kappa violated (kappa_wg_over_kappa outside (0,1])");
    if (!(get("cooperativity") > 0.0)) throw std::invalid_argument("config: cooperativity must be positive");
    if (get("tau_reset_us") < 0.0) throw std::invalid_argument("config: negative reset time");
    if (!(get("t2_nuclear_s") > 0.0) || !(get("t2_electron_s") > 0.0))
        throw std::invalid_argument("config: coherence times must be positive");
}

}  // namespace qram
