#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "qram/glm_analytics.hpp"
#include "qram/teleport_sim.hpp"

namespace qram {

// Runtime configuration. Units live in the key names; angular-frequency
// conversion by 2*pi happens in the accessors, never in stored values.
class RunConfig {
  public:
    RunConfig();  // table defaults

    static RunConfig load(const std::filesystem::path& path);
    void parse_line(const std::string& line, const std::string& where);
    // environment variables QRAM_<KEY> (upper-cased key) override file values
    void apply_env_overrides();

    double get(const std::string& key) const;
    void set(const std::string& key, double value);
    bool has(const std::string& key) const;

    void dump(std::ostream& os) const;  // canonical form, sorted keys
    std::string dump_string() const;
    std::uint64_t hash() const;  // FNV-1a over the canonical dump

    // derived physical quantities (angular units)
    double kappa() const;
    double gamma() const;
    double omega_c() const;
    double cooperativity() const;
    double kappa_wg_ratio() const;
    double tau_reset() const;
    double eta_det_linear() const;
    double t_e_to_n() const;
    double t_n_to_e() const;
    double attempt_time() const;

    glm::TreeConfig tree_config(int depth) const;
    glm::LossModel loss_model() const;  // r_cav/r_m left at 1; callers fill them
    teleport::FitModel fit_model() const;
    teleport::CoherenceModel coherence_model() const;
    teleport::TeleportCurveInputs teleport_inputs() const;

    void validate() const;

  private:
    std::map<std::string, double> values_;
};

}  // namespace qram
