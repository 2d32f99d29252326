#pragma once

#include "codafin/coda/composition.hpp"
#include "codafin/ingest/panel.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace codafin::sim {

/**
 * @brief Synthetic panel parameters. Effects live in balance space: the
 * two coordinates z1 = STL|LTL,EQ and z2 = LTL|EQ of the liabilities SBP.
 *
 * Coefficient keys are design column names (Intercept, Family,
 * MildTechIntens, HighTechIntens, Innovation, FirmSize, Year<y>); absent
 * keys are zero.
 */
struct SimConfig {
    std::size_t n_firms = 500;
    int years = 12;
    int start_year = 2007;
    std::map<std::string, double> beta_z1;
    std::map<std::string, double> beta_z2;
    double sigma_u = 0.4;
    double sigma_e = 0.3;
    double family_share = 0.45;
    double tech_mid_share = 0.35;
    double tech_high_share = 0.15;
    double innovation_rate = 0.3;
    double log_employees_mean = 4.0;
    double log_employees_sd = 1.0;
    double log_employees_year_sd = 0.1;
    double log_total_mean = 15.0;
    double log_total_sd = 1.5;
    std::uint64_t seed = 20070101;

    /// Defaults, with coefficients echoing the sign pattern of the published estimates.
    [[nodiscard]] static SimConfig defaults();

    /**
     * Defaults overridden by `key = value` lines, e.g.
     *
     *     n_firms = 200
     *     beta.z1.Family = -0.05
     *
     * @throws ConfigError naming the key.
     */
    [[nodiscard]] static SimConfig parse(std::istream& in);

    /// @throws ConfigError naming the first invalid field.
    void validate() const;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct FirmTruth {
    std::string firm_id;
    double u_z1 = 0.0;
    double u_z2 = 0.0;
};

struct GroundTruth {
    SimConfig config;
    std::vector<FirmTruth> firms;
    std::vector<std::array<double, 2>> z;  ///< generated (z1, z2), aligned with panel rows

    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct SimulatedPanel {
    ingest::PanelDataset panel;
    GroundTruth truth;
};

/**
 * Draw a panel. For each firm, in order: family, tech intensity, base log
 * employees, u_z1, u_z2. Then for each year: innovation, employee jitter,
 * e_z1, e_z2, log total. Employees are rounded to whole persons (at least 1)
 * before FirmSize is formed; shares come from ilr_inverse on (z1, z2).
 */
[[nodiscard]] SimulatedPanel gen_panel(const SimConfig& config);

/// n three-part compositions (STL, LTL, EQ) with independent lognormal parts.
[[nodiscard]] std::vector<coda::Composition> lognormal_compositions(std::size_t n, double log_mean, double log_sd,
                                                                    std::uint64_t seed);

}  // namespace codafin::sim
