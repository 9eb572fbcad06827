#ifndef NGDR_REPORT_HPP
#define NGDR_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "ngdr/baseline.hpp"
#include "ngdr/thermal.hpp"

namespace ngdr {

// Cross-house statistics of the per-house deviations, reported in degF.
struct DeviationStats {
    double mean = 0.0;
    double max = 0.0;
    double min = 0.0;
    double std_dev = 0.0; // population standard deviation
};

struct RunReport {
    std::string scenario;
    DeviationStats deviation;
    double total_gas = 0.0;     // kg
    double gas_per_house = 0.0; // kg
    double time_s = 0.0;
    double avg_gap_pct = 0.0;
};

// houses.csv: id,category,volume_m3,wall_area_m2,kappa_w_m2k,burn_rate_kg_s,theta0_f,setpoint_f
std::vector<HouseParams> load_fleet(const std::string& path);

// ambient.csv: offset_minutes,temp_f
AmbientSeries load_ambient(const std::string& path);

void save_fleet(const std::vector<HouseParams>& fleet, const std::string& path);
void save_ambient(const AmbientSeries& ambient, const std::string& path);

// Converts per-house deltas (K) to degF scale and takes sample statistics.
DeviationStats deviation_stats(const std::vector<double>& deltas_k);

// (baseline - dr) / fleet_size * target_size, kg (negative when DR uses more).
double savings_projection(double baseline_total_kg, double dr_total_kg, std::size_t fleet_size,
                          std::size_t target_size);

// demand.csv: offset_minutes,mass_flow_kg_s
void emit_demand_series(const AggregateDemand& demand, const Grid& grid, const std::string& path);

// boxplot.csv: scenario,house_id,delta_f — scenarios in declaration order,
// houses ordered by id within each scenario.
struct BoxplotScenario {
    std::string scenario;
    std::vector<std::pair<std::string, double>> delta_k_by_house; // (id, delta in K)
};
void emit_boxplot_data(const std::vector<BoxplotScenario>& scenarios, const std::string& path);

// report.csv: scenario,mean_f,max_f,min_f,std_f,total_gas_kg,gas_per_house_kg,time_s,avg_gap_pct
void emit_run_report(const std::vector<RunReport>& reports, const std::string& path);

// savings.csv: scenario,baseline_total_kg,dr_total_kg,saving_per_house_kg,projected_10000_kg
struct SavingsRow {
    std::string scenario;
    double baseline_total_kg = 0.0;
    double dr_total_kg = 0.0;
    double saving_per_house_kg = 0.0;
    double projected_kg = 0.0;
};
void emit_savings(const std::vector<SavingsRow>& rows, const std::string& path);

// Deterministic stand-in for the paper's external house data: `count`
// houses over 14 size categories, burn rates spaced across the
// [3e-5, 12e-5] kg/s band by square footage, set-points around 68-72 degF.
std::vector<HouseParams> generate_fleet(std::size_t count, std::uint64_t seed = 42);

enum class AmbientProfile { typical_day, polar_vortex };

// Synthetic forecast spanning [0, horizon]: the typical day swings ~15 degF
// around a winter mean; the polar vortex falls ~40 degF across the span.
AmbientSeries generate_ambient(AmbientProfile profile, std::int64_t horizon_s,
                               std::int64_t step_s = 3600);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

} // namespace ngdr

#endif
