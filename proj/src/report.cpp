#include "ngdr/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ngdr/errors.hpp"
#include "ngdr/units.hpp"

namespace ngdr {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::string& path, std::size_t lineno,
                    const char* column) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
        throw IoError(path + ":" + std::to_string(lineno) + ": non-numeric value '" + s +
                      "' in column " + column);
    return v;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // '\n' line endings everywhere
    if (!out) throw IoError("cannot open " + path + " for writing");
    return out;
}

void expect_header(const std::string& got, const std::string& want, const std::string& path) {
    std::string trimmed = got;
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == '\n'))
        trimmed.pop_back();
    if (trimmed != want)
        throw IoError(path + ":1: expected header '" + want + "', got '" + trimmed + "'");
}

} // namespace

std::vector<HouseParams> load_fleet(const std::string& path) {
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    expect_header(line, "id,category,volume_m3,wall_area_m2,kappa_w_m2k,burn_rate_kg_s,theta0_f,setpoint_f",
                  path);

    std::vector<HouseParams> fleet;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected 8 columns, got " +
                          std::to_string(f.size()));
        HouseParams h;
        h.id = f[0];
        h.volume = parse_double(f[2], path, lineno, "volume_m3");
        h.wall_area = parse_double(f[3], path, lineno, "wall_area_m2");
        h.kappa = parse_double(f[4], path, lineno, "kappa_w_m2k");
        h.burn_rate = parse_double(f[5], path, lineno, "burn_rate_kg_s");
        h.theta0 = fahrenheit_to_kelvin(parse_double(f[6], path, lineno, "theta0_f"));
        h.setpoint = fahrenheit_to_kelvin(parse_double(f[7], path, lineno, "setpoint_f"));
        try {
            h.validate();
        } catch (const ValidationError& e) {
            throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (h.burn_rate < HouseParams::kBurnRateSoftMin || h.burn_rate > HouseParams::kBurnRateSoftMax)
            std::cerr << "warning: " << path << ":" << lineno << ": burn rate "
                      << format_double(h.burn_rate) << " kg/s outside the fleet band [3e-05, 0.00012]\n";
        fleet.push_back(std::move(h));
    }
    if (fleet.empty()) throw IoError(path + ": no house rows");
    return fleet;
}

AmbientSeries load_ambient(const std::string& path) {
    auto in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    expect_header(line, "offset_minutes,temp_f", path);

    std::vector<std::pair<double, double>> samples;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 2)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected 2 columns, got " +
                          std::to_string(f.size()));
        const double minutes = parse_double(f[0], path, lineno, "offset_minutes");
        const double temp_f = parse_double(f[1], path, lineno, "temp_f");
        samples.emplace_back(minutes_to_seconds(minutes), fahrenheit_to_kelvin(temp_f));
    }
    if (samples.empty()) throw IoError(path + ": no ambient rows");
    try {
        return AmbientSeries(std::move(samples));
    } catch (const ValidationError& e) {
        throw IoError(path + ": " + e.what());
    }
}

void save_fleet(const std::vector<HouseParams>& fleet, const std::string& path) {
    auto out = open_for_write(path);
    out << "id,category,volume_m3,wall_area_m2,kappa_w_m2k,burn_rate_kg_s,theta0_f,setpoint_f\n";
    for (const auto& h : fleet) {
        // The category token is carried inside generated ids ("c03_h021");
        // plain fleets get an empty category.
        std::string category;
        if (h.id.size() > 3 && h.id[0] == 'c' && h.id[3] == '_') category = h.id.substr(0, 3);
        out << h.id << "," << category << "," << format_double(h.volume) << ","
            << format_double(h.wall_area) << "," << format_double(h.kappa) << ","
            << format_double(h.burn_rate) << "," << format_double(kelvin_to_fahrenheit(h.theta0))
            << "," << format_double(kelvin_to_fahrenheit(h.setpoint)) << "\n";
    }
}

void save_ambient(const AmbientSeries& ambient, const std::string& path) {
    auto out = open_for_write(path);
    out << "offset_minutes,temp_f\n";
    for (const auto& [t, k] : ambient.samples())
        out << format_double(seconds_to_minutes(t)) << "," << format_double(kelvin_to_fahrenheit(k))
            << "\n";
}

DeviationStats deviation_stats(const std::vector<double>& deltas_k) {
    if (deltas_k.empty()) throw ValidationError("deviation_stats: empty delta list");
    DeviationStats s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (double dk : deltas_k) {
        const double df = kelvin_dev_to_fahrenheit_dev(dk);
        s.min = std::min(s.min, df);
        s.max = std::max(s.max, df);
        sum += df;
    }
    s.mean = sum / static_cast<double>(deltas_k.size());
    double var = 0.0;
    for (double dk : deltas_k) {
        const double df = kelvin_dev_to_fahrenheit_dev(dk);
        var += (df - s.mean) * (df - s.mean);
    }
    s.std_dev = std::sqrt(var / static_cast<double>(deltas_k.size()));
    return s;
}

double savings_projection(double baseline_total_kg, double dr_total_kg, std::size_t fleet_size,
                          std::size_t target_size) {
    if (fleet_size == 0) throw ValidationError("savings_projection: fleet_size must be positive");
    return (baseline_total_kg - dr_total_kg) / static_cast<double>(fleet_size) *
           static_cast<double>(target_size);
}

void emit_demand_series(const AggregateDemand& demand, const Grid& grid, const std::string& path) {
    auto out = open_for_write(path);
    out << "offset_minutes,mass_flow_kg_s\n";
    for (std::size_t k = 0; k < demand.samples.size(); ++k) {
        const double minutes =
            seconds_to_minutes(static_cast<double>(static_cast<std::int64_t>(k) * grid.dt_state));
        out << format_double(minutes) << "," << format_double(demand.samples[k]) << "\n";
    }
}

void emit_boxplot_data(const std::vector<BoxplotScenario>& scenarios, const std::string& path) {
    auto out = open_for_write(path);
    out << "scenario,house_id,delta_f\n";
    for (const auto& sc : scenarios) {
        auto rows = sc.delta_k_by_house;
        std::sort(rows.begin(), rows.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [id, dk] : rows)
            out << sc.scenario << "," << id << "," << format_double(kelvin_dev_to_fahrenheit_dev(dk))
                << "\n";
    }
}

void emit_run_report(const std::vector<RunReport>& reports, const std::string& path) {
    auto out = open_for_write(path);
    out << "scenario,mean_f,max_f,min_f,std_f,total_gas_kg,gas_per_house_kg,time_s,avg_gap_pct\n";
    for (const auto& r : reports) {
        out << r.scenario << "," << format_double(r.deviation.mean) << ","
            << format_double(r.deviation.max) << "," << format_double(r.deviation.min) << ","
            << format_double(r.deviation.std_dev) << "," << format_double(r.total_gas) << ","
            << format_double(r.gas_per_house) << "," << format_double(r.time_s) << ","
            << format_double(r.avg_gap_pct) << "\n";
    }
}

void emit_savings(const std::vector<SavingsRow>& rows, const std::string& path) {
    auto out = open_for_write(path);
    out << "scenario,baseline_total_kg,dr_total_kg,saving_per_house_kg,projected_10000_kg\n";
    for (const auto& r : rows) {
        out << r.scenario << "," << format_double(r.baseline_total_kg) << ","
            << format_double(r.dr_total_kg) << "," << format_double(r.saving_per_house_kg) << ","
            << format_double(r.projected_kg) << "\n";
    }
}

namespace {

// splitmix64: stable, platform-independent pseudo-randomness for the
// generators (std distributions are not reproducible across libraries).
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_real(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

} // namespace

std::vector<HouseParams> generate_fleet(std::size_t count, std::uint64_t seed) {
    if (count == 0) throw ValidationError("generate_fleet: count must be positive");
    constexpr int kCategories = 14;
    constexpr double kCeilingM = 2.6;
    constexpr double kSqftToM2 = 0.09290304;

    std::vector<HouseParams> fleet;
    fleet.reserve(count);
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < count; ++i) {
        const int cat = static_cast<int>(i % kCategories);
        // Footage from a one-bedroom apartment up to a large family home.
        const double footage_sqft = (700.0 + 250.0 * cat) * (0.95 + 0.10 * unit_real(state));
        const double floor_m2 = footage_sqft * kSqftToM2;

        HouseParams h;
        char id[32];
        std::snprintf(id, sizeof(id), "c%02d_h%03zu", cat + 1, i + 1);
        h.id = id;
        h.volume = floor_m2 * kCeilingM;
        h.wall_area = 4.0 * std::sqrt(floor_m2) * kCeilingM;
        h.kappa = 0.11;
        const double frac = (footage_sqft - 700.0) / (3950.0 * 1.05 - 700.0);
        h.burn_rate = HouseParams::kBurnRateSoftMin +
                      std::clamp(frac, 0.0, 1.0) *
                          (HouseParams::kBurnRateSoftMax - HouseParams::kBurnRateSoftMin);
        const double setpoint_f = 68.0 + static_cast<double>(splitmix64(state) % 5); // 68..72
        h.setpoint = fahrenheit_to_kelvin(setpoint_f);
        h.theta0 = fahrenheit_to_kelvin(setpoint_f - 2.0 * unit_real(state));
        h.validate();
        fleet.push_back(std::move(h));
    }
    return fleet;
}

AmbientSeries generate_ambient(AmbientProfile profile, std::int64_t horizon_s,
                               std::int64_t step_s) {
    if (horizon_s <= 0 || step_s <= 0)
        throw ValidationError("generate_ambient: horizon and step must be positive");
    std::vector<std::pair<double, double>> samples;
    for (std::int64_t t = 0;; t += step_s) {
        const bool last = t >= horizon_s;
        const double tt = static_cast<double>(std::min(t, horizon_s));
        const double s = tt / static_cast<double>(horizon_s);
        double temp_f = 0.0;
        if (profile == AmbientProfile::typical_day) {
            // ~15 degF swing around a Chicago winter mean.
            temp_f = 28.0 - 7.5 * std::cos(2.0 * M_PI * (s - 0.1));
        } else {
            // Steady collapse with a small midday bump: ~40 degF range.
            temp_f = 5.0 - 40.0 * s + 2.0 * std::sin(2.0 * M_PI * s);
        }
        samples.emplace_back(tt, fahrenheit_to_kelvin(temp_f));
        if (last) break;
    }
    return AmbientSeries(std::move(samples));
}

} // namespace ngdr
