#ifndef NGDR_UNITS_HPP
#define NGDR_UNITS_HPP

namespace ngdr {

// The engine runs in strict SI (K, s, kg, m); Fahrenheit and minutes appear
// only at I/O boundaries.

inline double fahrenheit_to_kelvin(double f) { return (f - 32.0) * 5.0 / 9.0 + 273.15; }

inline double kelvin_to_fahrenheit(double k) { return (k - 273.15) * 9.0 / 5.0 + 32.0; }

// Temperature *differences* rescale without the offset.
inline double kelvin_dev_to_fahrenheit_dev(double dk) { return dk * 9.0 / 5.0; }

inline double minutes_to_seconds(double m) { return m * 60.0; }

inline double seconds_to_minutes(double s) { return s / 60.0; }

inline double hours_to_seconds(double h) { return h * 3600.0; }

} // namespace ngdr

#endif
