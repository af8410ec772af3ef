#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cavlat {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kPlanck = 6.62607015e-34;        // J s
inline constexpr cplx kI{0.0, 1.0};

enum class Geometry { Linear, Ring };
enum class Model { ODM, TMM };

const char* to_string(Geometry g);
const char* to_string(Model m);
Geometry parse_geometry(const std::string& s);
Model parse_model(const std::string& s);

// Bad or inconsistent user input. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Singular conversions, non-convergence, degenerate statistics. Exit code 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace cavlat
