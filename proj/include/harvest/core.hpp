#pragma once

#include <string>
#include <string_view>

namespace harvest {

enum class Scenario { ParallelAccel, AntiParallelAccel, DeSitterComoving, ThermalInertial, Inertial };

enum class Detector { A, B };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

// Physical parameters in natural units. L is the closest-approach,
// comoving or proper separation depending on the scenario.
struct DetectorConfig {
    double kappa = 0.0;
    double sigma = 1.0;
    double omega = 1.0;
    double L = 1.0;
    double eta0 = 0.01;
    Scenario scenario = Scenario::ParallelAccel;

    double w() const { return kappa * sigma * sigma * omega; }
    double sigma_omega() const { return sigma * omega; }
    // Reporting only. Never gates a computation.
    bool spacelike_ok() const { return sigma < L / 10.0; }
};

struct DimensionlessPoint {
    double a = 0.0; // L kappa
    double w = 0.0; // kappa sigma^2 Omega
    double g = 0.0; // kappa sigma
    double b = 1.0; // 1 - a/2
};

struct SpacetimeEvent {
    double t = 0.0;
    double x = 0.0;
};

// Throws PreconditionError with a message naming the violated condition.
void validate(const DetectorConfig& cfg);
// validate() plus w < pi, required wherever A is computed.
void validate_for_amplitudes(const DetectorConfig& cfg);

SpacetimeEvent trajectory(const DetectorConfig& cfg, Detector d, double tau);
double window(const DetectorConfig& cfg, double tau);
double unruh_temperature(double kappa);

DimensionlessPoint reduce(const DetectorConfig& cfg);
DimensionlessPoint make_point(double a, double w, double g);

// Inverse of reduce: kappa = g/sigma, Omega = w/(kappa sigma^2), L = a/kappa.
DetectorConfig config_from_point(Scenario s, double a, double w, double g,
                                 double sigma = 1.0, double eta0 = 0.01);

} // namespace harvest
