#pragma once

#include "harvest/core.hpp"
#include "harvest/quadrature.hpp"

namespace harvest {

struct CriterionResult {
    bool entangled = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0; // rhs - lhs
};

ScaledAmplitude a_saddle(const DetectorConfig& cfg);
ScaledAmplitude x_saddle(const DetectorConfig& cfg);

CriterionResult criterion(const DetectorConfig& cfg);
CriterionResult criterion(Scenario s, double a, double w);

// Scaled negativity from the closed forms.
double negativity_closed_form(const DetectorConfig& cfg);
double negativity_closed_form(Scenario s, double a, double w, double g);

double critical_distance(double kappa, double sigma, double omega);
double resonant_omega(double kappa, double sigma, double L);

} // namespace harvest
