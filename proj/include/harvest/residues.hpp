#pragma once

#include "harvest/core.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/wide.hpp"

#include <string>
#include <vector>

namespace harvest {

enum class Branch { Plus, Minus };

struct ThetaPoint {
    cplx theta;
    Branch branch = Branch::Plus;
    bool on_real_axis = false; // Im theta = 0+ limit
};

enum class ResidueCase { BNegative, BPositive };
enum class ResidueValidity { SteepestDescentOK, NumericFallback };

struct Segment {
    cplx from, to;
};

struct ResidueContour {
    ResidueCase rcase = ResidueCase::BPositive;
    std::vector<Segment> segments;
    ResidueValidity validity = ResidueValidity::NumericFallback;
};

// arccosh(b exp(+-y kappa/2) -+ i eps), eps -> 0+, with Im theta in [0, pi).
ThetaPoint theta_of_y(double y, Branch br, const DimensionlessPoint& p, double kappa);
// b exp(+-y kappa/2) > cos w
bool pole_included(double y, Branch br, const DimensionlessPoint& p, double kappa);

// Residue in x of the anti-parallel kernel at x = 2 theta_s / kappa.
cplx residue_of_kernel(cplx theta_s, cplx theta_opposite, double kappa);

// [log^2(cosh th / b) + (th - i w)^2] / g^2
cplx exponent_E(cplx theta, const DimensionlessPoint& p);
// g^2 E'(theta) / 2
cplx exponent_slope(cplx theta, const DimensionlessPoint& p);

// Residue integrand in the theta variable, scaled convention:
// i / (2 pi (b^2 - cosh^2 th)) exp(-E(th)).
cplx integrand_I(cplx theta, const DimensionlessPoint& p);

// Zero of E' near the segment; damped Newton with finite-difference
// derivative, started from the best of 64 grid points. Throws ConvergenceError.
cplx find_saddle(const DimensionlessPoint& p, const Segment& segment);

struct ResidueDiagnostics {
    ResidueContour contour;
    std::vector<cplx> saddles;  // saddles of E found on the contour
    double horizontal_height = 0.0;
    double log_scale = 0.0;     // exponent factored out of the quadrature
    WideComplex quadrature;
    WideComplex steepest_descent;
    bool sd_available = false;
    double sd_relative_difference = 0.0;
    std::string path;
};

ScaledAmplitude residue_contribution(const DetectorConfig& cfg, const QuadratureSettings& s = {},
                                     ResidueDiagnostics* diag = nullptr);

} // namespace harvest
