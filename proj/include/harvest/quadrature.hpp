#pragma once

#include "harvest/core.hpp"
#include "harvest/integrate.hpp"
#include "harvest/wide.hpp"

#include <optional>
#include <string>
#include <vector>

namespace harvest {

enum class AmplitudeKind { AScaled, XScaled };

struct AmplitudeParts {
    WideComplex residue_free;
    WideComplex residue;
};

// Stored as exp((sigma Omega)^2) * quantity / eta0^2.
struct ScaledAmplitude {
    WideComplex value;
    AmplitudeKind kind = AmplitudeKind::AScaled;
    std::optional<AmplitudeParts> parts;
    std::string method; // which path produced the value
    double error = 0.0; // absolute error estimate on value, when known

    cplx v() const { return value.value(); }
};

struct QuadratureSettings {
    double abs_tol = 1e-300;
    double rel_tol = 1e-9;
    double truncation_radius = 12.0; // in units of sqrt(2) sigma
    int max_subdivisions = 4000;
    std::vector<double> epsilon_ladder = {1e-2, 1e-3, 1e-4}; // times min(sigma, 1/kappa)
    bool parallel = false;
};

ScaledAmplitude a_shifted(const DetectorConfig& cfg, const QuadratureSettings& s = {});
ScaledAmplitude x_shifted_residue_free(const DetectorConfig& cfg, const QuadratureSettings& s = {});

// Closed form for static detectors, used to check a_shifted:
// (1/4pi)[1 - sqrt(pi) sW exp((sW)^2) erfc(sW)].
double a_inertial_exact(double sigma_omega);

struct OracleDiagnostics {
    std::vector<double> epsilons;
    std::vector<cplx> values;  // raw-integral values per epsilon, scaled convention
    cplx extrapolated;
    bool monotone = true;
};

// Direct real-axis integrals with finite epsilon, extrapolated to zero.
// Throw OracleUnreliable outside sigma*Omega <= 2 or when the ladder does
// not settle.
ScaledAmplitude a_direct_oracle(const DetectorConfig& cfg, const QuadratureSettings& s = {},
                                OracleDiagnostics* diag = nullptr);
// Both: the two Wightman orderings of the coherence term, averaged.
// Single: only W(x_a(tau), x_b(tau')), the function the closed-form kernels
// represent; this is what the shifted-contour identity is about.
enum class OracleOrdering { Both, Single };

ScaledAmplitude x_direct_oracle(const DetectorConfig& cfg, const QuadratureSettings& s = {},
                                OracleDiagnostics* diag = nullptr, OracleOrdering ordering = OracleOrdering::Both);

// Points on y >= 0 where the anti-parallel kernel has a pole on the line
// Im x = 2 sigma^2 Omega (always at Re x = 0).
std::vector<double> shifted_line_crossings(const DetectorConfig& cfg);

} // namespace harvest
