#pragma once

#include "harvest/core.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/wide.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>

namespace harvest {

enum class Scale { Raw, Scaled };
enum class Method { Saddle, Quadrature };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

// Two-qubit state of the pair, basis |gg>, |ge>, |eg>, |ee>:
//   [[1-2A-C, 0, 0, -X], [0, A, B, 0], [0, B*, A, 0], [-X*, 0, 0, C]]
// B and C have no second-order formula and default to 0.
struct TwoDetectorState {
    double A = 0.0;
    cplx B{0.0, 0.0};
    double C = 0.0;
    WideComplex X;
    Scale scale = Scale::Scaled;
};

struct Assembly {
    TwoDetectorState state;
    ScaledAmplitude a;
    WideComplex x_free;
    WideComplex x_residue;
    std::string a_method, x_method;
};

// A and X at one point. Anti-parallel adds the residue terms; everything
// else has none.
Assembly assemble(const DetectorConfig& cfg, Method m = Method::Quadrature, const QuadratureSettings& s = {});

// max(|X| - A, 0), in the state's scale.
WideReal negativity(const TwoDetectorState& st);

// Sum of |negative eigenvalues| of the partial transpose (second qubit),
// from the explicit 4x4 matrix. Raw scale only.
double pt_oracle(const TwoDetectorState& st);

// C (1 - 2A - C) >= |B|^2
bool corner_psd(const TwoDetectorState& st);

// Throws PreconditionError if the Raw-scale state is not a density matrix
// of the expected shape (probabilities outside [0, 1]).
void check_raw(const TwoDetectorState& st);

// <sx sx>, <sy sy>
std::pair<double, double> correlators(const TwoDetectorState& st);

// Scaled -> Raw with factor eta0^2 exp(-(sigma Omega)^2). Refuses
// sigma Omega > 30 unless forced (everything underflows past that).
TwoDetectorState to_raw(const TwoDetectorState& st, double eta0, double sigma_omega, bool force = false);

// Raw state with the same direction in (A, B, C, X) space whose largest
// entry is `peak`. Only used to sample states whose physical coupling
// would make every probability underflow.
TwoDetectorState rescaled_for_sampling(const TwoDetectorState& st, double peak = 0.05);

enum class Basis { XX, YY };

// Outcome counts for the pairs (+,+), (+,-), (-,+), (-,-).
struct MeasurementRecord {
    Basis basis = Basis::XX;
    std::array<std::uint64_t, 4> counts{};
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    double correlator() const;
    // standard error of correlator()
    double std_error() const;
};

// Born probabilities of the four outcome pairs.
std::array<double, 4> outcome_probabilities(const TwoDetectorState& st, Basis b);

MeasurementRecord sample_measurements(const TwoDetectorState& st, Basis b, std::uint64_t shots, std::uint64_t seed);

} // namespace harvest
