#pragma once

#include "harvest/core.hpp"
#include "harvest/entanglement.hpp"
#include "harvest/quadrature.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace harvest {

struct GridSpec {
    Scenario scenario = Scenario::ParallelAccel;
    double a_min = 0.0, a_max = 4.5; // axis is (a_min, a_max]
    int a_n = 200;
    double w_min = 0.0, w_max = std::numbers::pi - 0.01;
    int w_n = 200;
    double g = 0.001;
    double sigma = 1.0;
    Method method = Method::Saddle;
    QuadratureSettings quad;
    int threads = 0; // 0: OpenMP default
};

enum CellFlag : unsigned {
    CellResonance = 1u,   // anti-parallel cell within half a step of a_crit(w)
    CellFailed = 2u,      // computation threw; see error
    CellForcedQuad = 4u,  // resonance cell computed by quadrature regardless of method
};

std::string flags_string(unsigned flags);

struct Cell {
    double a = 0.0, w = 0.0;
    WideReal N;
    bool entangled = false;
    double A = 0.0;
    double log_abs_X = 0.0;
    std::string path; // which computation produced the cell
    unsigned flags = 0;
    std::string error;
};

struct ScanGrid {
    GridSpec spec;
    std::vector<double> a_axis, w_axis;
    std::vector<Cell> cells; // row-major in w: cells[j * a_n + i]

    const Cell& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * a_axis.size() + i]; }
};

// (lo, hi] split in n equal steps, hi included.
std::vector<double> open_closed_axis(double lo, double hi, int n);

ScanGrid grid_scan(const GridSpec& spec);
// Reference path without OpenMP; must match grid_scan bit for bit.
ScanGrid grid_scan_serial(const GridSpec& spec);

Cell evaluate_cell(const GridSpec& spec, double a, double w, double resonance_tol);

// Root in a of the closed criterion margin at fixed w, bisection to 1e-10.
double boundary_trace(Scenario s, double w);

struct ResonancePoint {
    double w = 0.0;
    double a_crit = 0.0;
    double L_crit = 0.0;
    double omega = 0.0;
};

std::vector<ResonancePoint> resonance_locus(const std::vector<double>& w_values, double kappa, double sigma);

struct CorridorPoint {
    double dL = 0.0;
    double a = 0.0;
    double reX = 0.0;        // residue-free Re X, scaled
    double imX = 0.0;
    double residue_log_abs = 0.0; // log |residue part|, diagnostics only
    bool ok = true;
    std::string error;
};

struct CorridorSweep {
    double kappa = 0, sigma = 0, omega = 0;
    double L_crit = 0.0;
    std::vector<CorridorPoint> points;
    std::optional<std::pair<double, double>> sign_change_interval;
};

// Symmetric axis around 0: +-max * 10^(linspace(log10 min_frac, 0, n_side)).
std::vector<double> symlog_axis(double max, double min_frac, int n_side);
std::vector<double> linear_axis(double lo, double hi, int n);

// Re X (residue-free) at L = L_crit + dL for each dL. Requires the corridor
// window 1.2 < w < pi/2, 1.1 < a_crit < 2.
CorridorSweep corridor_sweep(double kappa, double sigma, double omega, const std::vector<double>& dL,
                             const QuadratureSettings& s = {}, int threads = 0);

// Interval (lo, hi) of dL around the positive stretch of reX, when present.
std::optional<std::pair<double, double>> sign_change_interval(const std::vector<CorridorPoint>& pts);

struct CorridorVerdict {
    double L = 0.0;
    double estimate = 0.0;  // sampled <sy sy> - <sx sx> (= 4 Re X of the sampled state)
    double std_error = 0.0;
    double truth = 0.0;     // 4 Re X of the sampled state
    bool at_critical = false; // estimate > 0
    std::uint64_t seed_xx = 0, seed_yy = 0;
};

// Per config: sample both bases, decide "at L_crit up to O(dL)" iff the
// estimate of Re X is positive. Seeds derive from seed xor the index.
std::vector<CorridorVerdict> rangefind_corridor(const std::vector<DetectorConfig>& cfgs, std::uint64_t shots,
                                                std::uint64_t seed, const QuadratureSettings& s = {});

struct SuddenDeath {
    bool above = false, below = false;
    WideReal N_above, N_below;
    bool trigger = false; // above && !below
};

// N at L = 2/kappa +- delta. Needs w >= 2.4.
SuddenDeath rangefind_sudden_death(double kappa, double sigma, double omega, double delta,
                                   Method m = Method::Quadrature, const QuadratureSettings& s = {});

struct GradientEstimate {
    double dL = 0.0;          // estimate from the local log-linear inversion
    double dL_linear = 0.0;   // (N - N_ref) / (dN/dL); overflows when N varies by e-folds
    WideReal N_ref;
    double dlogN_dL = 0.0;
    double log_abs_dN_dL = 0.0; // conditioning diagnostic
    bool ill_conditioned = false;
};

GradientEstimate rangefind_gradient(const DetectorConfig& reference, const WideReal& measured_N,
                                    Method m = Method::Quadrature, const QuadratureSettings& s = {});

} // namespace harvest
