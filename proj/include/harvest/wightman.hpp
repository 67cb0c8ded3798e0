#pragma once

#include "harvest/core.hpp"
#include "harvest/wide.hpp"

namespace harvest {

// x = tau + tau', y = tau - tau'. Either may sit on a shifted contour.
struct KernelArgs {
    cplx x{0.0, 0.0};
    cplx y{0.0, 0.0};
    double epsilon = 0.0;
};

cplx d_plus_minkowski(const SpacetimeEvent& e1, const SpacetimeEvent& e2, double epsilon);

// Closed-form kernels. kappa sets the overall scale, the point supplies a and b.
cplx d_parallel(const KernelArgs& args, double kappa, const DimensionlessPoint& p);
cplx d_antiparallel(const KernelArgs& args, double kappa, const DimensionlessPoint& p);
cplx d_desitter(const KernelArgs& args, double kappa, const DimensionlessPoint& p);
cplx d_thermal(const KernelArgs& args, double kappa, const DimensionlessPoint& p);
cplx d_detect(cplx y, double kappa, double epsilon);

// Static detectors at separation L (kappa = 0 path).
cplx d_inertial(const KernelArgs& args, double L);
cplx d_detect_inertial(cplx y, double epsilon);

// Picks the cross-kernel for cfg.scenario.
cplx cross_kernel(const DetectorConfig& cfg, const KernelArgs& args);

} // namespace harvest
