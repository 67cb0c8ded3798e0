#pragma once

#include "harvest/wide.hpp"

#include <functional>
#include <vector>

namespace harvest {

struct IntegrationOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    // Evaluate the rule nodes of each pass with OpenMP. The summation order
    // does not depend on this flag, so both paths give identical bits.
    bool parallel = false;
    // Return the best estimate instead of throwing when the budget runs out.
    bool allow_unconverged = false;
};

struct IntegrationResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    double abs_mass = 0.0; // integral of |f|, used for roundoff floors
    int intervals = 0;
    long evaluations = 0;
    bool converged = true;
};

using Integrand = std::function<cplx(double)>;

// Adaptive Gauss-Kronrod 10/21 on [a, b]. Throws ConvergenceError when the
// subdivision budget is exhausted (unless allow_unconverged).
IntegrationResult integrate(const Integrand& f, double a, double b, const IntegrationOptions& opt = {});

// Same, with the range split at the given points first. points must be sorted
// and include both ends; duplicates are dropped.
IntegrationResult integrate(const Integrand& f, std::vector<double> points, const IntegrationOptions& opt = {});

} // namespace harvest
