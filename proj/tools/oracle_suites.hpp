#pragma once

#include "harvest/quadrature.hpp"

#include <string>
#include <vector>

namespace harvest::cli {

struct OracleCase {
    std::string suite;
    std::string name;
    double value = 0.0;
    double reference = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string note; // exception text when the case threw
};

// assembly: |X| (residue-free + residue) vs direct oracle, anti-parallel
// saddle:   shifted quadrature vs closed forms at g = 0.001
// amplitude: shifted quadrature vs direct oracle and exact inertial A
// contour:  residue vanishing for b < 0, w < pi/2; quadrature vs steepest descent
std::vector<OracleCase> run_suite(const std::string& suite, const QuadratureSettings& q = {});

const std::vector<std::string>& suite_names();

} // namespace harvest::cli
