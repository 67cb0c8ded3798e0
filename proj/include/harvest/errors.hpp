#pragma once

#include <stdexcept>
#include <string>

namespace harvest {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input. The CLI maps this to exit code 2.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class SingularEvaluation : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Direct oracle could not extrapolate in epsilon; recorded, not fatal for scans.
class OracleUnreliable : public Error {
public:
    using Error::Error;
};

class ResonanceDivergence : public Error {
public:
    using Error::Error;
};

class UnsupportedClosedForm : public Error {
public:
    using Error::Error;
};

class DegeneratePole : public Error {
public:
    using Error::Error;
};

} // namespace harvest
