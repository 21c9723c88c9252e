#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qring {

/// Base class for all errors raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration; maps to CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

class GridError : public Error {
public:
    using Error::Error;
};

class DegenerateField : public Error {
public:
    DegenerateField() : Error("degenerate field") {}
};

/// Non-finite values appeared during time stepping; maps to exit code 3.
class NumericalBlowUp : public Error {
public:
    explicit NumericalBlowUp(std::int64_t step)
        : Error("numerical blow-up at step " + std::to_string(step)), step_(step) {}

    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

}  // namespace qring
