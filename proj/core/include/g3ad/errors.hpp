#pragma once

#include <stdexcept>
#include <string>

namespace g3ad {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand shapes do not chain.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Malformed input file (bad line, ragged CSV, out-of-range index).
class FormatError : public Error {
public:
    using Error::Error;
};

// Invalid configuration (infeasible injection, bad degree, empty axis).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Optimization failure (non-finite loss or gradient).
class TrainingError : public Error {
public:
    TrainingError(const std::string& what, int epoch = -1) : Error(what), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

// Metric preconditions violated (single-class labels, no positives).
class MetricError : public Error {
public:
    using Error::Error;
};

// API contract violated by the caller (e.g. backward from a non-scalar).
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace g3ad
