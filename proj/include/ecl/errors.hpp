#pragma once

#include <stdexcept>
#include <string>

namespace ecl {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration or unusable input (bad config file, bad dataset
// layout, out-of-range parameters). Maps to CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

// An operation was invoked on an object in the wrong state (e.g. selection
// before fitness assignment).
struct StateError : Error {
    using Error::Error;
};

// Genome errors are reported distinctly so callers can tell malformed text,
// unknown operation names and invariant violations apart.
struct GenomeError : Error {
    using Error::Error;
};
struct GenomeFormatError : GenomeError {
    using GenomeError::GenomeError;
};
struct UnknownOpError : GenomeError {
    using GenomeError::GenomeError;
};
struct GenomeInvariantError : GenomeError {
    using GenomeError::GenomeError;
};

// Training produced a non-finite loss; carries the epoch where it happened.
struct DivergenceError : Error {
    explicit DivergenceError(int epoch_index)
        : Error("training diverged (non-finite loss) at epoch " + std::to_string(epoch_index)),
          epoch(epoch_index) {}
    int epoch;
};

// Filesystem-level failure while reading or writing artifacts.
struct IoError : Error {
    using Error::Error;
};

}  // namespace ecl
