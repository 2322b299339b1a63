#ifndef HELLVEC_ERRORS_HPP
#define HELLVEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hellvec {

/// Bad arguments or configuration. CLI exit code 1.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed, missing or mismatched input data. CLI exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Divergence, degenerate statistics, resource guards. CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A word has no counted context, so it has no distribution.
class NoDistributionError : public DataError {
public:
    using DataError::DataError;
};

/// A phrase never occurs in the scanned corpus.
class UnseenInCorpusError : public DataError {
public:
    using DataError::DataError;
};

/// Artifacts were produced under a different context dictionary or window.
class FingerprintMismatchError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace hellvec

#endif
