#ifndef FAULTSEG_ERROR_HPP
#define FAULTSEG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace faultseg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unsupported input file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Argument or configuration outside its valid domain.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Iterative procedure that failed to converge or diverged numerically.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace faultseg

#endif
