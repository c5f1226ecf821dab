#pragma once

#include <stdexcept>
#include <string>

namespace sabr_ldp {

/// Input outside the documented domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A root finder or optimizer did not meet its tolerance.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Price outside the no-arbitrage bounds of the Black-Scholes formula.
class ArbitrageError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid or inconsistent command line configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace sabr_ldp
