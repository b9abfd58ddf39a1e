#pragma once

#include <stdexcept>
#include <string>

namespace qstat {

/// A documented precondition was violated. The message names the
/// precondition and the formula it protects.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative evaluation (series, quadrature, root search, trace) did
/// not reach its stated tolerance within its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Series reversion is impossible (zero linear coefficient or nonzero
/// constant term).
class ReversionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace qstat
