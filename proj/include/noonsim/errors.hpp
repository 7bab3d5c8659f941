#pragma once

#include <stdexcept>
#include <string>

namespace noonsim {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied arguments the operation cannot accept. The CLI maps
/// these to a usage exit status.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class BasisMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ExactSizeExceeded : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ConventionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InsufficientData : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ResolutionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class SpanError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class DegeneratePhase : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A structural invariant failed: non-normalized state, non-Hermitian
/// observable, non-unitary operator, complex residue in an expectation.
class ContractViolation : public Error {
public:
    using Error::Error;
};

class NotNormalized : public ContractViolation {
public:
    using ContractViolation::ContractViolation;
};

class NonHermitian : public ContractViolation {
public:
    using ContractViolation::ContractViolation;
};

class NonUnitary : public ContractViolation {
public:
    using ContractViolation::ContractViolation;
};

class NonFinite : public ContractViolation {
public:
    using ContractViolation::ContractViolation;
};

} // namespace noonsim
