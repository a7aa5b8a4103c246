#pragma once

#include <stdexcept>
#include <string>

namespace eigenfactor {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- number field construction ---
class NotMonic : public Error {
public:
    explicit NotMonic(const std::string& what) : Error(what) {}
};

class Reducible : public Error {
public:
    explicit Reducible(const std::string& what) : Error(what) {}
};

class NoNearbyRoot : public Error {
public:
    explicit NoNearbyRoot(const std::string& what) : Error(what) {}
};

// --- field arithmetic ---
class DivisionByZero : public Error {
public:
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

class FieldMismatch : public Error {
public:
    explicit FieldMismatch(const std::string& what) : Error(what) {}
};

// --- truncated series ---
class TruncationMismatch : public Error {
public:
    explicit TruncationMismatch(const std::string& what) : Error(what) {}
};

class GuardExceeded : public Error {
public:
    explicit GuardExceeded(const std::string& what) : Error(what) {}
};

// --- spec files and text grammars ---
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

class InvariantViolation : public Error {
public:
    explicit InvariantViolation(const std::string& what) : Error(what) {}
};

// --- coefficient oracles: base so callers can catch oracle trouble as a family ---
class OracleError : public Error {
public:
    explicit OracleError(const std::string& what) : Error(what) {}
};

class UnknownPrimeFactor : public OracleError {
public:
    explicit UnknownPrimeFactor(const std::string& what) : OracleError(what) {}
};

class OutOfRange : public OracleError {
public:
    explicit OutOfRange(const std::string& what) : OracleError(what) {}
};

// --- operations that reject their input ---
class UnsupportedInput : public Error {
public:
    explicit UnsupportedInput(const std::string& what) : Error(what) {}
};

}  // namespace eigenfactor
