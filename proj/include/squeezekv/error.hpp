// Copyright 2026 The squeezekv Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace squeezekv {

/// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
    invalid_argument,  // caller broke a precondition
    input_format,      // malformed trace / JSON / config document
    io,                // file could not be opened, read or written
    constraint,        // budget floor, allocation or context-length violation
    overflow,          // checked integer arithmetic wrapped
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(ErrorKind::input_format, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class ConstraintError : public Error {
public:
    explicit ConstraintError(const std::string& what) : Error(ErrorKind::constraint, what) {}
};

/// Raised when a proposed per-layer budget is below the eviction policy's minimum.
class BudgetFloorError : public ConstraintError {
public:
    BudgetFloorError(std::size_t layer, std::uint64_t budget, std::uint64_t floor)
        : ConstraintError("layer " + std::to_string(layer) + ": budget " + std::to_string(budget) +
                          " is below the policy floor of " + std::to_string(floor)),
          layer_(layer) {}

    std::size_t layer() const noexcept { return layer_; }

private:
    std::size_t layer_;
};

class AllocationError : public ConstraintError {
public:
    explicit AllocationError(const std::string& what) : ConstraintError(what) {}
};

class OverflowError : public Error {
public:
    explicit OverflowError(const std::string& what) : Error(ErrorKind::overflow, what) {}
};

}  // namespace squeezekv
