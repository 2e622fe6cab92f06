#pragma once

#include <stdexcept>
#include <string>

namespace pclab {

enum class ErrorCode {
    SyntaxError,
    MissingVariable,
    SupportTooLarge,
    ClauseArity,
    WidthLimit,
    FalsifiedEquation,
    BudgetExceeded,
    LevelOutOfRange,
    EmptyProof,
    WidthBound,
    NoSatisfyingAssignment,
    NonTermination,
    ClauseTooWide,
    WidthOverflow,
    NegationTopGate,
    DisjunctionMappedToZero,
    DuplicateDomain,
    ConstantInDomain,
    InputError,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::MissingVariable: return "MissingVariable";
        case ErrorCode::SupportTooLarge: return "SupportTooLarge";
        case ErrorCode::ClauseArity: return "ClauseArity";
        case ErrorCode::WidthLimit: return "WidthLimit";
        case ErrorCode::FalsifiedEquation: return "FalsifiedEquation";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
        case ErrorCode::EmptyProof: return "EmptyProof";
        case ErrorCode::WidthBound: return "WidthBound";
        case ErrorCode::NoSatisfyingAssignment: return "NoSatisfyingAssignment";
        case ErrorCode::NonTermination: return "NonTermination";
        case ErrorCode::ClauseTooWide: return "ClauseTooWide";
        case ErrorCode::WidthOverflow: return "WidthOverflow";
        case ErrorCode::NegationTopGate: return "NegationTopGate";
        case ErrorCode::DisjunctionMappedToZero: return "DisjunctionMappedToZero";
        case ErrorCode::DuplicateDomain: return "DuplicateDomain";
        case ErrorCode::ConstantInDomain: return "ConstantInDomain";
        case ErrorCode::InputError: return "InputError";
    }
    return "Unknown";
}

} // namespace pclab
