#include "mvl/error.hpp"

namespace mvl {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotALattice: return "NotALattice";
    case ErrorCode::CycleInOrder: return "CycleInOrder";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::BadMonoid: return "BadMonoid";
    case ErrorCode::LatticeTooLarge: return "LatticeTooLarge";
    case ErrorCode::ForeignElement: return "ForeignElement";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NotBrouwer: return "NotBrouwer";
    case ErrorCode::NotResiduated: return "NotResiduated";
    case ErrorCode::NotAtomRepresentable: return "NotAtomRepresentable";
    case ErrorCode::SumNotInLattice: return "SumNotInLattice";
    case ErrorCode::UninterpretableTerm: return "UninterpretableTerm";
    case ErrorCode::UnknownConstant: return "UnknownConstant";
    case ErrorCode::MissingVariable: return "MissingVariable";
    case ErrorCode::MismatchedScales: return "MismatchedScales";
    case ErrorCode::MismatchedCarriers: return "MismatchedCarriers";
    case ErrorCode::FewerThanTwoSets: return "FewerThanTwoSets";
    case ErrorCode::EmptyAssessment: return "EmptyAssessment";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace mvl
