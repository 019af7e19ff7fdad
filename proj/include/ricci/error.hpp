#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

// Base for every failure raised by the library. Callers that only care about
// "something in ricci went wrong" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// graph ingestion / surgery
class ParseError : public Error { using Error::Error; };
class DisconnectedGraph : public Error { using Error::Error; };
class NonPositiveWeight : public Error { using Error::Error; };
class WouldDisconnect : public Error { using Error::Error; };

// solvers
class SolverError : public Error { using Error::Error; };
class Unbalanced : public SolverError { using SolverError::SolverError; };
class Infeasible : public SolverError { using SolverError::SolverError; };
class Unbounded : public SolverError { using SolverError::SolverError; };

// curvature
class DistanceConditionViolated : public Error { using Error::Error; };
class NonLinearTail : public Error { using Error::Error; };

// flow
class StepUnderflow : public Error { using Error::Error; };
class NonConvergence : public Error { using Error::Error; };

}  // namespace ricci
