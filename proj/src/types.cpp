#include "verigame/types.hpp"

namespace verigame {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DuplicateTask: return "DuplicateTask";
    case ErrorCode::UnknownProcess: return "UnknownProcess";
    case ErrorCode::WrongPhase: return "WrongPhase";
    case ErrorCode::InsufficientBalance: return "InsufficientBalance";
    case ErrorCode::BondTooSmall: return "BondTooSmall";
    case ErrorCode::DuplicateCandidate: return "DuplicateCandidate";
    case ErrorCode::EmptyCandidatePool: return "EmptyCandidatePool";
    case ErrorCode::NotTheSolver: return "NotTheSolver";
    case ErrorCode::WindowClosed: return "WindowClosed";
    case ErrorCode::SelfChallenge: return "SelfChallenge";
    case ErrorCode::DepthExhausted: return "DepthExhausted";
    case ErrorCode::InsufficientVerifiers: return "InsufficientVerifiers";
    case ErrorCode::QuorumAlreadySelected: return "QuorumAlreadySelected";
    case ErrorCode::NoQuorum: return "NoQuorum";
    case ErrorCode::NotInQuorum: return "NotInQuorum";
    case ErrorCode::DuplicateCommit: return "DuplicateCommit";
    case ErrorCode::DeadlinePassed: return "DeadlinePassed";
    case ErrorCode::NotReady: return "NotReady";
    case ErrorCode::NoCommitment: return "NoCommitment";
    case ErrorCode::CommitMismatch: return "CommitMismatch";
    case ErrorCode::NotEscalatable: return "NotEscalatable";
    case ErrorCode::NotFinalized: return "NotFinalized";
    case ErrorCode::AlreadySettled: return "AlreadySettled";
    case ErrorCode::MissingEscrow: return "MissingEscrow";
    case ErrorCode::DuplicateEscrow: return "DuplicateEscrow";
    case ErrorCode::InsufficientEscrow: return "InsufficientEscrow";
    case ErrorCode::BrokenChain: return "BrokenChain";
  }
  return "Unknown";
}

}  // namespace verigame
