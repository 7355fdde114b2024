#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace verigame {

// Integer token units. All transferred amounts are whole tokens; splits are
// rounded so that conservation is exact.
using Amount = std::int64_t;

// Discrete logical time. The caller owns the clock; the library never reads
// a wall clock.
using Tick = std::int64_t;

using AgentId = std::string;
using ProcessId = std::string;

enum class ErrorCode {
  InvalidArgument,
  InvalidConfig,
  DuplicateTask,
  UnknownProcess,
  WrongPhase,
  InsufficientBalance,
  BondTooSmall,
  DuplicateCandidate,
  EmptyCandidatePool,
  NotTheSolver,
  WindowClosed,
  SelfChallenge,
  DepthExhausted,
  InsufficientVerifiers,
  QuorumAlreadySelected,
  NoQuorum,
  NotInQuorum,
  DuplicateCommit,
  DeadlinePassed,
  NotReady,
  NoCommitment,
  CommitMismatch,
  NotEscalatable,
  NotFinalized,
  AlreadySettled,
  MissingEscrow,
  DuplicateEscrow,
  InsufficientEscrow,
  BrokenChain,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace verigame
