#ifndef HCX_ERROR_HPP
#define HCX_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcx {

enum class ErrorCode {
  EdgeWrongArity,
  DegenerateEdge,
  UnknownVertex,
  DuplicateEdge,
  InvalidParams,
  EmptyPart,
  SizeGuard,
  OrbitCofaceClash,
  NotFree,
  WrongCodimension,
  OrbitNotIndependentlyFree,
  NotInSigma,
  MatchingInvalid,
  Stuck,
  ParseError,
  VerificationFailed,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Upper bounds on enumeration sizes. Every constructor that can blow up
/// combinatorially checks against these and throws SizeGuard.
struct Limits {
  std::size_t max_cells = 1'000'000;
  std::size_t max_candidates = 1'000'000;
};

inline void guard_size(std::size_t count, std::size_t limit, const char* what) {
  if (count > limit) {
    throw Error(ErrorCode::SizeGuard, std::string(what) + " exceeds limit of " +
                                          std::to_string(limit));
  }
}

}  // namespace hcx

#endif  // HCX_ERROR_HPP
