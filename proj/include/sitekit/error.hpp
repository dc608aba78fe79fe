#ifndef SITEKIT_ERROR_HPP_
#define SITEKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sitekit {

enum class ErrorKind {
  SizeGuard,
  MissingComposite,
  AssociativityViolation,
  IdentityViolation,
  WrongCodomain,
  BaseMismatch,
  NotRightOre,
  NotASheaf,
  ClassPropertyUnverified,
  HorizonTooShort,
  ParseError,
  UnresolvedReference,
  DuplicateName,
  BadRequest,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::SizeGuard: return "SizeGuard";
    case ErrorKind::MissingComposite: return "MissingComposite";
    case ErrorKind::AssociativityViolation: return "AssociativityViolation";
    case ErrorKind::IdentityViolation: return "IdentityViolation";
    case ErrorKind::WrongCodomain: return "WrongCodomain";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::NotRightOre: return "NotRightOre";
    case ErrorKind::NotASheaf: return "NotASheaf";
    case ErrorKind::ClassPropertyUnverified: return "ClassPropertyUnverified";
    case ErrorKind::HorizonTooShort: return "HorizonTooShort";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnresolvedReference: return "UnresolvedReference";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::BadRequest: return "BadRequest";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Size guards for the exponential enumerations downstream.  Overridable
// through the CLI via the SITEKIT_BUDGET environment variable.
struct Budget {
  int max_objects = 16;
  int max_arrows = 64;
  // Largest number of arrows into a single object for which all sieves on
  // that object are enumerated (cost 2^k subsets).
  int max_arrows_per_object = 20;
  // Largest global sieve universe for full topology-lattice enumeration.
  int max_sieve_universe = 64;
  // Cap on brute-force search spaces (matching families, action tables, ...).
  long long max_search = 20'000'000;
};

inline Budget& global_budget() {
  static Budget b;
  return b;
}

}  // namespace sitekit

#endif  // SITEKIT_ERROR_HPP_
