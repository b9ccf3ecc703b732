#ifndef SWANCOND_ERRORS_HPP
#define SWANCOND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace swancond {

enum class ErrorKind {
    Usage,
    Schema,
    ExtensionRequired,
    ExtensionCapExceeded,
    PrecisionLoss,
    Inconclusive,
    NoConvergence,
    GridTooCoarse,
    TailUnbounded,
    UnsupportedSlope,
    DomainMismatch,
    SeriesMismatch,
    ConnectednessNotEstablished,
    NotADiskBelow,
    WitnessInvalid,
    TheoremViolated,
    AssumptionViolation,
    InseparabilityUnverified,
    NonUnit,
    NotAPthPower,
    InternalInconsistency,
};

const char* error_kind_name(ErrorKind k);

// Process exit status / C API status for each error kind.
//   1 usage, 2 schema or violated input contract, 3 extension required,
//   4 precision loss, 5 inconclusive or non-converging computation,
//   6 internal inconsistency (bug detector).
int error_kind_status(ErrorKind k);

class SwanError : public std::runtime_error {
  public:
    SwanError(ErrorKind kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

// Root finding or a reduction asked for a field we do not have: carries the
// minimal suggested enlargement of (e, f).
class ExtensionRequiredError : public SwanError {
  public:
    ExtensionRequiredError(long e_mult, long f_mult, std::string msg)
        : SwanError(ErrorKind::ExtensionRequired, std::move(msg)),
          e_mult_(e_mult), f_mult_(f_mult) {}
    long e_mult() const { return e_mult_; }
    long f_mult() const { return f_mult_; }

  private:
    long e_mult_, f_mult_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& msg) {
    throw SwanError(kind, msg);
}

}  // namespace swancond

#endif
