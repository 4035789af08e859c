#pragma once

#include <stdexcept>
#include <string>

namespace affdec {

/// Base of every failure raised by the library. `code()` is a stable
/// machine-readable tag used by the CLI failure reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define AFFDEC_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what) : Error(#Name, what) {}   \
    };

AFFDEC_DEFINE_ERROR(ZeroPolynomial)
AFFDEC_DEFINE_ERROR(BudgetExceeded)
AFFDEC_DEFINE_ERROR(OracleMissingDerivative)
AFFDEC_DEFINE_ERROR(DegenerateParallelogram)
AFFDEC_DEFINE_ERROR(EnclosureTooLoose)
AFFDEC_DEFINE_ERROR(NotBounded)
AFFDEC_DEFINE_ERROR(GradientHypothesisFails)
AFFDEC_DEFINE_ERROR(RecursionDepthExceeded)
AFFDEC_DEFINE_ERROR(HPreconditionFails)
AFFDEC_DEFINE_ERROR(ValidationFailed)
AFFDEC_DEFINE_ERROR(NodeOutsideSupport)
AFFDEC_DEFINE_ERROR(UnassignedNode)
AFFDEC_DEFINE_ERROR(PreconditionFails)
AFFDEC_DEFINE_ERROR(QuadratureNonConvergent)
AFFDEC_DEFINE_ERROR(InvalidArgument)

#undef AFFDEC_DEFINE_ERROR

}  // namespace affdec
