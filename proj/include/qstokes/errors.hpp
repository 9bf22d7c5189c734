#ifndef QSTOKES_ERRORS_HPP
#define QSTOKES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qstokes {

// All library failures derive from Error and carry a stable machine-readable
// code alongside the human message.  The CLI maps codes to exit status.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define QSTOKES_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& what) : Error(#Name, what) {}  \
    }

QSTOKES_DEFINE_ERROR(EmptyWindow);
QSTOKES_DEFINE_ERROR(NonInvertible);
QSTOKES_DEFINE_ERROR(AllBelowThreshold);
QSTOKES_DEFINE_ERROR(QModulusTooSmall);
QSTOKES_DEFINE_ERROR(NonConvergent);
QSTOKES_DEFINE_ERROR(DivergentProduct);
QSTOKES_DEFINE_ERROR(UndefinedValuation);
QSTOKES_DEFINE_ERROR(NonIntegralSlopes);
QSTOKES_DEFINE_ERROR(NonInvertibleLeading);
QSTOKES_DEFINE_ERROR(IdentityViolated);
QSTOKES_DEFINE_ERROR(NonInvertibleGauge);
QSTOKES_DEFINE_ERROR(EigDecompositionFailed);
QSTOKES_DEFINE_ERROR(LinearSolveSingular);
QSTOKES_DEFINE_ERROR(OrderTooSmall);
QSTOKES_DEFINE_ERROR(TailNotNegligible);
QSTOKES_DEFINE_ERROR(ForbiddenDirection);
QSTOKES_DEFINE_ERROR(DirectionsEqual);
QSTOKES_DEFINE_ERROR(WindowTooNarrow);
QSTOKES_DEFINE_ERROR(NotQGevrey);
QSTOKES_DEFINE_ERROR(N0TooLarge);
QSTOKES_DEFINE_ERROR(PoleHit);
QSTOKES_DEFINE_ERROR(WrongShape);
QSTOKES_DEFINE_ERROR(TruncationInsufficient);
QSTOKES_DEFINE_ERROR(PointTooFar);
QSTOKES_DEFINE_ERROR(SchemaError);
QSTOKES_DEFINE_ERROR(NonFinite);

#undef QSTOKES_DEFINE_ERROR

} // namespace qstokes

#endif
