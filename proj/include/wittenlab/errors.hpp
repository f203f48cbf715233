#pragma once
#include <stdexcept>
#include <string>

namespace wittenlab {

// Base of every library error. `kind()` is a stable tag the CLI prints and
// tests match against.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define WITTENLAB_ERROR(Name)                                              \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(#Name, what) {}     \
    };

// eigensolve
WITTENLAB_ERROR(CornerPresent)
WITTENLAB_ERROR(NoConvergence)
WITTENLAB_ERROR(DegenerateInput)
WITTENLAB_ERROR(SingularShift)
// oscillator1d
WITTENLAB_ERROR(DomainTooSmall)
WITTENLAB_ERROR(PositivityViolation)
WITTENLAB_ERROR(MissingConstants)
// circle_lab
WITTENLAB_ERROR(MeanZeroUnreachable)
WITTENLAB_ERROR(DegenerateClassification)
WITTENLAB_ERROR(NotAffinelySelfIndexable)
WITTENLAB_ERROR(GridTooCoarse)
WITTENLAB_ERROR(ClusterOverlap)
WITTENLAB_ERROR(AssumptionViolated)
WITTENLAB_ERROR(ProjectionDegenerate)
// morse_complex
WITTENLAB_ERROR(PairEntryNotUnit)
WITTENLAB_ERROR(NotAComplex)
WITTENLAB_ERROR(DegreeMismatch)
WITTENLAB_ERROR(NotMorseSmale)
WITTENLAB_ERROR(Overflow)
// whs_compare
WITTENLAB_ERROR(CellOutsideGrid)
WITTENLAB_ERROR(NotSelfIndexed)
// input handling
WITTENLAB_ERROR(InputError)

#undef WITTENLAB_ERROR

}  // namespace wittenlab
