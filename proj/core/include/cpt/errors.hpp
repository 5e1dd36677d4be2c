#pragma once

#include <stdexcept>
#include <string>

namespace cpt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CPT_DEFINE_ERROR(NAME)                                        \
    class NAME : public Error {                                       \
    public:                                                           \
        explicit NAME(const std::string& what) : Error(what) {}       \
    }

CPT_DEFINE_ERROR(IndexOutOfRange);
CPT_DEFINE_ERROR(DuplicateIndexInRound);
CPT_DEFINE_ERROR(BinTooSmall);
CPT_DEFINE_ERROR(EpsilonTooSmall);
CPT_DEFINE_ERROR(EpsilonOutOfRange);
CPT_DEFINE_ERROR(NotEnoughKnownSlackers);
CPT_DEFINE_ERROR(LayoutInfeasible);
CPT_DEFINE_ERROR(ContradictionDetected);
CPT_DEFINE_ERROR(NoConsistentAssignment);
CPT_DEFINE_ERROR(InstanceTooLarge);
CPT_DEFINE_ERROR(DegenerateInputs);
CPT_DEFINE_ERROR(DeltaTooLarge);
CPT_DEFINE_ERROR(BracketViolation);
CPT_DEFINE_ERROR(NoSlackersDetectable);
CPT_DEFINE_ERROR(InvalidArgument);
CPT_DEFINE_ERROR(ParseError);

#undef CPT_DEFINE_ERROR

} // namespace cpt
