#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sgs {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct UnknownStateError : Error {
    std::string state;
    explicit UnknownStateError(std::string s)
        : Error("unknown state: " + s), state(std::move(s)) {}
};

struct UnknownActionError : Error {
    std::string action;
    explicit UnknownActionError(std::string a)
        : Error("unknown action: " + a), action(std::move(a)) {}
};

// validate()
struct EmptyActionSetError : Error {
    int state;
    EmptyActionSetError(int s, const std::string& name)
        : Error("state has no available action: " + name), state(s) {}
};
struct ProbabilityMassError : Error {
    int state, action;
    std::string total;
    ProbabilityMassError(int s, int a, const std::string& where, std::string tot)
        : Error("probabilities under " + where + " sum to " + tot + ", expected 1"),
          state(s), action(a), total(std::move(tot)) {}
};
struct NonPositiveProbabilityError : Error {
    int state, action, target;
    NonPositiveProbabilityError(int s, int a, int t, const std::string& what)
        : Error("transition has non-positive probability: " + what),
          state(s), action(a), target(t) {}
};

// subarena()
struct PartialActionRemovalError : Error {
    int state, action;
    PartialActionRemovalError(int s, int a, const std::string& where)
        : Error("subarena keeps only part of the transitions under " + where),
          state(s), action(a) {}
};
struct DeadStateError : Error {
    int state;
    DeadStateError(int s, const std::string& name)
        : Error("subarena leaves state without actions: " + name), state(s) {}
};

struct InvalidHistoryError : Error {
    using Error::Error;
};
struct UnavailableActionError : Error {
    int state, action;
    UnavailableActionError(int s, int a, const std::string& what)
        : Error("action not available: " + what), state(s), action(a) {}
};
struct IncompatibleStrategyError : Error {
    int state, action;
    IncompatibleStrategyError(int s, int a, const std::string& what)
        : Error("strategy incompatible with subarena: " + what), state(s), action(a) {}
};

struct NotDeterministicError : Error {
    using Error::Error;
};
struct MissingPrioritiesError : Error {
    MissingPrioritiesError() : Error("arena carries no priority map") {}
};
struct TagMismatchError : Error {
    using Error::Error;
};
struct SingularSystemError : Error {
    using Error::Error;
};
struct SeparationViolatedError : Error {
    std::vector<int> path;  // states of the offending split-arena walk
    SeparationViolatedError(std::string what, std::vector<int> p)
        : Error(std::move(what)), path(std::move(p)) {}
};

// solver
struct NoSaddleError : Error {
    using Error::Error;
};
struct NoUniformOptimumError : Error {
    using Error::Error;
};
struct PreferenceNotTotalEnoughError : Error {
    using Error::Error;
};
struct EnumerationBoundError : Error {
    using Error::Error;
};

}  // namespace sgs
