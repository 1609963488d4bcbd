#pragma once

#include <stdexcept>
#include <string>

namespace localroots {

/// Base class for every error raised by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that could not be parsed or fails structural validation.
class parse_error : public error {
public:
    using error::error;
};

/// A decision would depend on digits beyond the precision window that is
/// actually known.  Raising this is the honest alternative to guessing:
/// callers can retry with a deeper window or report "undecided".
class insufficient_precision : public error {
public:
    explicit insufficient_precision(const std::string& what,
                                    long needed = -1, long available = -1)
        : error(what), needed_digits(needed), available_digits(available) {}

    long needed_digits;    ///< digits required to decide, -1 if unknown
    long available_digits; ///< digits available when the question was asked
};

/// Three-valued answer for predicates evaluated on bounded-precision data.
/// `unknown` means the known digits are consistent with both outcomes.
enum class Tri { no, yes, unknown };

inline Tri tri_of(bool b) { return b ? Tri::yes : Tri::no; }

inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::no || b == Tri::no) return Tri::no;
    if (a == Tri::unknown || b == Tri::unknown) return Tri::unknown;
    return Tri::yes;
}

inline Tri tri_not(Tri a) {
    if (a == Tri::unknown) return Tri::unknown;
    return a == Tri::yes ? Tri::no : Tri::yes;
}

/// Collapse a three-valued answer into a bool, refusing to guess.
inline bool require_decided(Tri t, const std::string& question) {
    if (t == Tri::unknown)
        throw insufficient_precision("undecidable at current precision: " + question);
    return t == Tri::yes;
}

/// Outcome of a root-existence test together with the number of significant
/// digits that were actually consulted (the level at which the deciding
/// congruence stabilizes).
struct RootDecision {
    bool exists;
    int digits_used;
};

} // namespace localroots
