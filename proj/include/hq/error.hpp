#pragma once

#include <stdexcept>
#include <string>

namespace hq {

// Error categories. The CLI maps these onto exit codes: a mathematical
// negative (the input was well-formed, the answer is "no") is distinct from
// malformed input and from the desk-scale spectrum limit.
enum class Errc {
    parse_error,
    not_in_field,
    not_real,
    dimension_mismatch,
    not_hermitian,
    not_divisible,
    map_invalid,
    forms_differ,
    dependent_components,
    no_equivalence,
    unsupported_spectrum,
    invalid_parameters,
    not_degree2,
    not_sphere_map,
    not_in_any_class,
    not_lowest_terms,
    singular,
    bad_input,
    internal,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void check(bool cond, Errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

// Mathematical negatives: the computation ran fine and the answer is "no".
inline bool is_math_negative(Errc c) {
    switch (c) {
        case Errc::not_divisible:
        case Errc::map_invalid:
        case Errc::forms_differ:
        case Errc::no_equivalence:
        case Errc::dependent_components:
        case Errc::not_in_any_class:
            return true;
        default:
            return false;
    }
}

}  // namespace hq
