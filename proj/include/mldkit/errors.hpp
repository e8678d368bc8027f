#pragma once

#include <stdexcept>
#include <string>

namespace mldkit {

enum class errc {
    index_out_of_range,
    self_loop,
    zero_weight,
    not_minus_one_curve,
    multi_edge_at_vertex,
    not_negative_definite,
    singular_matrix,
    weight_one_vertex,
    invalid_center,
    stale_state,
    not_a_chain,
    too_shallow,
    not_lc,
    not_minimal_resolution,
    out_of_range,
    no_positive_value,
    gamma_undefined,
    family_too_large,
    depth_bound_too_small,
    unknown_example,
    parse_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::self_loop: return "SelfLoop";
        case errc::zero_weight: return "ZeroWeight";
        case errc::not_minus_one_curve: return "NotMinusOneCurve";
        case errc::multi_edge_at_vertex: return "MultiEdgeAtVertex";
        case errc::not_negative_definite: return "NotNegativeDefinite";
        case errc::singular_matrix: return "SingularMatrix";
        case errc::weight_one_vertex: return "WeightOneVertex";
        case errc::invalid_center: return "InvalidCenter";
        case errc::stale_state: return "StaleState";
        case errc::not_a_chain: return "NotAChain";
        case errc::too_shallow: return "TooShallow";
        case errc::not_lc: return "NotLc";
        case errc::not_minimal_resolution: return "NotMinimalResolution";
        case errc::out_of_range: return "OutOfRange";
        case errc::no_positive_value: return "NoPositiveValue";
        case errc::gamma_undefined: return "GammaUndefined";
        case errc::family_too_large: return "FamilyTooLarge";
        case errc::depth_bound_too_small: return "DepthBoundTooSmall";
        case errc::unknown_example: return "UnknownExample";
        case errc::parse_error: return "ParseError";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace mldkit
