#ifndef DEEPCHEST_ERROR_HPP
#define DEEPCHEST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace deepchest {

/// Failure categories used across all modules. The CLI maps these onto its
/// exit-code contract (2 config/schema, 3 I/O, 4 numeric divergence).
enum class errc {
    empty_tasks,
    empty_input,
    out_of_range,
    length_mismatch,
    non_finite,
    zero_baseline,
    shape_mismatch,
    bad_label,
    bad_dimension,
    bad_profile,
    bad_fraction,
    too_few_samples,
    bad_batch_size,
    file_not_found,
    parse_error,
    bad_config,
    io_error,
    divergence,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::empty_tasks: return "EmptyTasks";
        case errc::empty_input: return "EmptyInput";
        case errc::out_of_range: return "OutOfRange";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::non_finite: return "NonFinite";
        case errc::zero_baseline: return "ZeroBaseline";
        case errc::shape_mismatch: return "ShapeMismatch";
        case errc::bad_label: return "BadLabel";
        case errc::bad_dimension: return "BadDimension";
        case errc::bad_profile: return "BadProfile";
        case errc::bad_fraction: return "BadFraction";
        case errc::too_few_samples: return "TooFewSamples";
        case errc::bad_batch_size: return "BadBatchSize";
        case errc::file_not_found: return "FileNotFound";
        case errc::parse_error: return "ParseError";
        case errc::bad_config: return "BadConfig";
        case errc::io_error: return "IoError";
        case errc::divergence: return "Divergence";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace deepchest

#endif
