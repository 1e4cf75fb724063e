#pragma once

#include <stdexcept>
#include <string>

namespace poseadapt {

enum class Errc {
    invalid_keypoint_count,
    non_monotone_frames,
    label_out_of_range,
    bad_roi,
    parse_error,
    validation_error,
    missing_file,
    io_error,
    degenerate_split,
    all_missing_channel,
    degenerate_torso,
    too_few_samples,
    dimension_mismatch,
    checksum_mismatch,
    single_class,
    no_positives,
    missing_label,
    empty_abnormal_pool,
    mismatched_slices,
    config_error,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::invalid_keypoint_count: return "InvalidKeypointCount";
        case Errc::non_monotone_frames:    return "NonMonotoneFrames";
        case Errc::label_out_of_range:     return "LabelOutOfRange";
        case Errc::bad_roi:                return "BadROI";
        case Errc::parse_error:            return "ParseError";
        case Errc::validation_error:       return "ValidationError";
        case Errc::missing_file:           return "MissingFile";
        case Errc::io_error:               return "IoError";
        case Errc::degenerate_split:       return "DegenerateSplit";
        case Errc::all_missing_channel:    return "AllMissingChannel";
        case Errc::degenerate_torso:       return "DegenerateTorso";
        case Errc::too_few_samples:        return "TooFewSamples";
        case Errc::dimension_mismatch:     return "DimensionMismatch";
        case Errc::checksum_mismatch:      return "ChecksumMismatch";
        case Errc::single_class:           return "SingleClass";
        case Errc::no_positives:           return "NoPositives";
        case Errc::missing_label:          return "MissingLabel";
        case Errc::empty_abnormal_pool:    return "EmptyAbnormalPool";
        case Errc::mismatched_slices:      return "MismatchedSlices";
        case Errc::config_error:           return "ConfigError";
    }
    return "UnknownError";
}

/// Every library error carries a machine-checkable code plus a human message.
class PoseError : public std::runtime_error {
public:
    PoseError(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
    throw PoseError(code, msg);
}

} // namespace poseadapt
