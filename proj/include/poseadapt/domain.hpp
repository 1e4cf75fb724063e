#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poseadapt/error.hpp"

namespace poseadapt {

inline constexpr int kNumKeypoints = 17;

/// COCO17 joint order. Input files must conform to this ordering.
inline constexpr std::array<const char*, kNumKeypoints> kCoco17Names = {
    "nose",       "left_eye",   "right_eye", "left_ear",   "right_ear",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist", "right_wrist", "left_hip",  "right_hip",
    "left_knee",  "right_knee", "left_ankle", "right_ankle"};

enum Coco17 : int {
    kNose = 0, kLeftEye, kRightEye, kLeftEar, kRightEar,
    kLeftShoulder, kRightShoulder, kLeftElbow, kRightElbow,
    kLeftWrist, kRightWrist, kLeftHip, kRightHip,
    kLeftKnee, kRightKnee, kLeftAnkle, kRightAnkle,
};

/// The five concealment categories used as canonical event labels.
inline constexpr std::array<const char*, 5> kEventCategories = {
    "pants", "hoodie", "bag_standing", "bag_floor", "jacket"};

struct Keypoint {
    double x = 0.0;
    double y = 0.0;
    double confidence = 0.0;
    bool present = false;
};

inline bool operator==(const Keypoint& a, const Keypoint& b) {
    if (a.present != b.present) return false;
    if (!a.present) return true; // missing keypoints compare equal regardless of payload
    return a.x == b.x && a.y == b.y && a.confidence == b.confidence;
}

struct PoseFrame {
    int camera_id = 0;
    std::int64_t frame_index = 0;
    std::int64_t person_id = 0;
    std::array<Keypoint, kNumKeypoints> keypoints{};
    int label = 0; // 0 = normal, 1 = shoplifting
    std::string event_category; // non-empty only when label == 1
};

inline bool operator==(const PoseFrame& a, const PoseFrame& b) {
    return a.camera_id == b.camera_id && a.frame_index == b.frame_index &&
           a.person_id == b.person_id && a.keypoints == b.keypoints &&
           a.label == b.label && a.event_category == b.event_category;
}

struct Track {
    int camera_id = 0;
    std::int64_t person_id = 0;
    std::vector<PoseFrame> frames; // strictly increasing frame_index
};

struct PoseWindow {
    int camera_id = 0;
    std::int64_t person_id = 0;
    std::int64_t start_frame = 0;
    std::vector<PoseFrame> frames; // exactly window_size contiguous frames
    int label = 0;                 // 1 iff any contained frame is labeled 1
};

struct WindowRef {
    int camera_id = 0;
    std::int64_t person_id = 0;
    std::int64_t start_frame = 0;
};

inline bool operator==(const WindowRef& a, const WindowRef& b) {
    return a.camera_id == b.camera_id && a.person_id == b.person_id &&
           a.start_frame == b.start_frame;
}

struct FeatureVector {
    std::vector<double> values;
    WindowRef window_ref;
};

struct Roi {
    int camera_id = 0;
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
};

enum class ScorerKind { gaussian, pca };

inline const char* scorer_kind_name(ScorerKind k) {
    return k == ScorerKind::gaussian ? "gaussian" : "pca";
}

/// Immutable trained-scorer snapshot. `checksum` covers the numeric params
/// exactly (bit patterns), so any consumer can detect a torn or corrupted copy.
struct ScorerWeights {
    int version = 0; // 0 = initial offline weights
    ScorerKind kind = ScorerKind::gaussian;
    int dim = 0;
    std::vector<double> mean;                     // length dim
    std::vector<double> variance;                 // gaussian: length dim
    std::vector<std::vector<double>> components;  // pca: k rows of length dim
    std::optional<int> trained_on_buffer;
    bool rank_deficient = false;
    std::uint64_t checksum = 0;
};

struct CalibrationStats {
    double best_f1 = 0.0;
    double best_hprs = 0.0;
    std::int64_t candidates_swept = 0;
};

struct ThresholdSet {
    double thr_f1 = 0.0;
    double thr_hprs = 0.0;
    CalibrationStats calibration_stats;
};

enum class ThresholdChoice { f1, hprs };

struct ConfusionCounts {
    std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::int64_t total() const { return tp + fp + tn + fn; }
};

/// Metrics for one evaluation slice. AUCs are empty when the slice holds a
/// single class (undefined rather than 0).
struct SliceMetrics {
    std::string slice;
    std::optional<double> auc_roc;
    std::optional<double> auc_pr;
    double f1_at_thr_f1 = 0.0;
    double hprs_at_thr_hprs = 0.0;
    ConfusionCounts confusion_f1;
    ConfusionCounts confusion_hprs;
    std::int64_t n_frames = 0;
    std::int64_t n_anomalous = 0;
};

struct EvalReport {
    SliceMetrics overall;
    std::vector<SliceMetrics> per_camera;
    std::vector<SliceMetrics> per_event;
    std::int64_t unscored_frames = 0;
};

enum class ScheduleMode { half_day, full_day };

inline const char* schedule_mode_name(ScheduleMode m) {
    return m == ScheduleMode::half_day ? "half_day" : "full_day";
}

/// Update-trigger calendar over logical frame time. Slice s covers frame
/// indices [s*slice_len, (s+1)*slice_len); boundaries mark slice ends.
struct Schedule {
    ScheduleMode mode = ScheduleMode::half_day;
    std::int64_t frames_per_day = 10000;
    std::vector<std::int64_t> boundaries;
    int num_updates = 0;

    std::int64_t slice_len() const {
        return mode == ScheduleMode::half_day ? frames_per_day / 2 : frames_per_day;
    }
};

inline Schedule make_schedule(ScheduleMode mode, std::int64_t frames_per_day,
                              std::int64_t stream_len) {
    if (frames_per_day <= 0) fail(Errc::config_error, "frames_per_day must be positive");
    if (mode == ScheduleMode::half_day && frames_per_day % 2 != 0)
        fail(Errc::config_error, "frames_per_day must be even for half_day schedule");
    Schedule s;
    s.mode = mode;
    s.frames_per_day = frames_per_day;
    const std::int64_t len = s.slice_len();
    for (std::int64_t b = len; b <= stream_len; b += len) s.boundaries.push_back(b);
    s.num_updates = static_cast<int>(s.boundaries.size());
    return s;
}

/// Pseudo-normal windows accumulated across all cameras within one slice.
struct CollectionBuffer {
    int schedule_index = 0;
    std::vector<FeatureVector> windows;
    std::map<int, std::int64_t> per_camera_counts;
    std::int64_t contaminated = 0; // true-label-1 windows buffered anyway
};

enum class TrainerMode { simulated, concurrent };

struct RunConfig {
    int window_size = 24;
    int stride = 6;
    int smoothing_len = 8;
    int mix_normal = 9;
    int mix_abnormal = 1;
    ScheduleMode schedule_mode = ScheduleMode::half_day;
    std::int64_t frames_per_day = 10000;
    ScorerKind scorer_kind = ScorerKind::gaussian;
    int pca_k = 8;
    double ridge_epsilon = 1e-6;
    ThresholdChoice threshold_choice = ThresholdChoice::hprs;
    bool adaptive_thresholds = false;
    std::uint64_t rng_seed = 42;
    int deployment_lag = 2;
    double validation_fraction = 0.2;
    bool include_velocity = true;
    TrainerMode trainer_mode = TrainerMode::simulated;
    std::int64_t min_buffer_windows = 0; // 0 = auto per scorer kind
    std::string train_path;
    std::string stream_path;
    std::string out_dir;
    std::vector<Roi> rois;

    std::int64_t effective_min_buffer_windows() const {
        if (min_buffer_windows > 0) return min_buffer_windows;
        return scorer_kind == ScorerKind::pca ? 2 * (static_cast<std::int64_t>(pca_k) + 1) : 2;
    }
    double filtering_threshold(const ThresholdSet& t) const {
        return threshold_choice == ThresholdChoice::f1 ? t.thr_f1 : t.thr_hprs;
    }
};

// ---------------------------------------------------------------------------
// Validation

inline void validate(const Keypoint& kp) {
    if (!kp.present) return;
    if (!(kp.confidence >= 0.0 && kp.confidence <= 1.0))
        fail(Errc::validation_error, "keypoint confidence outside [0,1]");
    if (!std::isfinite(kp.x) || !std::isfinite(kp.y))
        fail(Errc::validation_error, "keypoint coordinate not finite");
}

inline void validate(const PoseFrame& f) {
    if (f.camera_id < 1) fail(Errc::validation_error, "camera_id must be >= 1");
    if (f.frame_index < 0) fail(Errc::validation_error, "frame_index must be >= 0");
    if (f.person_id < 0) fail(Errc::validation_error, "person_id must be >= 0");
    if (f.label != 0 && f.label != 1) fail(Errc::label_out_of_range, "label must be 0 or 1");
    if (f.label == 0 && !f.event_category.empty())
        fail(Errc::validation_error, "event_category set on a normal frame");
    for (const auto& kp : f.keypoints) validate(kp);
}

inline void validate(const Track& t) {
    for (std::size_t i = 0; i < t.frames.size(); ++i) {
        const auto& f = t.frames[i];
        if (f.camera_id != t.camera_id || f.person_id != t.person_id)
            fail(Errc::validation_error, "track frame has foreign camera/person id");
        if (i > 0 && f.frame_index <= t.frames[i - 1].frame_index)
            fail(Errc::non_monotone_frames, "frame_index not strictly increasing at position " +
                                                std::to_string(i));
        validate(f);
    }
}

inline void validate(const Roi& r) {
    if (!(r.x_min < r.x_max) || !(r.y_min < r.y_max))
        fail(Errc::bad_roi, "ROI rectangle must satisfy x_min < x_max and y_min < y_max");
}

inline void validate(const PoseWindow& w, int window_size) {
    if (static_cast<int>(w.frames.size()) != window_size)
        fail(Errc::validation_error, "window frame count != window_size");
    int any_anom = 0;
    for (std::size_t i = 0; i < w.frames.size(); ++i) {
        const auto& f = w.frames[i];
        if (f.camera_id != w.camera_id || f.person_id != w.person_id)
            fail(Errc::validation_error, "window frame has foreign camera/person id");
        if (f.frame_index != w.start_frame + static_cast<std::int64_t>(i))
            fail(Errc::validation_error, "window frames not contiguous");
        any_anom |= f.label;
    }
    if (w.label != any_anom)
        fail(Errc::validation_error, "window label violates any-frame rule");
}

inline void validate(const RunConfig& c) {
    if (!(c.window_size > c.stride && c.stride > 0))
        fail(Errc::config_error, "require window_size > stride > 0");
    if (c.smoothing_len < 1) fail(Errc::config_error, "smoothing_len must be >= 1");
    if (c.mix_normal < 1 || c.mix_abnormal < 0)
        fail(Errc::config_error, "mix ratio must parse to positive integers");
    if (c.deployment_lag < 0) fail(Errc::config_error, "deployment_lag must be >= 0");
    if (!(c.validation_fraction > 0.0 && c.validation_fraction < 1.0))
        fail(Errc::config_error, "validation_fraction must be in (0,1)");
    if (c.scorer_kind == ScorerKind::pca && c.pca_k < 1)
        fail(Errc::config_error, "pca_k must be >= 1");
    if (c.ridge_epsilon < 0) fail(Errc::config_error, "ridge_epsilon must be >= 0");
    for (const auto& r : c.rois) validate(r);
}

// ---------------------------------------------------------------------------
// Checksums

inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64_doubles(const std::vector<double>& v, std::uint64_t h) {
    return v.empty() ? h : fnv1a64(v.data(), v.size() * sizeof(double), h);
}

/// Digest over the numeric params only; version and provenance metadata are
/// not part of the integrity check.
inline std::uint64_t weights_checksum(const ScorerWeights& w) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const int kind = static_cast<int>(w.kind);
    h = fnv1a64(&kind, sizeof(kind), h);
    h = fnv1a64(&w.dim, sizeof(w.dim), h);
    h = fnv1a64_doubles(w.mean, h);
    h = fnv1a64_doubles(w.variance, h);
    for (const auto& c : w.components) h = fnv1a64_doubles(c, h);
    return h;
}

inline bool checksum_valid(const ScorerWeights& w) { return weights_checksum(w) == w.checksum; }

inline void require_checksum(const ScorerWeights& w) {
    if (!checksum_valid(w))
        fail(Errc::checksum_mismatch,
             "weights version " + std::to_string(w.version) + " failed integrity check");
}

} // namespace poseadapt
