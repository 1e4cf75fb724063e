#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "poseadapt/domain.hpp"
#include "poseadapt/error.hpp"

namespace poseadapt {

/// Summary of a loaded pose stream; counts match file contents exactly.
struct DatasetHandle {
    std::int64_t total_frames = 0;
    std::map<int, std::int64_t> per_camera_frames;
    std::set<int> camera_ids;
    std::set<std::pair<int, std::int64_t>> track_keys; // (camera_id, person_id)
    std::int64_t anomalous_frames = 0;

    double label_prevalence() const {
        return total_frames == 0 ? 0.0
                                 : static_cast<double>(anomalous_frames) / total_frames;
    }
};

namespace detail {

inline nlohmann::json frame_to_json(const PoseFrame& f) {
    nlohmann::json j;
    j["camera_id"] = f.camera_id;
    j["frame_index"] = f.frame_index;
    j["person_id"] = f.person_id;
    nlohmann::json kps = nlohmann::json::array();
    for (const auto& kp : f.keypoints) {
        if (kp.present)
            kps.push_back({kp.x, kp.y, kp.confidence});
        else
            kps.push_back(nullptr);
    }
    j["keypoints"] = std::move(kps);
    j["label"] = f.label;
    if (!f.event_category.empty()) j["event"] = f.event_category;
    return j;
}

inline PoseFrame frame_from_json(const nlohmann::json& j) {
    PoseFrame f;
    f.camera_id = j.at("camera_id").get<int>();
    f.frame_index = j.at("frame_index").get<std::int64_t>();
    f.person_id = j.at("person_id").get<std::int64_t>();
    const auto& kps = j.at("keypoints");
    if (!kps.is_array() || kps.size() != static_cast<std::size_t>(kNumKeypoints))
        fail(Errc::invalid_keypoint_count,
             "expected " + std::to_string(kNumKeypoints) + " keypoints, got " +
                 std::to_string(kps.size()));
    for (int i = 0; i < kNumKeypoints; ++i) {
        const auto& e = kps[i];
        if (e.is_null()) continue; // missing keypoint
        if (!e.is_array() || e.size() != 3)
            fail(Errc::validation_error, "keypoint entry must be null or [x,y,confidence]");
        f.keypoints[i].x = e[0].get<double>();
        f.keypoints[i].y = e[1].get<double>();
        f.keypoints[i].confidence = e[2].get<double>();
        f.keypoints[i].present = true;
    }
    f.label = j.at("label").get<int>();
    if (j.contains("event")) f.event_category = j["event"].get<std::string>();
    return f;
}

} // namespace detail

/// Loads a JSON-lines pose stream. Frames are returned in total deterministic
/// order (camera_id, frame_index, person_id). Invalid lines abort with the
/// 1-based line number.
inline std::pair<DatasetHandle, std::vector<PoseFrame>> load_pose_stream(
    const std::string& path, const std::set<int>* cameras_filter = nullptr) {
    std::ifstream in(path);
    if (!in) fail(Errc::missing_file, path);

    std::vector<PoseFrame> frames;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail(Errc::parse_error, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        PoseFrame f;
        try {
            f = detail::frame_from_json(j);
            validate(f);
        } catch (const PoseError& e) {
            throw PoseError(Errc::validation_error,
                            path + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const nlohmann::json::exception& e) {
            fail(Errc::parse_error, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (cameras_filter && !cameras_filter->count(f.camera_id)) continue;
        frames.push_back(std::move(f));
    }

    std::sort(frames.begin(), frames.end(), [](const PoseFrame& a, const PoseFrame& b) {
        if (a.camera_id != b.camera_id) return a.camera_id < b.camera_id;
        if (a.frame_index != b.frame_index) return a.frame_index < b.frame_index;
        return a.person_id < b.person_id;
    });

    DatasetHandle h;
    for (const auto& f : frames) {
        ++h.total_frames;
        ++h.per_camera_frames[f.camera_id];
        h.camera_ids.insert(f.camera_id);
        h.track_keys.insert({f.camera_id, f.person_id});
        h.anomalous_frames += f.label;
    }
    return {std::move(h), std::move(frames)};
}

inline void write_pose_stream(const std::vector<PoseFrame>& frames, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot open for writing: " + path);
    for (const auto& f : frames) out << detail::frame_to_json(f).dump() << '\n';
    if (!out) fail(Errc::io_error, "write failed: " + path);
}

/// Groups frames (already in load order) into per-(camera, person) tracks.
/// Duplicate frame indices within a track are rejected.
inline std::vector<Track> assemble_tracks(const std::vector<PoseFrame>& frames) {
    std::map<std::pair<int, std::int64_t>, Track> by_key;
    for (const auto& f : frames) {
        auto& t = by_key[{f.camera_id, f.person_id}];
        if (t.frames.empty()) {
            t.camera_id = f.camera_id;
            t.person_id = f.person_id;
        } else if (f.frame_index <= t.frames.back().frame_index) {
            fail(Errc::non_monotone_frames,
                 "duplicate or out-of-order frame_index " + std::to_string(f.frame_index) +
                     " in track (camera " + std::to_string(f.camera_id) + ", person " +
                     std::to_string(f.person_id) + ")");
        }
        t.frames.push_back(f);
    }
    std::vector<Track> tracks;
    tracks.reserve(by_key.size());
    for (auto& [key, t] : by_key) tracks.push_back(std::move(t));
    return tracks;
}

inline bool track_has_anomaly(const Track& t) {
    return std::any_of(t.frames.begin(), t.frames.end(),
                       [](const PoseFrame& f) { return f.label == 1; });
}

/// Track-atomic seeded split. The validation side is guaranteed to contain
/// both labels whenever the source does (deterministic swap if the shuffle
/// missed one).
inline std::pair<std::vector<Track>, std::vector<Track>> split_train_validation(
    std::vector<Track> tracks, double validation_fraction, std::uint64_t seed) {
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        fail(Errc::config_error, "validation_fraction must be in (0,1)");
    const std::size_t n = tracks.size();
    const auto n_val = static_cast<std::size_t>(
        std::llround(validation_fraction * static_cast<double>(n)));
    if (n_val == 0 || n_val >= n)
        fail(Errc::degenerate_split, "split would leave one side empty (" +
                                         std::to_string(n) + " tracks, fraction " +
                                         std::to_string(validation_fraction) + ")");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::size_t> val_idx(order.begin(), order.begin() + n_val);
    std::vector<std::size_t> train_idx(order.begin() + n_val, order.end());

    const bool source_has_anom =
        std::any_of(tracks.begin(), tracks.end(), [](const Track& t) { return track_has_anomaly(t); });
    const bool source_has_norm =
        std::any_of(tracks.begin(), tracks.end(), [](const Track& t) { return !track_has_anomaly(t); });

    auto ensure_label = [&](bool want_anom) {
        auto has = [&](std::size_t i) { return track_has_anomaly(tracks[i]) == want_anom; };
        if (std::any_of(val_idx.begin(), val_idx.end(), has)) return;
        auto donor = std::find_if(train_idx.begin(), train_idx.end(), has);
        if (donor == train_idx.end()) return;
        auto victim = std::find_if(val_idx.rbegin(), val_idx.rend(),
                                   [&](std::size_t i) { return !has(i); });
        if (victim == val_idx.rend()) return;
        std::swap(*donor, *victim);
    };
    if (source_has_anom && source_has_norm) {
        ensure_label(true);
        ensure_label(false);
    }

    std::sort(val_idx.begin(), val_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::vector<Track> train, val;
    train.reserve(train_idx.size());
    val.reserve(val_idx.size());
    for (auto i : train_idx) train.push_back(std::move(tracks[i]));
    for (auto i : val_idx) val.push_back(std::move(tracks[i]));
    return {std::move(train), std::move(val)};
}

} // namespace poseadapt
