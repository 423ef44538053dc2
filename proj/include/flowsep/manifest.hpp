#pragma once

// Clip manifest: JSON Lines, one clip per line.
//
//   {"id": "clip_0000", "activity": "3-point", "sf": "success",
//    "frames": ["clip_0000/mixed_00.flo", ...],
//    "scores": [0.12, ...],                      // optional, one per frame
//    "global_frames": [...], "local_frames": [...]}  // optional ground truth
//
// "activity" is a class name or an integer 0-5; "sf" is success, failure or
// none. Relative paths resolve against the manifest's directory.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowsep/event_fusion.hpp"
#include "flowsep/synth.hpp"

namespace flowsep {

struct ManifestEntry {
  std::string id;
  std::vector<std::filesystem::path> frames;
  int activity = 0;
  std::optional<Outcome> sf;
  std::optional<std::vector<double>> scores;
  std::vector<std::filesystem::path> global_frames;
  std::vector<std::filesystem::path> local_frames;
};

std::optional<int> parse_activity(std::string_view text);

/// Parses one record; `base` resolves relative paths.
ManifestEntry parse_manifest_line(std::string_view line, const std::filesystem::path& base);

/// Loads and validates every record: paths exist, labels in range, scores
/// match the frame count. Blank lines and lines starting with '#' are skipped.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

/// Writes records with paths relative to the manifest directory.
void save_manifest(std::span<const ManifestEntry> entries, const std::filesystem::path& path);

/// Writes one clip's mixed/global/local frames into `dir` and returns its
/// manifest record (absolute paths).
ManifestEntry write_clip(const SynthClip& clip, const std::filesystem::path& dir, const std::string& id);

/// Writes every clip's mixed/global/local frames under out_dir and a
/// manifest.jsonl next to them; returns the manifest path.
std::filesystem::path write_dataset(const SynthDataset& dataset, const std::filesystem::path& out_dir);

std::vector<FlowField> load_frames(std::span<const std::filesystem::path> paths);

}  // namespace flowsep
