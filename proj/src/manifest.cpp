#include "flowsep/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "flowsep/flow_io.hpp"

namespace fs = std::filesystem;

namespace flowsep {

namespace {

std::vector<fs::path> path_list(const nlohmann::json& j, const fs::path& base) {
  std::vector<fs::path> out;
  for (const auto& item : j) {
    fs::path p = item.get<std::string>();
    out.push_back(p.is_absolute() ? p : base / p);
  }
  return out;
}

nlohmann::json relative_list(std::span<const fs::path> paths, const fs::path& base) {
  auto out = nlohmann::json::array();
  for (const auto& p : paths) out.push_back(p.lexically_relative(base).generic_string());
  return out;
}

std::string sf_text(const std::optional<Outcome>& sf) {
  if (!sf) return "none";
  return *sf == Outcome::Success ? "success" : "failure";
}

}  // namespace

std::optional<int> parse_activity(std::string_view text) {
  for (int i = 0; i < kActivityClasses; ++i) {
    if (text == kActivityNames[static_cast<std::size_t>(i)]) return i;
  }
  if (text.size() == 1 && text[0] >= '0' && text[0] < '0' + kActivityClasses) return text[0] - '0';
  return std::nullopt;
}

ManifestEntry parse_manifest_line(std::string_view line, const fs::path& base) {
  try {
    const auto j = nlohmann::json::parse(line);
    ManifestEntry e;
    e.id = j.at("id").get<std::string>();

    const auto& activity = j.at("activity");
    std::optional<int> label;
    if (activity.is_number_integer()) {
      const int v = activity.get<int>();
      if (v >= 0 && v < kActivityClasses) label = v;
    } else if (activity.is_string()) {
      label = parse_activity(activity.get<std::string>());
    }
    if (!label) throw Error(Errc::LabelOutOfRange, "clip " + e.id + ": bad activity " + activity.dump());
    e.activity = *label;

    const std::string sf = j.value("sf", "none");
    if (sf == "success") {
      e.sf = Outcome::Success;
    } else if (sf == "failure") {
      e.sf = Outcome::Failure;
    } else if (sf != "none") {
      throw Error(Errc::LabelOutOfRange, "clip " + e.id + ": bad sf label '" + sf + "'");
    }

    e.frames = path_list(j.at("frames"), base);
    if (e.frames.empty()) throw Error(Errc::Parse, "clip " + e.id + " lists no frames");
    if (j.contains("scores")) {
      e.scores = j.at("scores").get<std::vector<double>>();
      if (e.scores->size() != e.frames.size()) {
        throw Error(Errc::LengthMismatch, "clip " + e.id + ": " + std::to_string(e.scores->size()) +
                                              " scores for " + std::to_string(e.frames.size()) + " frames");
      }
      for (double s : *e.scores) {
        if (!(s >= 0.0 && s <= 1.0)) throw Error(Errc::Parse, "clip " + e.id + ": score outside [0, 1]");
      }
    }
    if (j.contains("global_frames")) e.global_frames = path_list(j.at("global_frames"), base);
    if (j.contains("local_frames")) e.local_frames = path_list(j.at("local_frames"), base);
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::Parse, std::string("malformed manifest record: ") + ex.what());
  }
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open manifest " + path.string());
  const fs::path base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    try {
      ManifestEntry e = parse_manifest_line(line, base);
      for (const auto& f : e.frames) {
        if (!fs::exists(f)) throw Error(Errc::Io, "missing frame file " + f.string());
      }
      entries.push_back(std::move(e));
    } catch (const Error& err) {
      throw Error(err.code(), path.string() + ":" + std::to_string(line_no) + ": " + err.what());
    }
  }
  if (entries.empty()) throw Error(Errc::EmptyDataset, "manifest " + path.string() + " has no clips");
  return entries;
}

void save_manifest(std::span<const ManifestEntry> entries, const fs::path& path) {
  const fs::path base = path.parent_path();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  for (const ManifestEntry& e : entries) {
    nlohmann::json j;
    j["id"] = e.id;
    j["activity"] = kActivityNames[static_cast<std::size_t>(e.activity)];
    j["sf"] = sf_text(e.sf);
    j["frames"] = relative_list(e.frames, base);
    if (e.scores) j["scores"] = *e.scores;
    if (!e.global_frames.empty()) j["global_frames"] = relative_list(e.global_frames, base);
    if (!e.local_frames.empty()) j["local_frames"] = relative_list(e.local_frames, base);
    out << j.dump() << "\n";
  }
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

ManifestEntry write_clip(const SynthClip& clip, const fs::path& dir, const std::string& id) {
  fs::create_directories(dir);
  ManifestEntry e;
  e.id = id;
  e.activity = clip.activity_label;
  e.sf = clip.sf_label;
  e.scores = clip.scores;
  for (std::size_t t = 0; t < clip.mixed.length(); ++t) {
    char frame[16];
    std::snprintf(frame, sizeof frame, "%02zu.flo", t);
    const fs::path mixed = dir / ("mixed_" + std::string(frame));
    const fs::path global = dir / ("global_" + std::string(frame));
    const fs::path local = dir / ("local_" + std::string(frame));
    write_flow_file(clip.mixed.frames()[t], mixed);
    write_flow_file(clip.global.frames()[t], global);
    write_flow_file(clip.local.frames()[t], local);
    e.frames.push_back(mixed);
    e.global_frames.push_back(global);
    e.local_frames.push_back(local);
  }
  return e;
}

fs::path write_dataset(const SynthDataset& dataset, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<ManifestEntry> entries;
  for (std::size_t c = 0; c < dataset.clips.size(); ++c) {
    char id[32];
    std::snprintf(id, sizeof id, "clip_%04zu", c);
    entries.push_back(write_clip(dataset.clips[c], out_dir / id, id));
  }
  const fs::path manifest = out_dir / "manifest.jsonl";
  save_manifest(entries, manifest);
  return manifest;
}

std::vector<FlowField> load_frames(std::span<const fs::path> paths) {
  std::vector<FlowField> frames;
  frames.reserve(paths.size());
  for (const auto& p : paths) frames.push_back(read_flow_file(p));
  return frames;
}

}  // namespace flowsep
