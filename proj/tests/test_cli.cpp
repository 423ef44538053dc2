#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "flowsep/camera_model.hpp"
#include "flowsep/flow_io.hpp"
#include "flowsep/manifest.hpp"

using namespace flowsep;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("flowsep_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

double metric(const std::string& out, const std::string& key) {
  const auto pos = out.find(key + " ");
  REQUIRE(pos != std::string::npos);
  return std::stod(out.substr(pos + key.size() + 1));
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("separate on a camera-only field writes zero local motion") {
    TempDir dir("cli_separate");
    const fs::path in = dir.path / "pan.flo";
    write_flow_file(displacement_field({1.0, -3.0, 1.0, 0.0}, 32, 24), in);
    const RunResult r = run_cli({"separate", in.string(), "--viz"});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.find("local_fraction=0.0000") != std::string::npos);
    const FlowField local = read_flow_file(dir.path / "pan.local.flo");
    for (const FlowVector& v : local.pixels()) CHECK(v == FlowVector{});
    CHECK(read_flow_file(dir.path / "pan.global.flo") == read_flow_file(in));
    CHECK(fs::exists(dir.path / "pan.mixed.ppm"));
    CHECK(fs::exists(dir.path / "pan.local.ppm"));
  }

  TEST_CASE("fit and visualize") {
    TempDir dir("cli_fit");
    const fs::path in = dir.path / "pan.flo";
    write_flow_file(displacement_field({1.0, -3.0, 1.0, 0.0}, 16, 16), in);
    const RunResult fit = run_cli({"fit", in.string()});
    REQUIRE(fit.code == cli::kExitOk);
    CHECK(fit.out == "[1, -3, 1, 0]\nlabel pan-right\n");
    const RunResult viz = run_cli({"visualize", in.string(), "--out", (dir.path / "v.ppm").string()});
    REQUIRE(viz.code == cli::kExitOk);
    CHECK(slurp(dir.path / "v.ppm").rfind("P6\n16 16\n255\n", 0) == 0);
  }

  TEST_CASE("usage and data errors map to distinct exit codes") {
    CHECK(run_cli({"separate", "--no-such-flag", "x.flo"}).code == cli::kExitUsage);
    CHECK(run_cli({"no-such-command"}).code == cli::kExitUsage);
    CHECK(run_cli({}).code == cli::kExitUsage);
    const RunResult missing = run_cli({"fit", "/nonexistent/dir/x.flo"});
    CHECK(missing.code == cli::kExitDataError);
    CHECK(missing.err.find("flowsep: error:") != std::string::npos);

    TempDir dir("cli_errors");
    std::ofstream(dir.path / "bad.flo") << "not a flow file";
    CHECK(run_cli({"fit", (dir.path / "bad.flo").string()}).code == cli::kExitDataError);
  }

  TEST_CASE("synth, train, eval, sweep and events end to end") {
    TempDir dir("cli_pipeline");
    const std::string data = (dir.path / "data").string();
    const std::string manifest = data + "/manifest.jsonl";
    const std::string model = (dir.path / "model.json").string();
    REQUIRE(run_cli({"synth", "--per-class", "4", "--seed", "42", "--out-dir", data, "--width", "64", "--height", "64"})
                .code == cli::kExitOk);
    const std::string first_manifest = slurp(manifest);
    REQUIRE(load_manifest(manifest).size() == 24);

    const RunResult train =
        run_cli({"train", "--manifest", manifest, "--stream", "two", "--seed", "7", "--lr", "0.1", "--epochs", "50",
                 "--out", model});
    REQUIRE(train.code == cli::kExitOk);
    const std::string first_model = slurp(model);

    const RunResult events = run_cli({"events", "--manifest", manifest, "--model", model});
    REQUIRE(events.code == cli::kExitOk);
    CHECK(metric(events.out, "clips") == 24);
    CHECK(metric(events.out, "accuracy") >= 0.9);
    CHECK(events.out.find("steal") != std::string::npos);

    const RunResult eval = run_cli({"eval", "--manifest", manifest, "--model", model});
    REQUIRE(eval.code == cli::kExitOk);
    CHECK(metric(eval.out, "accuracy") >= 0.9);

    const RunResult sweep = run_cli({"sweep", "--manifest", manifest});
    REQUIRE(sweep.code == cli::kExitOk);
    CHECK(sweep.out.find("best_threshold=") != std::string::npos);

    // Reruns with identical arguments are byte-identical.
    REQUIRE(run_cli({"synth", "--per-class", "4", "--seed", "42", "--out-dir", data, "--width", "64", "--height", "64"})
                .code == cli::kExitOk);
    CHECK(slurp(manifest) == first_manifest);
    REQUIRE(run_cli({"train", "--manifest", manifest, "--stream", "two", "--seed", "7", "--lr", "0.1", "--epochs", "50",
                     "--out", model})
                .code == cli::kExitOk);
    CHECK(slurp(model) == first_model);
    CHECK(run_cli({"events", "--manifest", manifest, "--model", model}).out == events.out);
  }

  TEST_CASE("manifest parsing") {
    const fs::path base = "/data";
    const ManifestEntry e = parse_manifest_line(
        R"({"id": "c1", "activity": "layup", "sf": "failure", "frames": ["a.flo", "/abs/b.flo"], "scores": [0.1, 0.9]})",
        base);
    CHECK(e.id == "c1");
    CHECK(e.activity == 2);
    CHECK(e.sf == Outcome::Failure);
    REQUIRE(e.frames.size() == 2);
    CHECK(e.frames[0] == base / "a.flo");
    CHECK(e.frames[1] == fs::path("/abs/b.flo"));
    CHECK(e.scores == std::vector<double>{0.1, 0.9});
    CHECK(parse_activity("slam-dunk") == 4);
    CHECK(parse_activity("3") == 3);
    CHECK_FALSE(parse_activity("curling").has_value());
    CHECK_THROWS_AS(parse_manifest_line(R"({"id": "x", "activity": "curling", "frames": []})", base), Error);
    CHECK_THROWS_AS(parse_manifest_line("{broken", base), Error);
  }

  TEST_CASE("manifest errors name the offending line") {
    TempDir dir("cli_manifest");
    std::ofstream(dir.path / "m.jsonl") << "# comment\n\n{\"id\": \"x\", \"activity\": 1, \"frames\": [\"missing.flo\"]}\n";
    try {
      load_manifest(dir.path / "m.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("m.jsonl:3") != std::string::npos);
    }
  }
}
