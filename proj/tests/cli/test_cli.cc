// tests/cli/test_cli.cc

// Copyright 2026  KWS Toolkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks of the kws command-line tool against synthetic audio.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kws/enrollment.h"
#include "kws/manifest.h"
#include "fixtures.h"
#include "subprocess.h"
#include "test_util.h"

using kws::test::CommandResult;
using kws::test::TempDir;
using kws::test::make_tone_corpus;
using kws::test::run_tool;

namespace {

const std::vector<std::string> kKeywords = {"alpha", "bravo", "charlie", "delta", "echo"};

void write_corpus(const TempDir& tmp, int per_keyword = 12, std::uint64_t seed = 5) {
  const auto corpus = make_tone_corpus(tmp.path(), kKeywords, per_keyword, seed);
  kws::write_manifest(tmp.file("manifest.jsonl"), corpus.entries);
}

}  // namespace

TEST_CASE("build-dataset filters, reports counts and is byte-deterministic") {
  TempDir tmp("kws-cli-bd");
  write_corpus(tmp);

  // Corrupt one hypothesis so the CER rule fires.
  auto entries = kws::read_manifest(tmp.file("manifest.jsonl"));
  entries[0].hypothesis = "alphaxx";
  kws::write_manifest(tmp.file("manifest.jsonl"), entries);

  const std::string args =
      "build-dataset --manifest manifest.jsonl --out filtered.jsonl "
      "--inventory-out inventory.jsonl --drop-top-frequent 0 --inventory-size 5 "
      "--samples-per-keyword 8 --seed 7";
  const CommandResult first = run_tool(tmp.path(), args);
  CHECK(first.exit_code == 0);
  CHECK(first.out.find("dropped_cer: 1") != std::string::npos);
  CHECK(first.out.find("retained: 59") != std::string::npos);
  CHECK(first.out.find("inventory_keywords: 5") != std::string::npos);

  const std::string filtered = kws::test::read_file(tmp.file("filtered.jsonl"));
  const std::string inventory = kws::test::read_file(tmp.file("inventory.jsonl"));
  const CommandResult second = run_tool(
      tmp.path(),
      "build-dataset --manifest manifest.jsonl --out filtered2.jsonl "
      "--inventory-out inventory2.jsonl --drop-top-frequent 0 --inventory-size 5 "
      "--samples-per-keyword 8 --seed 7");
  CHECK(second.exit_code == 0);
  CHECK(kws::test::read_file(tmp.file("filtered2.jsonl")) == filtered);
  CHECK(kws::test::read_file(tmp.file("inventory2.jsonl")) == inventory);
}

TEST_CASE("build-dataset on an empty manifest writes an empty output") {
  TempDir tmp("kws-cli-bd-empty");
  std::ofstream(tmp.file("empty.jsonl")).close();
  const CommandResult result = run_tool(
      tmp.path(), "build-dataset --manifest empty.jsonl --out out.jsonl");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("retained: 0") != std::string::npos);
  CHECK(result.out.find("dropped_cer: 0") != std::string::npos);
  CHECK(kws::test::read_file(tmp.file("out.jsonl")).empty());
}

TEST_CASE("build-dataset reports malformed lines with their number") {
  TempDir tmp("kws-cli-bd-bad");
  std::ofstream out(tmp.file("bad.jsonl"));
  out << R"({"audio_path":"a.wav","keyword":"k","hypothesis":"k","duration_s":1.0,"source":"s"})" << "\n";
  out << "oops\n";
  out.close();
  const CommandResult result =
      run_tool(tmp.path(), "build-dataset --manifest bad.jsonl --out out.jsonl");
  CHECK(result.exit_code == 1);
  CHECK(result.err.rfind("kws: error: ", 0) == 0);
  CHECK(result.err.find(":2:") != std::string::npos);
}

TEST_CASE("train writes a checkpoint and a downward-trending loss log") {
  TempDir tmp("kws-cli-train");
  write_corpus(tmp);
  const CommandResult result = run_tool(
      tmp.path(),
      "train --stage pretrain --loss ap --inventory manifest.jsonl --out model.ckpt "
      "--metrics metrics.jsonl --epochs 5 --seed 3 --embedding-dim 16 --hidden 32");
  CHECK(result.exit_code == 0);
  CHECK(std::filesystem::exists(tmp.file("model.ckpt")));

  std::ifstream metrics(tmp.file("metrics.jsonl"));
  std::vector<double> losses;
  std::string line;
  while (std::getline(metrics, line)) {
    if (line.empty()) continue;
    losses.push_back(nlohmann::json::parse(line).at("loss").get<double>());
  }
  REQUIRE(losses.size() == 5);
  CHECK(losses.back() < losses.front());
}

TEST_CASE("train honours explicit batch size, learning rate and loss choices") {
  TempDir tmp("kws-cli-train-flags");
  write_corpus(tmp, 8);
  for (const std::string loss : {"softmax", "nsoftmax", "amsoftmax"}) {
    const CommandResult result = run_tool(
        tmp.path(),
        "train --stage pretrain --loss " + loss +
            " --inventory manifest.jsonl --out " + loss +
            ".ckpt --metrics " + loss +
            ".metrics.jsonl --epochs 2 --batch-size 8 --lr 0.005 --seed 3 "
            "--embedding-dim 16 --hidden 32");
    CHECK(result.exit_code == 0);
    std::ifstream metrics(tmp.file(loss + ".metrics.jsonl"));
    std::string line;
    REQUIRE(std::getline(metrics, line));
    const auto first = nlohmann::json::parse(line);
    CHECK(first.at("lr").get<double>() == doctest::Approx(0.005));
    // 40 items at batch 8 = 5 steps per epoch.
    CHECK(first.at("steps").get<int>() == 5);
  }
}

TEST_CASE("train finetune without --init is a usage error") {
  TempDir tmp("kws-cli-train-err");
  write_corpus(tmp, 4);
  const CommandResult result = run_tool(
      tmp.path(),
      "train --stage finetune --loss ap --inventory manifest.jsonl --out model.ckpt");
  CHECK(result.exit_code == 2);
  CHECK(result.err.rfind("kws: error: ", 0) == 0);
  CHECK(result.err.find("--init") != std::string::npos);
}

TEST_CASE("finetune with zero epochs reproduces the input checkpoint byte for byte") {
  TempDir tmp("kws-cli-train0");
  write_corpus(tmp, 6);
  CHECK(run_tool(tmp.path(),
                 "train --stage pretrain --loss ap --inventory manifest.jsonl "
                 "--out pre.ckpt --epochs 2 --seed 3 --embedding-dim 16 --hidden 32")
            .exit_code == 0);
  CHECK(run_tool(tmp.path(),
                 "train --stage finetune --loss ap --inventory manifest.jsonl "
                 "--init pre.ckpt --out fine.ckpt --epochs 0 --seed 4")
            .exit_code == 0);
  CHECK(kws::test::read_file(tmp.file("fine.ckpt")) ==
        kws::test::read_file(tmp.file("pre.ckpt")));
}

TEST_CASE("enroll builds a store, leaves the checkpoint untouched, and scales with k") {
  TempDir tmp("kws-cli-enroll");
  write_corpus(tmp);
  REQUIRE(run_tool(tmp.path(),
                   "train --stage pretrain --loss ap --inventory manifest.jsonl "
                   "--out model.ckpt --epochs 3 --seed 3 --embedding-dim 16 --hidden 32")
              .exit_code == 0);

  const auto checkpoint_before = kws::test::file_checksum(tmp.file("model.ckpt"));
  const CommandResult one_shot = run_tool(
      tmp.path(),
      "enroll --checkpoint model.ckpt --manifest manifest.jsonl --shots 1 --out k1.bin "
      "--export-json k1.json");
  CHECK(one_shot.exit_code == 0);
  CHECK(kws::test::file_checksum(tmp.file("model.ckpt")) == checkpoint_before);

  const auto k1 = kws::load_prototypes(tmp.file("k1.bin"));
  REQUIRE(k1.size() == kKeywords.size());
  for (const auto& p : k1) CHECK(p.shots == 1);

  CHECK(run_tool(tmp.path(),
                 "enroll --checkpoint model.ckpt --manifest manifest.jsonl --shots 5 "
                 "--out k5.bin")
            .exit_code == 0);
  CHECK(run_tool(tmp.path(),
                 "enroll --checkpoint model.ckpt --manifest manifest.jsonl --shots 10 "
                 "--out k10.bin")
            .exit_code == 0);
  const auto k5 = kws::load_prototypes(tmp.file("k5.bin"));
  const auto k10 = kws::load_prototypes(tmp.file("k10.bin"));
  REQUIRE(k5.size() == k10.size());
  for (std::size_t i = 0; i < k5.size(); ++i) {
    CHECK(k5[i].keyword == k10[i].keyword);  // same keyword table
    CHECK(k5[i].shots == 5);
    CHECK(k10[i].shots == 10);
    CHECK(k5[i].vector != k10[i].vector);  // only vectors and shots differ
  }
}

TEST_CASE("enroll names the keyword that lacks samples") {
  TempDir tmp("kws-cli-enroll-err");
  write_corpus(tmp, 2);
  REQUIRE(run_tool(tmp.path(),
                   "train --stage pretrain --loss softmax --inventory manifest.jsonl "
                   "--out model.ckpt --epochs 1 --seed 3 --embedding-dim 16 --hidden 32")
              .exit_code == 0);
  const CommandResult result = run_tool(
      tmp.path(),
      "enroll --checkpoint model.ckpt --manifest manifest.jsonl --shots 5 --out s.bin");
  CHECK(result.exit_code == 1);
  CHECK(result.err.rfind("kws: error: ", 0) == 0);
  CHECK(result.err.find("alpha") != std::string::npos);
}

TEST_CASE("evaluate emits a coherent, deterministic report with a DET curve") {
  TempDir tmp("kws-cli-eval");
  write_corpus(tmp);
  REQUIRE(run_tool(tmp.path(),
                   "train --stage pretrain --loss ap --inventory manifest.jsonl "
                   "--out model.ckpt --epochs 5 --seed 3 --embedding-dim 16 --hidden 32")
              .exit_code == 0);
  REQUIRE(run_tool(tmp.path(),
                   "enroll --checkpoint model.ckpt --manifest manifest.jsonl --shots 3 "
                   "--out store.bin")
              .exit_code == 0);

  const CommandResult result = run_tool(
      tmp.path(),
      "evaluate --checkpoint model.ckpt --store store.bin --queries manifest.jsonl "
      "--report report.json --det det.csv --trials-out trials.jsonl --seed 11");
  CHECK(result.exit_code == 0);

  const auto report = nlohmann::json::parse(kws::test::read_file(tmp.file("report.json")));
  // Prototypes come from the query set itself: separable, near-zero EER.
  CHECK(report.at("eer").get<double>() < 0.05);
  CHECK(report.at("frr_at_far").at("2.5").get<double>() >=
        report.at("frr_at_far").at("10.0").get<double>());
  CHECK(report.at("accuracy").get<double>() > 0.9);
  CHECK(report.at("n_target_trials").get<int>() == 60);
  CHECK(report.at("n_nontarget_trials").get<int>() == 240);
  CHECK(report.at("seed").get<int>() == 11);

  const std::string det = kws::test::read_file(tmp.file("det.csv"));
  CHECK(det.rfind("threshold,far,frr\n", 0) == 0);

  // Re-running with identical inputs reproduces the report byte for byte.
  const std::string report_bytes = kws::test::read_file(tmp.file("report.json"));
  const CommandResult again = run_tool(
      tmp.path(),
      "evaluate --checkpoint model.ckpt --store store.bin --queries manifest.jsonl "
      "--report report2.json --det det2.csv --seed 11");
  CHECK(again.exit_code == 0);
  CHECK(kws::test::read_file(tmp.file("report2.json")) == report_bytes);
  CHECK(kws::test::read_file(tmp.file("det2.csv")) == det);

  SUBCASE("multi-threaded evaluation matches single-threaded output") {
    const CommandResult threaded = run_tool(
        tmp.path(),
        "evaluate --checkpoint model.ckpt --store store.bin --queries manifest.jsonl "
        "--report report4.json --det det4.csv --threads 4 --seed 11");
    CHECK(threaded.exit_code == 0);
    const auto single = nlohmann::json::parse(report_bytes);
    const auto multi =
        nlohmann::json::parse(kws::test::read_file(tmp.file("report4.json")));
    CHECK(single.at("eer") == multi.at("eer"));
    CHECK(single.at("accuracy") == multi.at("accuracy"));
    CHECK(kws::test::read_file(tmp.file("det4.csv")) == det);
  }

  SUBCASE("det subcommand reproduces the DET export from saved trials") {
    const CommandResult det_result =
        run_tool(tmp.path(), "det --trials trials.jsonl --out det3.csv");
    CHECK(det_result.exit_code == 0);
    CHECK(kws::test::read_file(tmp.file("det3.csv")) == det);
  }
}

TEST_CASE("evaluate rejects a store that does not match the checkpoint") {
  TempDir tmp("kws-cli-eval-dim");
  write_corpus(tmp, 4);
  REQUIRE(run_tool(tmp.path(),
                   "train --stage pretrain --loss ap --inventory manifest.jsonl "
                   "--out a.ckpt --epochs 1 --seed 3 --embedding-dim 16 --hidden 32")
              .exit_code == 0);
  REQUIRE(run_tool(tmp.path(),
                   "train --stage pretrain --loss ap --inventory manifest.jsonl "
                   "--out b.ckpt --epochs 1 --seed 3 --embedding-dim 8 --hidden 32")
              .exit_code == 0);
  REQUIRE(run_tool(tmp.path(),
                   "enroll --checkpoint a.ckpt --manifest manifest.jsonl --shots 2 "
                   "--out a.bin")
              .exit_code == 0);
  const CommandResult result = run_tool(
      tmp.path(),
      "evaluate --checkpoint b.ckpt --store a.bin --queries manifest.jsonl "
      "--report r.json");
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("does not match") != std::string::npos);
}

TEST_CASE("unknown subcommands and missing files fail with the stable prefix") {
  TempDir tmp("kws-cli-err");
  const CommandResult unknown = run_tool(tmp.path(), "frobnicate");
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.err.rfind("kws: error: ", 0) == 0);

  const CommandResult missing = run_tool(
      tmp.path(), "build-dataset --manifest nope.jsonl --out out.jsonl");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.rfind("kws: error: ", 0) == 0);
}

TEST_CASE("KWS_SEED environment variable sets the default seed") {
  TempDir tmp("kws-cli-seedenv");
  write_corpus(tmp, 3);
  const std::string args =
      "build-dataset --manifest manifest.jsonl --out f.jsonl --inventory-out i.jsonl "
      "--drop-top-frequent 0 --inventory-size 5 --samples-per-keyword 2";
  // run_tool does not set KWS_SEED; wrap this invocation manually.
  const std::string out1 = tmp.file("o1.txt");
  const std::string cmd1 = "cd '" + tmp.path().string() + "' && KWS_SEED=21 '" +
                           KWS_TOOL_PATH + "' " + args + " > '" + out1 + "' 2>&1";
  REQUIRE(std::system(cmd1.c_str()) == 0);
  const std::string inv_env = kws::test::read_file(tmp.file("i.jsonl"));
  REQUIRE_FALSE(inv_env.empty());

  const CommandResult with_flag = run_tool(tmp.path(), args + " --seed 21");
  CHECK(with_flag.exit_code == 0);
  CHECK(kws::test::read_file(tmp.file("i.jsonl")) == inv_env);
}
