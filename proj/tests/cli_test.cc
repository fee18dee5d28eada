// Copyright 2026 The Lombard Flavor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "lombard/audio.h"
#include "lombard/mapping.h"
#include "lombard/wav.h"
#include "support/synthetic_corpus.h"
#include "support/synthetic_speech.h"

namespace lombard::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome Call(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = Run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::MakeTempDir("cli"); }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }

  std::string WriteSpeech() {
    const std::string path = Path("clean.wav");
    auto s = testing::SyntheticSentence(1, testing::VoiceForSpeaker(0), 16000,
                                        1.5);
    EXPECT_TRUE(WriteWav(s, path, WavEncoding::kFloat32).ok());
    return path;
  }

  fs::path dir_;
};

TEST_F(CliTest, Version) {
  const Outcome o = Call({"--version"});
  EXPECT_EQ(o.code, kExitOk);
  EXPECT_EQ(o.out, "lombard 0.1.0 (config schema 1)\n");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Call({}).code, kExitValidation);
  EXPECT_EQ(Call({"frobnicate"}).code, kExitValidation);
  EXPECT_EQ(Call({"stoi", "--clean", "a.wav"}).code, kExitValidation);
  const Outcome help = Call({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("classify"), std::string::npos);
}

TEST_F(CliTest, StoiSelfIsOne) {
  const std::string clean = WriteSpeech();
  const Outcome o = Call({"stoi", "--clean", clean, "--degraded", clean});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out, "1.000000\n");
}

TEST_F(CliTest, MissingFileIsRuntimeError) {
  const Outcome o = Call({"stoi", "--clean", Path("nope.wav"), "--degraded",
                          Path("nope.wav")});
  EXPECT_EQ(o.code, kExitRuntime);
  EXPECT_NE(o.err.find("nope.wav"), std::string::npos) << o.err;
}

TEST_F(CliTest, JsonErrors) {
  const Outcome o = Call({"--json-errors", "stoi", "--clean", Path("x.wav"),
                          "--degraded", Path("x.wav")});
  EXPECT_EQ(o.code, kExitRuntime);
  const auto j = nlohmann::json::parse(o.err);
  EXPECT_EQ(j.at("command"), "stoi");
  EXPECT_EQ(j.at("error"), "NOT_FOUND");
  EXPECT_EQ(j.at("exit_code"), kExitRuntime);

  const Outcome usage = Call({"--json-errors", "stoi"});
  EXPECT_EQ(usage.code, kExitValidation);
  EXPECT_EQ(nlohmann::json::parse(usage.err).at("error"), "USAGE");
}

TEST_F(CliTest, FitMapNoiseless) {
  {
    std::ofstream pairs(Path("pairs.csv"));
    pairs << "stoi,wcr\n";
    for (int i = 0; i <= 20; ++i) {
      const double d = 0.3 + 0.03 * i;
      pairs.precision(17);
      pairs << d << "," << MapStoiToWcr(d, {-10.88, 6.12}) << "\n";
    }
  }
  const Outcome o = Call({"fit-map", "--pairs", Path("pairs.csv")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find("\nrmse")),
            "a = -10.8800\nb = 6.1200");
  const Outcome j = Call({"fit-map", "--pairs", Path("pairs.csv"), "--json"});
  ASSERT_EQ(j.code, kExitOk);
  EXPECT_NEAR(nlohmann::json::parse(j.out).at("a").get<double>(), -10.88,
              1e-4);
}

TEST_F(CliTest, GenNoiseAndSelfFeedback) {
  const Outcome gen = Call({"gen-noise", "--kind", "ssn", "--level", "62",
                            "--seconds", "0.5", "--out", Path("n.wav")});
  ASSERT_EQ(gen.code, kExitOk) << gen.err;
  auto noise = ReadWav(Path("n.wav"));
  ASSERT_TRUE(noise.ok());
  EXPECT_EQ(noise->size(), 8000u);
  EXPECT_NEAR(*AWeightedLevel(*noise, CalibrationRef{}), 62.0, 0.05);

  const std::string clean = WriteSpeech();
  const Outcome fb = Call({"self-feedback", "--in", clean, "--out",
                           Path("fb.wav"), "--bone-gain", "0.5"});
  ASSERT_EQ(fb.code, kExitOk) << fb.err;
  auto out = ReadWav(Path("fb.wav"));
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out->size(), ReadWav(clean)->size());

  EXPECT_EQ(Call({"gen-noise", "--kind", "pink", "--out", Path("p.wav")}).code,
            kExitValidation);
}

TEST_F(CliTest, ClassifyIncompleteManifest) {
  testing::CorpusOptions opt;
  opt.n_speakers = 2;
  opt.n_sentences = 3;
  opt.seconds = 1.0;
  opt.ladder = {30, 35};
  auto m = testing::WriteCorpus(opt, dir_ / "corpus");
  ASSERT_TRUE(m.ok());
  // Default ladder: 30..80, so levels 40..80 are missing.
  const std::string manifest = (dir_ / "corpus" / "manifest.csv").string();
  const Outcome o = Call({"classify", "--manifest", manifest});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_NE(o.err.find("40"), std::string::npos) << o.err;
  const Outcome v = Call({"validate", "--manifest", manifest});
  EXPECT_EQ(v.code, kExitValidation);
}

TEST_F(CliTest, ClassifyAndEvaluatePair) {
  testing::CorpusOptions opt;
  opt.n_speakers = 2;
  opt.n_sentences = 4;
  opt.seconds = 1.0;
  opt.ladder = {30, 35};
  ASSERT_TRUE(testing::WriteCorpus(opt, dir_ / "corpus").ok());
  std::ofstream(Path("cfg.json")) << R"({"ladder": [30, 35], "seeds": [1, 2]})";
  const std::string manifest = (dir_ / "corpus" / "manifest.csv").string();

  const Outcome v = Call({"validate", "--manifest", manifest, "--config",
                          Path("cfg.json")});
  EXPECT_EQ(v.code, kExitOk) << v.err;

  const Outcome text = Call({"-j", "2", "classify", "--manifest", manifest,
                             "--config", Path("cfg.json")});
  ASSERT_EQ(text.code, kExitOk) << text.err;
  EXPECT_NE(text.out.find("seed 1"), std::string::npos);
  EXPECT_NE(text.out.find("seed 2"), std::string::npos);
  EXPECT_NE(text.out.find("30/35"), std::string::npos);

  const Outcome js = Call({"classify", "--manifest", manifest, "--config",
                           Path("cfg.json"), "--out", Path("r.json")});
  ASSERT_EQ(js.code, kExitOk) << js.err;
  std::ifstream in(Path("r.json"));
  const auto arr = nlohmann::json::parse(in);
  ASSERT_TRUE(arr.is_array());
  EXPECT_EQ(arr.size(), 2u);

  const Outcome pair =
      Call({"evaluate-pair", "--manifest", manifest, "--config",
            Path("cfg.json"), "--base", "30", "--high", "35"});
  ASSERT_EQ(pair.code, kExitOk) << pair.err;
  EXPECT_EQ(pair.out.rfind("30/35  ", 0), 0u) << pair.out;
  EXPECT_NE(pair.out.find("df = 3"), std::string::npos) << pair.out;
}

TEST(ExitCodeForTest, Mapping) {
  EXPECT_EQ(ExitCodeFor(absl::OkStatus()), kExitOk);
  EXPECT_EQ(ExitCodeFor(absl::InvalidArgumentError("")), kExitValidation);
  EXPECT_EQ(ExitCodeFor(absl::FailedPreconditionError("")), kExitValidation);
  EXPECT_EQ(ExitCodeFor(absl::OutOfRangeError("")), kExitValidation);
  EXPECT_EQ(ExitCodeFor(absl::NotFoundError("")), kExitRuntime);
  EXPECT_EQ(ExitCodeFor(absl::InternalError("")), kExitRuntime);
}

}  // namespace
}  // namespace lombard::cli
