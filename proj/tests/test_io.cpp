#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "hadams/cli_runner.hpp"
#include "hadams/corpus.hpp"
#include "hadams/fixtures.hpp"
#include "hadams/report.hpp"

using namespace hadams;
namespace fs = std::filesystem;

namespace {
const QuadratureSpec kQuad;

std::string temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("hadams_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}
}  // namespace

TEST_CASE("fmt17 round trips doubles bit-exactly") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-30, 30));
    const std::string s = fmt17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("hashing") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") != fnv1a64("b"));
  CHECK(hex64(0x1234abcdULL) == "000000001234abcd");
}

TEST_CASE("csv and json writers") {
  CsvWriter csv({"a", "b"});
  csv.add_row({1.0, 2.0});
  const std::string s = csv.str();
  CHECK(s.find("a,b\n") == 0);
  CHECK(s.find("1.0000000000000000e+00,2.0000000000000000e+00\n") !=
        std::string::npos);

  JsonWriter w;
  w.begin_object();
  w.field("x", 1.5);
  w.field("name", std::string("hi"));
  w.begin_array("arr");
  w.value(static_cast<long long>(3));
  w.value(true);
  w.end_array();
  w.end_object();
  CHECK(w.str() ==
        "{\"x\":\"1.5000000000000000e+00\",\"name\":\"hi\",\"arr\":[3,true]}");
  // valid JSON
  CHECK_NOTHROW(static_cast<void>(nlohmann::json::parse(w.str())));
}

TEST_CASE("config validation rejects unknown keys with a pointer") {
  nlohmann::json cfg = {{"N", 2}, {"tehta", 1.0}};
  try {
    validate_config(cfg, "moser");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("moser.tehta") != std::string::npos);
  }

  nlohmann::json nested = {{"corpus", {{"sed", 1}}}};
  try {
    validate_config(nested, "adams");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("adams.corpus.sed") != std::string::npos);
  }

  CHECK_THROWS_AS(validate_config(nlohmann::json::object(), "norms"), ConfigError);
  CHECK_THROWS_AS(validate_config(nlohmann::json::object(), "nope"), ConfigError);
  CHECK_NOTHROW(validate_config(nlohmann::json::object(), "moser"));
}

TEST_CASE("moser subcommand is deterministic byte-for-byte") {
  const std::string out1 = temp_dir("moser1");
  const std::string out2 = temp_dir("moser2");
  const nlohmann::json cfg = {{"N", 2}, {"k_list", {5, 10}}, {"theta", 1.0}};
  const std::string text = cfg.dump();
  CHECK(run_subcommand("moser", cfg, text, {out1, 1, 1}) == 0);
  CHECK(run_subcommand("moser", cfg, text, {out2, 1, 1}) == 0);
  CHECK(read_text_file(out1 + "/moser.csv") == read_text_file(out2 + "/moser.csv"));
  CHECK(read_text_file(out1 + "/report.json") ==
        read_text_file(out2 + "/report.json"));
  // config hash and constant table embedded
  const std::string rep = read_text_file(out1 + "/report.json");
  CHECK(rep.find("config_hash") != std::string::npos);
  CHECK(rep.find("gamma_N") != std::string::npos);
  CHECK_NOTHROW(static_cast<void>(nlohmann::json::parse(rep)));
}

TEST_CASE("decompose subcommand on the synthesized two-level fixture") {
  const std::string out = temp_dir("decomp");
  const nlohmann::json cfg = {{"N", 2},
                              {"fixture", "two_level"},
                              {"indices", {4, 8, 16, 32, 64}}};
  CHECK(run_subcommand("decompose", cfg, cfg.dump(), {out, 1, 1}) == 0);
  const auto rep = nlohmann::json::parse(read_text_file(out + "/report.json"));
  CHECK(rep.at("levels").get<int>() == 2);
  CHECK(fs::exists(out + "/level_1_profile.txt"));
  CHECK(fs::exists(out + "/level_2_profile.txt"));
  CHECK(fs::exists(out + "/decomposition.txt"));
  CHECK(fs::exists(out + "/fixture_manifest.json"));

  // the written manifest loads back into the same family
  const SequenceFamily fam = load_manifest(out + "/fixture_manifest.json", kQuad);
  const SequenceFamily expected =
      make_two_level_fixture(Dimension(2), {4, 8, 16, 32, 64}, kQuad);
  REQUIRE(fam.size() == expected.size());
  for (size_t i = 0; i < fam.size(); ++i) {
    REQUIRE(fam.members[i].size() == expected.members[i].size());
    for (size_t j = 0; j < fam.members[i].size(); ++j) {
      CHECK(fam.members[i].breakpoints()[j] ==
            expected.members[i].breakpoints()[j]);
      CHECK(fam.members[i].values()[j] == expected.members[i].values()[j]);
    }
  }
}

TEST_CASE("norms subcommand reads serialized functions") {
  const std::string out = temp_dir("norms");
  const Dimension dim(2);
  CorpusSpec cs;
  cs.seed = 7;
  cs.count = 3;
  std::vector<std::string> paths;
  const auto corpus = make_corpus(dim, cs);
  for (size_t i = 0; i < corpus.size(); ++i) {
    const std::string p = out + "/f" + std::to_string(i) + ".txt";
    save_logradial(p, corpus[i]);
    paths.push_back(p);
  }
  const nlohmann::json cfg = {{"functions", paths}};
  CHECK(run_subcommand("norms", cfg, cfg.dump(), {out, 1, 1}) == 0);
  const std::string csv = read_text_file(out + "/norms.csv");
  CHECK(csv.find("file,l2,grad_l2,hardy_grad,h_norm,error_bound") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("profile files from decompose reload as profiles") {
  const std::string out = temp_dir("profiles");
  const nlohmann::json cfg = {{"N", 2}, {"fixture", "moser"},
                              {"indices", {4, 8, 16, 32, 64}}};
  CHECK(run_subcommand("decompose", cfg, cfg.dump(), {out, 1, 1}) == 0);
  const Profile p = load_profile(out + "/level_1_profile.txt");
  CHECK(p.value(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}
