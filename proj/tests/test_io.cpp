#include <gtest/gtest.h>

#include "rpm/io.hpp"
#include "rpm/verify.hpp"

using namespace rpm;
using rpm::io::json;

TEST(Io, TransitionRecordFields) {
  const auto t = apply_move(HeightProfile({2, 1, 2, 3}), 1);
  const json j = io::to_json(t);
  EXPECT_EQ(j["site"], 1);
  EXPECT_EQ(j["class"], "GlobalAvalanche");
  EXPECT_EQ(j["target"], json::array({0, 1, 0, 1}));
  EXPECT_EQ(j["dDiamond"], 4);
  EXPECT_EQ(j["dGlobal"], 1);
  EXPECT_EQ(j["dPeak"], 0);
  EXPECT_EQ(j["dTiles"], -3);
}

TEST(Io, StationaryUsesFractionStrings) {
  const json j = io::to_json(exact::stationary_report(4), true);
  EXPECT_EQ(j["observables"]["expected_peaks"], "8/5");
  EXPECT_EQ(j["observables"]["drift_diamond"], "12/5");
  EXPECT_EQ(j["states"][0]["pi"], "3/10");
  EXPECT_EQ(j["integer_sum"], "10");
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Io, EmptyEstimateIsNull) {
  EXPECT_TRUE(io::to_json(std::optional<kmc::Estimate>{}).is_null());
}

TEST(Io, ManifestFields) {
  io::RunManifest m{"simulate", {{"length", 4}}, 7, "a", "b", true};
  const json j = io::to_json(m);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["tool_version"], io::kToolVersion);
  EXPECT_EQ(j["parameters"]["length"], 4);
}

TEST(Verify, SmallMatrixPasses) {
  const auto res = verify::verify_all({6, 4, false});
  EXPECT_TRUE(res.passed());
  EXPECT_TRUE(std::is_sorted(res.rows.begin(), res.rows.end(),
                             [](const auto& a, const auto& b) { return a.key < b.key; }));
  const json j = verify::to_json(res);
  bool found = false;
  for (const auto& row : j["rows"])
    if (row["row"] == "1 stationary L=04") {
      found = true;
      EXPECT_EQ(row["values"]["expected_peaks"][0], "8/5");
      EXPECT_EQ(row["values"]["prob_omega_global"][0], "1/5");
      EXPECT_EQ(row["values"]["drift_diamond"][0], "12/5");
      EXPECT_EQ(row["values"]["drift_global"][0], "1/5");
    }
  EXPECT_TRUE(found);
}

TEST(Verify, NegativeControlFails) {
  const auto res = verify::verify_all({4, 1, true});
  EXPECT_FALSE(res.passed());
}

TEST(Verify, OptionValidation) {
  EXPECT_THROW(verify::verify_all({5, 1, false}), UsageError);
  EXPECT_THROW(verify::verify_all({14, 1, false}), ResourceError);
  EXPECT_THROW(verify::verify_all({4, 0, false}), UsageError);
}
