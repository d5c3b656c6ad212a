#include <string>

#include <gtest/gtest.h>

#include "stirval/stirval.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  stv_string_free(s);
  return out;
}

} // namespace

TEST(CApi, Stirling) {
  char* out = nullptr;
  ASSERT_EQ(stv_stirling(8, 5, &out), STV_OK);
  EXPECT_EQ(take(out), "1050");
  ASSERT_EQ(stv_stirling_mod("8", 5, 2, 6, &out), STV_OK);
  EXPECT_EQ(take(out), "26");
  ASSERT_EQ(stv_t_p(4, 3, 3, &out), STV_OK);
  EXPECT_EQ(take(out), "-45");
}

TEST(CApi, Valuation) {
  int64_t v = -1;
  int inf = -1;
  ASSERT_EQ(stv_valuation(2, "8", 5, &v, &inf), STV_OK);
  EXPECT_EQ(v, 1);
  EXPECT_EQ(inf, 0);
  ASSERT_EQ(stv_valuation(2, "3", 5, &v, &inf), STV_OK);
  EXPECT_EQ(inf, 1);
  char* csv = nullptr;
  ASSERT_EQ(stv_valuation_table(2, 5, 5, 6, &csv), STV_OK);
  EXPECT_EQ(take(csv), "n,vp_S\n5,0\n6,0\n");
}

TEST(CApi, ErrorCodes) {
  char* out = nullptr;
  EXPECT_EQ(stv_stirling_mod("12", 3, 4, 2, &out), STV_ERR_DOMAIN);
  EXPECT_NE(std::string(stv_last_error()).find("prime"), std::string::npos);
  EXPECT_EQ(stv_stirling_mod("x", 3, 3, 2, &out), STV_ERR_DOMAIN);
  EXPECT_EQ(stv_stirling(5, 3, nullptr), STV_ERR_USAGE);
  int64_t v;
  int inf;
  EXPECT_EQ(stv_valuation(3, "0", 2, &v, &inf), STV_ERR_DOMAIN);
  stv_report* r = nullptr;
  EXPECT_EQ(stv_verify("nonsense", nullptr, &r), STV_ERR_USAGE);
  EXPECT_EQ(r, nullptr);
  EXPECT_EQ(stv_verify("lengwan", "{not json", &r), STV_ERR_USAGE);
  EXPECT_EQ(stv_verify("final", "{\"p\": 7, \"k\": 3, \"a\": 5}", &r), STV_ERR_DOMAIN);
  EXPECT_STREQ(stv_status_name(STV_ERR_PRECISION), "precision error");
  ASSERT_EQ(stv_stirling(1, 1, &out), STV_OK);
  take(out);
  EXPECT_STREQ(stv_last_error(), "");
}

TEST(CApi, TreeLifecycle) {
  stv_tree_options o;
  stv_tree_options_init(&o);
  o.depth = 6;
  o.invocation = "test";
  stv_tree* t = nullptr;
  ASSERT_EQ(stv_tree_build(7, 3, &o, &t), STV_OK);
  EXPECT_EQ(stv_tree_mu(t), 2u);
  EXPECT_GE(stv_tree_m0_observed(t), 0);
  char* json = nullptr;
  ASSERT_EQ(stv_tree_export(t, "json", &json), STV_OK);
  const std::string once = take(json);
  EXPECT_NE(once.find("\"invocation\": \"test\""), std::string::npos);
  char* dot = nullptr;
  ASSERT_EQ(stv_tree_export(t, "dot", &dot), STV_OK);
  EXPECT_EQ(take(dot).rfind("digraph", 0), 0u);
  EXPECT_EQ(stv_tree_export(t, "csv", &dot), STV_ERR_USAGE);
  stv_tree_destroy(t);

  stv_tree* back = nullptr;
  ASSERT_EQ(stv_tree_from_json(once.c_str(), &back), STV_OK);
  ASSERT_EQ(stv_tree_export(back, "json", &json), STV_OK);
  EXPECT_EQ(take(json), once);
  EXPECT_EQ(stv_tree_export(back, "dot", &dot), STV_ERR_USAGE);
  stv_tree_destroy(back);
  stv_tree_destroy(nullptr);
}

TEST(CApi, ExpSumTree) {
  const char* coefficients[] = {"1", "1", "-2"};
  const char* bases[] = {"16", "49", "28"};
  stv_tree_options o;
  stv_tree_options_init(&o);
  o.depth = 8;
  stv_tree* t = nullptr;
  ASSERT_EQ(stv_tree_build_expsum(3, 3, coefficients, bases, &o, &t), STV_OK);
  EXPECT_EQ(stv_tree_mu(t), 1u);
  stv_tree_destroy(t);
  const char* bad[] = {"1", "1", "-2"};
  const char* not_units[] = {"16", "49", "29"};
  EXPECT_EQ(stv_tree_build_expsum(3, 3, bad, not_units, &o, &t), STV_ERR_DOMAIN);
  const char* not_rational[] = {"1", "a/b", "-2"};
  EXPECT_EQ(stv_tree_build_expsum(3, 3, not_rational, bases, &o, &t), STV_ERR_DOMAIN);
}

TEST(CApi, Zero) {
  char* out = nullptr;
  ASSERT_EQ(stv_zero(7, 3, 2, 12, 0, "json", &out), STV_OK);
  const std::string j = take(out);
  EXPECT_NE(j.find("\"kind\": \"zeros\""), std::string::npos);
  EXPECT_NE(j.find("\"multiplicity\": 1"), std::string::npos);
  EXPECT_EQ(stv_zero(7, 3, 9, 12, 0, "json", &out), STV_ERR_DOMAIN);
}

TEST(CApi, VerifyAndReport) {
  stv_report* r = nullptr;
  ASSERT_EQ(stv_verify("lengwan", "{\"k_max\": 6, \"n_max\": 8}", &r), STV_OK);
  EXPECT_EQ(stv_report_passed(r), 1);
  EXPECT_STREQ(stv_report_outcome(r), "pass");
  char* json = nullptr;
  ASSERT_EQ(stv_report_export(r, "json", &json), STV_OK);
  EXPECT_NE(take(json).find("\"claim\": \"lengwan\""), std::string::npos);
  stv_report_destroy(r);

  ASSERT_EQ(stv_verify("geslen", "{\"p\": 3, \"k\": 3}", &r), STV_OK);
  EXPECT_STREQ(stv_report_outcome(r), "observed");
  EXPECT_EQ(stv_report_passed(r), 1);
  stv_report_destroy(r);

  ASSERT_EQ(stv_sweep("{\"primes\": [3], \"k_lo\": 2, \"k_hi\": 3, \"extra\": 3}", &r), STV_OK);
  EXPECT_STREQ(stv_report_outcome(r), "observed");
  stv_report_destroy(r);
}
