// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <string>

#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"
#include "mplite/ehr/csv_tables.hpp"
#include "mplite/ehr/vocabulary.hpp"
#include "test_support.hpp"

namespace mplite::ehr {
namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(CsvTables, LabeventsThreeValidRows) {
  const auto rows = parse_labevents(
      "patient_id,visit_id,item_code,abnormal,timestamp\n"
      "P1,V1,50800,1,100\n"
      "P1,V1,50801,0,110\n"
      "P2,V2,50800,1,200\n",
      "labevents.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].item_code, "50801");
  EXPECT_FALSE(rows[1].abnormal);
  EXPECT_EQ(rows[2].timestamp, 200);
  EXPECT_EQ(rows[0].row, 2u);
}

TEST(CsvTables, MissingItemCodeNamesRow2) {
  const auto msg = error_of([] {
    parse_labevents("patient_id,visit_id,item_code,abnormal,timestamp\nP1,V1,,1,100\n", "labevents.csv");
  });
  EXPECT_NE(msg.find("labevents.csv: row 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("item_code"), std::string::npos) << msg;
}

TEST(CsvTables, EmptyFileWithHeaderGivesEmptyList) {
  EXPECT_TRUE(parse_admissions("patient_id,visit_id,admit_time\n", "admissions.csv").empty());
  EXPECT_TRUE(parse_diagnoses("patient_id,visit_id,icd_code\n", "diagnoses.csv").empty());
}

TEST(CsvTables, MissingColumnAndBadTimestamp) {
  EXPECT_NE(error_of([] { parse_admissions("patient_id,admit_time\nP1,5\n", "a.csv"); }).find("visit_id"),
            std::string::npos);
  const auto msg = error_of([] {
    parse_admissions("patient_id,visit_id,admit_time\nP1,V1,10\nP1,V2,soon\nP1,V3,oops\n", "a.csv");
  });
  EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
}

TEST(CsvTables, BadAbnormalFlagRejected) {
  EXPECT_THROW(parse_labevents("patient_id,visit_id,item_code,abnormal,timestamp\nP1,V1,1,yes,3\n", "l.csv"),
               DataError);
}

TEST(CsvTables, ColumnsInAnyOrderAndCaseInsensitive) {
  const auto rows = parse_diagnoses("ICD_CODE,Visit_Id,patient_id,extra\n428.0,V9,P3,zzz\n", "d.csv");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].patient_id, "P3");
  EXPECT_EQ(rows[0].visit_id, "V9");
  EXPECT_EQ(rows[0].icd_code, "428.0");
}

TEST(CsvTables, QuotedFields) {
  const auto f = split_csv_line(R"(a,"b,c","say ""hi""",)");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "say \"hi\"");
  EXPECT_EQ(f[3], "");
}

TEST(CsvTables, FormatParseRoundTrip) {
  const std::vector<LabEvent> rows{{"P1", "V1", "50800", true, 5, 0}, {"P,2", "V2", "x\"y", false, -7, 0}};
  const auto back = parse_labevents(format_labevents(rows), "rt");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].patient_id, "P,2");
  EXPECT_EQ(back[1].item_code, "x\"y");
  EXPECT_EQ(back[1].timestamp, -7);
}

TEST(CsvTables, MissingFileIsAnError) {
  testing::TempDir dir;
  EXPECT_THROW(load_admissions(dir.path() / "admissions.csv"), ValidationError);
}

TEST(Vocabulary, DedupAndLexicographicOrder) {
  const std::vector<DiagnosisEvent> events{{"P", "V", "428.0", 0}, {"P", "V", "250.00", 0}, {"P", "V", "428.0", 0}};
  const auto vocab = build_vocabulary(events);
  ASSERT_EQ(vocab.size(), 2u);
  EXPECT_EQ(vocab.index_of("250.00"), 0u);
  EXPECT_EQ(vocab.index_of("428.0"), 1u);
  EXPECT_FALSE(vocab.index_of("999").has_value());
  for (std::size_t i = 0; i < vocab.size(); ++i) EXPECT_EQ(vocab.index_of(vocab.code_at(i)), i);
}

TEST(Vocabulary, EmptyInputGivesEmptyVocabulary) {
  EXPECT_EQ(build_vocabulary(std::vector<LabEvent>{}).size(), 0u);
}

TEST(Vocabulary, FingerprintBindsKindAndCodes) {
  const auto a = Vocabulary::from_codes(VocabKind::diagnosis, {"1", "2"});
  const auto b = Vocabulary::from_codes(VocabKind::diagnosis, {"2", "1"});
  const auto c = Vocabulary::from_codes(VocabKind::lab, {"1", "2"});
  const auto d = Vocabulary::from_codes(VocabKind::diagnosis, {"1", "3"});
  EXPECT_EQ(a.fingerprint(), b.fingerprint());  // same sorted code list
  EXPECT_NE(a.fingerprint(), c.fingerprint());
  EXPECT_NE(a.fingerprint(), d.fingerprint());
  EXPECT_EQ(a.fingerprint().size(), 64u);
}

TEST(Vocabulary, SizeHookMatchesReferenceCounts) {
  std::vector<std::string> codes;
  for (std::size_t i = 0; i < kMimic3LabItems; ++i) codes.push_back(std::to_string(50000 + i));
  EXPECT_TRUE(check_vocabulary_size(Vocabulary::from_codes(VocabKind::lab, codes), kMimic3LabItems));
  codes.pop_back();
  EXPECT_FALSE(check_vocabulary_size(Vocabulary::from_codes(VocabKind::lab, codes), kMimic3LabItems));
  EXPECT_EQ(kMimic3DiagnosisCodes, 4880u);
}

}  // namespace
}  // namespace mplite::ehr
