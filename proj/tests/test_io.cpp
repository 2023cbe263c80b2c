#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "qi/channing.hpp"
#include "qi/errors.hpp"
#include "qi/io.hpp"

using namespace qi;

namespace {

InputSpec spec_for(const std::string& path = "mem.csv") {
    InputSpec s;
    s.path = path;
    return s;
}

}  // namespace

TEST(Io, ThreeRows) {
    const auto r = ingest_csv_text("entry,exit,event\n0,3,1\n1,2,0\n1.5,4,1\n", spec_for());
    EXPECT_EQ(r.data.size(), 3u);
    EXPECT_TRUE(r.has_event_column);
    EXPECT_FALSE(r.data[1].event);
}

TEST(Io, MissingEventColumnMeansAllEvents) {
    const auto r = ingest_csv_text("entry,exit\n0,3\n1,2\n", spec_for());
    EXPECT_FALSE(r.has_event_column);
    EXPECT_EQ(r.data.event_count(), 2u);
}

TEST(Io, EntryEqualsExitNamesRow) {
    try {
        ingest_csv_text("entry,exit,event\n0,3,1\n2,2,1\n", spec_for());
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.row(), 3u);
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
    }
}

TEST(Io, SkipPolicyWarns) {
    auto s = spec_for();
    s.invalid_rows = InvalidRowPolicy::Skip;
    const auto r = ingest_csv_text("entry,exit\n0,3\n2,2\n1,4\n", s);
    EXPECT_EQ(r.data.size(), 2u);
    EXPECT_EQ(r.skipped_rows, 1u);
    EXPECT_FALSE(r.warnings.empty());
}

TEST(Io, ParseErrors) {
    EXPECT_THROW(ingest_csv_text("entry,exit\n0,abc\n", spec_for()), ParseError);
    EXPECT_THROW(ingest_csv_text("entry,exit,event\n0,1,2\n", spec_for()), ParseError);
    EXPECT_THROW(ingest_csv_text("start,exit\n0,1\n", spec_for()), ParseError);
    EXPECT_THROW(ingest_csv_text("entry,exit\n0\n", spec_for()), ParseError);
    EXPECT_THROW(ingest_csv(spec_for("/nonexistent/file.csv")), ParseError);
    try {
        ingest_csv_text("entry,exit\n0,1\n0,x\n", spec_for());
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 3u);
    }
}

TEST(Io, HeaderlessDelimiterGroupAndQuotes) {
    InputSpec s = spec_for();
    s.header = false;
    s.entry_column = "2";
    s.exit_column = "3";
    s.event_column = "4";
    s.group_column = "1";
    s.group_value = "a";
    s.delimiter = ';';
    const auto r = ingest_csv_text("\"a\";0;3;1\nb;0;1;1\nA;1;2;0\n", s);
    EXPECT_EQ(r.data.size(), 2u);
    EXPECT_EQ(r.data.event_count(), 1u);
}

TEST(Io, TieCounts) {
    const auto r = ingest_csv_text("entry,exit\n0,3\n0,2\n1,3\n", spec_for());
    EXPECT_EQ(r.ties.entry, 1u);
    EXPECT_EQ(r.ties.exit, 1u);
}

TEST(Io, FileRoundTrip) {
    const std::string path = ::testing::TempDir() + "qi_io_test.csv";
    {
        std::ofstream out(path);
        out << "entry,exit,event\r\n0,3,1\r\n1,2,0\r\n";
    }
    const auto r = ingest_csv(spec_for(path));
    EXPECT_EQ(r.data.size(), 2u);
    std::remove(path.c_str());
}

TEST(Channing, RecordCountsAndChecksum) {
    const auto d = load_channing();
    EXPECT_EQ(d.male_records, 97u);
    EXPECT_EQ(d.female_records, 365u);
    EXPECT_EQ(d.checksum, kChanningChecksum);
    EXPECT_EQ(d.men.size(), 96u);
    EXPECT_EQ(d.women.size(), 361u);
}

TEST(Channing, RowCounts) {
    const auto d = load_channing();
    EXPECT_EQ(channing_analysis(d, ChanningGroup::Men).size(), 8u);
    EXPECT_EQ(channing_analysis(d, ChanningGroup::Women).size(), 8u);
    EXPECT_EQ(channing_analysis(d, ChanningGroup::Both).size(), 16u);
}

TEST(Channing, MenSignSign) {
    const auto rows = channing_analysis(load_channing(), ChanningGroup::Men);
    EXPECT_NEAR(rows[0].result.chi_square, 3.972, 0.1);
    EXPECT_NEAR(rows[0].result.p_value, 0.046, 0.005);
    EXPECT_TRUE(rows[5].reversed);
}
