#include "inapt/report.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "testutil.hpp"

using namespace inapt;
namespace fs = std::filesystem;

namespace {

const CorpusStore& fixture() {
    static const CorpusStore store = testutil::synthetic_store(120, 424242);
    return store;
}

fs::path golden_dir() { return fs::path(__FILE__).parent_path() / "data" / "golden"; }

// Compares rendered output against the committed golden; set
// INAPT_UPDATE_GOLDEN=1 to rewrite after intentional format changes.
void check_golden(const std::string& name, const std::string& content) {
    const fs::path path = golden_dir() / name;
    if (std::getenv("INAPT_UPDATE_GOLDEN")) {
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::trunc | std::ios::binary);
        out << content;
        return;
    }
    std::ifstream in(path, std::ios::binary);
    ASSERT_TRUE(in) << "missing golden " << path << " (run with INAPT_UPDATE_GOLDEN=1)";
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(content, buf.str()) << "golden mismatch: " << path;
}

}  // namespace

TEST(Tables, Table1aShape) {
    const Table t = build_table1a(fixture().annotations());
    ASSERT_EQ(t.cells.size(), 14u);
    EXPECT_EQ(t.columns, (std::vector<std::string>{"dimension", "yes", "no"}));
    // per row: yes + no == corpus size
    for (const auto& row : t.cells)
        EXPECT_EQ(std::stoul(row[1]) + std::stoul(row[2]), fixture().arguments().size());
    EXPECT_EQ(t.cells[0][0], "IN");
}

TEST(Tables, Table1bRendersDegenerateAndDefined) {
    const Table t = build_table1b(fixture().annotations());
    ASSERT_EQ(t.cells.size(), 14u);
    for (const auto& row : t.cells) {
        const double pct = std::stod(row[1]);
        EXPECT_GE(pct, 0.0);
        EXPECT_LE(pct, 100.0);
        const double alpha = std::stod(row[2]);
        EXPECT_LE(alpha, 1.0);
    }
}

TEST(Tables, Table1cBlankDiagonalAndUndefinedCells) {
    const Table t = build_table1c(fixture().annotations());
    ASSERT_EQ(t.cells.size(), 14u);
    ASSERT_EQ(t.columns.size(), 15u);
    for (int i = 0; i < 14; ++i) EXPECT_EQ(t.cells[static_cast<size_t>(i)][static_cast<size_t>(i) + 1], "");
    // json rows carry null for the diagonal
    EXPECT_TRUE(t.rows_json[0]["IN"].is_null());
}

TEST(Tables, Table2AlphaRangesAndConservativeBest) {
    MaceConfig cfg;
    cfg.iterations = 30;
    cfg.restarts = 4;
    cfg.seed = 9;
    const Table t = build_table2(fixture().annotations(), cfg);
    ASSERT_EQ(t.cells.size(), 14u);
    EXPECT_EQ(t.columns, (std::vector<std::string>{"dimension", "liberal", "majority", "conservative"}));
    for (const auto& row : t.rows_json) {
        EXPECT_LE(row["conservative"].get<double>(), 1.0 + 1e-12);
        EXPECT_LE(row["liberal"].get<double>(), row["conservative"].get<double>() + 1.0);  // sanity bounds
    }
}

TEST(Tables, Table5ContainsBaselinesAndHuman) {
    const LabelMatrix gold = aggregate_strategy(fixture().annotations(), Strategy::conservative);
    const FoldPlan plan = make_folds(gold, 31, 2, 3);
    const Table t = build_table5(fixture(), gold, plan, 31);
    ASSERT_EQ(t.cells.size(), 3u);
    EXPECT_EQ(t.cells[0][0], "random baseline");
    EXPECT_EQ(t.cells[1][0], "majority baseline");
    EXPECT_EQ(t.cells[2][0], "human performance");
    for (const auto& row : t.rows_json) {
        const double macro = row["macro"].get<double>();
        EXPECT_GE(macro, 0.0);
        EXPECT_LE(macro, 1.0);
    }
    // humans agree with conservative gold more than the random baseline does
    EXPECT_GT(t.rows_json[2]["macro"].get<double>(), t.rows_json[0]["macro"].get<double>());
}

TEST(Tables, SourceTablesPartitionTheCorpus) {
    size_t total = 0;
    for (const auto& sources :
         std::vector<std::set<Source>>{{Source::dagstuhl, Source::ukpconvarg2},
                                       {Source::gaq_debates},
                                       {Source::gaq_qa},
                                       {Source::gaq_reviews}}) {
        const Table t = build_source_table("t", fixture(), sources);
        total += std::stoul(t.cells[0][1]) + std::stoul(t.cells[0][2]);
    }
    EXPECT_EQ(total, fixture().arguments().size());
}

TEST(Render, CsvEscapesAndMarkdownShape) {
    Table t;
    t.name = "demo";
    t.columns = {"a", "b"};
    t.cells = {{"plain", "with,comma"}, {"quote\"inside", "x"}};
    t.rows_json = json::array();
    const std::string csv = render_table(t, ReportFormat::csv);
    EXPECT_NE(csv.find("\"with,comma\""), std::string::npos);
    EXPECT_NE(csv.find("\"quote\"\"inside\""), std::string::npos);
    const std::string md = render_table(t, ReportFormat::md);
    EXPECT_EQ(md.rfind("| a | b |", 0), 0u);
}

TEST(Render, JsonCarriesNullForUndefined) {
    CorrelationMatrix m;
    m.row_labels = {"r"};
    m.col_labels = {"c1", "c2"};
    m.cells = {{Corr{0.5, true}, Corr{}}};
    const Table t = table_from_matrix("t", m, "row", false);
    EXPECT_EQ(t.cells[0][2], "0.00");  // undefined renders as 0.00
    EXPECT_TRUE(t.rows_json[0]["c2"].is_null());
    EXPECT_NEAR(t.rows_json[0]["c1"].get<double>(), 0.5, 1e-12);
    const std::string out = render_table(t, ReportFormat::json_fmt);
    EXPECT_NE(out.find("null"), std::string::npos);
}

TEST(Golden, ReportOutputsStable) {
    check_golden("table1a.csv", render_table(build_table1a(fixture().annotations()), ReportFormat::csv));
    check_golden("table1b.csv", render_table(build_table1b(fixture().annotations()), ReportFormat::csv));
    check_golden("table1c.csv", render_table(build_table1c(fixture().annotations()), ReportFormat::csv));
    check_golden("table3.csv", render_table(build_table3(fixture()), ReportFormat::csv));
    check_golden("table4.csv", render_table(build_table4(fixture()), ReportFormat::csv));
    check_golden("table7.csv", render_table(build_table7(fixture()), ReportFormat::csv));
    check_golden("stats.md", render_table(build_stats_table(fixture(), GroupBy::genre), ReportFormat::md));
    check_golden("table1.md", render_table(build_corpus_table("table1", fixture().annotations()),
                                           ReportFormat::md));
}

TEST(Golden, DeterministicAcrossRuns) {
    const CorpusStore again = testutil::synthetic_store(120, 424242);
    EXPECT_EQ(render_table(build_table1c(again.annotations()), ReportFormat::csv),
              render_table(build_table1c(fixture().annotations()), ReportFormat::csv));
    MaceConfig cfg;
    cfg.iterations = 20;
    cfg.restarts = 3;
    cfg.seed = 77;
    EXPECT_EQ(render_table(build_table2(again.annotations(), cfg), ReportFormat::csv),
              render_table(build_table2(fixture().annotations(), cfg), ReportFormat::csv));
}
