#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "exonscan/cli.hpp"

using namespace exonscan;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::path(EXONSCAN_TEST_TMPDIR) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

/// Value column of a "#metric\tvalue" report.
std::string metric(const std::string& report, const std::string& key) {
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + "\t", 0) == 0) return line.substr(key.size() + 1);
    }
    return {};
}

} // namespace

TEST_F(CliTest, StatsFraction) {
    spit(path("a.tsv"), "#seq_id\tstart\tend\ns\t1\t10\ns\t1\t50\ns\t1\t100\ns\t1\t400\n");
    auto r = run_cli({"stats", "--annot", path("a.tsv"), "--out", path("h.tsv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(metric(r.out, "fraction"), "0.500000");
    EXPECT_EQ(metric(r.out, "in_range"), "2");
    EXPECT_EQ(metric(r.out, "total"), "4");
    EXPECT_EQ(slurp(path("h.tsv")), "#length\tcount\n10\t1\n50\t1\n100\t1\n400\t1\n");

    auto narrow = run_cli({"stats", "--annot", path("a.tsv"), "--lo", "50", "--hi", "50"});
    EXPECT_EQ(metric(narrow.out, "fraction"), "0.250000");
}

TEST_F(CliTest, UsageErrors) {
    auto none = run_cli({});
    EXPECT_EQ(none.code, 1);
    EXPECT_NE(none.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
    EXPECT_EQ(run_cli({"stats", "--annot", "x", "--bogus"}).code, 1);
    EXPECT_EQ(run_cli({"stats"}).code, 1); // missing required flag
    EXPECT_EQ(run_cli({"scan", "--fasta", "x", "--window", "10"}).code, 1);
    EXPECT_EQ(run_cli({"train", "--fasta", "x", "--annot", "y", "--out-model", "z", "--lambda", "0"}).code, 1);
    EXPECT_EQ(run_cli({"eval", "--truth", "a", "--pred-scored", "b", "--fasta", "c", "--convention", "x"}).code, 1);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, DataErrors) {
    EXPECT_EQ(run_cli({"stats", "--annot", path("missing.tsv")}).code, 2);
    spit(path("bad.fa"), ">s\nACGTN\n");
    EXPECT_EQ(run_cli({"scan", "--fasta", path("bad.fa")}).code, 2);
    spit(path("ok.fa"), ">s\nACGTACGT\n");
    EXPECT_EQ(run_cli({"spectrum", "--fasta", path("ok.fa"), "--seq-id", "nope"}).code, 2);
    spit(path("bad.tsv"), "s\t5\n");
    EXPECT_EQ(run_cli({"stats", "--annot", path("bad.tsv")}).code, 2);
}

TEST_F(CliTest, PredictDefaults) {
    // The all-zero model labels every window +1, so exon-end windows fail.
    // Flanks shorter than a window leave the end unjudged, which isolates the
    // length bounds and the SNR threshold.
    const std::string flank(20, 'C');
    spit(path("m.txt"), [] {
        std::ostringstream m;
        save_model(m, SvmModel{});
        return m.str();
    }());
    auto region_count = [&](std::size_t len, std::vector<std::string> extra) {
        std::string exon;
        while (exon.size() < len) exon += "ATC";
        exon.resize(len);
        spit(path("p.fa"), ">p\n" + flank + "AG" + exon + "GT" + flank + "\n");
        std::vector<std::string> args = {"predict", "--fasta", path("p.fa"), "--model", path("m.txt"), "--all"};
        args.insert(args.end(), extra.begin(), extra.end());
        auto r = run_cli(args);
        EXPECT_EQ(r.code, 0) << r.err;
        return std::count(r.out.begin(), r.out.end(), '\n') - 1;
    };
    EXPECT_EQ(region_count(39, {}), 0);
    EXPECT_EQ(region_count(40, {}), 1);
    EXPECT_EQ(region_count(300, {}), 1);
    EXPECT_EQ(region_count(301, {}), 0);
    EXPECT_EQ(region_count(39, {"--min-len", "39"}), 1);

    // A 60-base ATC repeat has SNR 20 and is called at the default r0 = 2.
    std::string atc;
    for (int i = 0; i < 20; ++i) atc += "ATC";
    spit(path("e.fa"), ">e\n" + flank + "AG" + atc + "GT" + flank + "\n");
    auto exon = run_cli({"predict", "--fasta", path("e.fa"), "--model", path("m.txt")});
    EXPECT_EQ(exon.out, std::string(kPredictionHeader) + "\ne\t23\t82\t20.000000\n");
    auto strict = run_cli({"predict", "--fasta", path("e.fa"), "--model", path("m.txt"), "--r0", "20.5"});
    EXPECT_EQ(strict.out, std::string(kPredictionHeader) + "\n");

    // A C run has SNR 0: only listed with --all, or called once r0 = 0.
    spit(path("q.fa"), ">q\n" + flank + "AG" + std::string(60, 'C') + "GT" + flank + "\n");
    auto called = run_cli({"predict", "--fasta", path("q.fa"), "--model", path("m.txt")});
    EXPECT_EQ(called.out, std::string(kPredictionHeader) + "\n");
    auto all = run_cli({"predict", "--fasta", path("q.fa"), "--model", path("m.txt"), "--all"});
    EXPECT_EQ(all.out, std::string(kPredictionHeader) + "\nq\t23\t82\t0.000000\n");
    auto zero = run_cli({"predict", "--fasta", path("q.fa"), "--model", path("m.txt"), "--r0", "0"});
    EXPECT_EQ(zero.out, all.out);
}

TEST_F(CliTest, SpectrumAndScan) {
    spit(path("s.fa"), ">a\nATGATGATG\n>b\nAAAAAAAAA\n");
    auto r = run_cli({"spectrum", "--fasta", path("s.fa"), "--seq-id", "a"});
    ASSERT_EQ(r.code, 0) << r.err;
    // ATGATGATG: each indicator is a comb with period 3, so power sits at k=0,3,6.
    EXPECT_EQ(r.out,
              "#k\tpower\n0\t27.000000\n1\t0.000000\n2\t0.000000\n3\t27.000000\n4\t0.000000\n5\t0.000000\n"
              "6\t27.000000\n7\t0.000000\n8\t0.000000\n");

    auto s = run_cli({"scan", "--fasta", path("s.fa"), "--window", "9", "--out", path("scan.tsv")});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(slurp(path("scan.tsv")), "#seq_id\toffset\tsnr\na\t1\t3.000000\nb\t1\t0.000000\n");
}

TEST_F(CliTest, RoundTripIsDeterministic) {
    auto pipeline = [&](const std::string& tag) {
        const std::string prefix = path("c" + tag);
        auto s = run_cli({"synth", "--out-prefix", prefix, "--seed", "5", "--n-seq", "4", "--intron-min", "300",
                          "--intron-max", "600"});
        EXPECT_EQ(s.code, 0) << s.err;
        auto t = run_cli({"train", "--fasta", prefix + ".fasta", "--annot", prefix + ".tsv", "--out-model",
                          path("m" + tag), "--epochs", "20"});
        EXPECT_EQ(t.code, 0) << t.err;
        auto p = run_cli({"predict", "--fasta", prefix + ".fasta", "--model", path("m" + tag), "--all", "--out",
                          path("p" + tag)});
        EXPECT_EQ(p.code, 0) << p.err;
        auto e = run_cli({"eval", "--truth", prefix + ".tsv", "--pred-scored", path("p" + tag), "--fasta",
                          prefix + ".fasta", "--out", path("roc" + tag)});
        EXPECT_EQ(e.code, 0) << e.err;
        return e.out;
    };
    const auto first = pipeline("1");
    const auto second = pipeline("2");
    EXPECT_EQ(first, second);
    for (const char* f : {"c%.fasta", "c%.tsv", "m%", "p%", "roc%"}) {
        std::string a = f, b = f;
        a.replace(a.find('%'), 1, "1");
        b.replace(b.find('%'), 1, "2");
        EXPECT_EQ(slurp(path(a)), slurp(path(b))) << f;
        EXPECT_FALSE(slurp(path(a)).empty()) << f;
    }

    for (const char* key : {"tp", "tn", "fp", "fn", "sn", "sp", "x_paper", "x_standard", "auc_paper", "auc_standard"}) {
        EXPECT_FALSE(metric(first, key).empty()) << key;
    }
    EXPECT_GT(std::stod(metric(first, "sn")), 0.5);
    const auto roc = slurp(path("roc1"));
    EXPECT_EQ(roc.rfind("#convention\tx\ty\tthreshold\n", 0), 0u);
    EXPECT_NE(roc.find("\npaper\t"), std::string::npos);
    EXPECT_NE(roc.find("\nstandard\t"), std::string::npos);

    // Synth with a config file, overridden by a flag.
    spit(path("cfg"), "# small corpus\nseed = 9\nn_sequences=2\nexons_per_sequence=1\n");
    auto c = run_cli({"synth", "--out-prefix", path("cfg_out"), "--config", path("cfg"), "--n-seq", "3"});
    ASSERT_EQ(c.code, 0) << c.err;
    auto annots = parse_annotations(slurp(path("cfg_out.tsv")));
    ASSERT_EQ(annots.size(), 3u);
    EXPECT_EQ(annots[0].seq_id, "synth9_1");
}

TEST_F(CliTest, EvalHandExample) {
    spit(path("t.fa"), ">s\n" + std::string(20, 'A') + "\n");
    spit(path("t.tsv"), "#seq_id\tstart\tend\ns\t6\t15\n");
    spit(path("p.tsv"), std::string(kPredictionHeader) + "\ns\t1\t10\t3\n");
    auto r = run_cli({"eval", "--truth", path("t.tsv"), "--pred-scored", path("p.tsv"), "--fasta", path("t.fa"),
                      "--convention", "standard", "--out", path("roc.tsv")});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* k : {"tp", "tn", "fp", "fn"}) EXPECT_EQ(metric(r.out, k), "5") << k;
    EXPECT_EQ(metric(r.out, "sn"), "0.500000");
    EXPECT_EQ(metric(r.out, "sp"), "0.500000");
    EXPECT_EQ(metric(r.out, "x_standard"), "0.500000");
    EXPECT_EQ(metric(r.out, "auc_standard"), "0.500000");
    EXPECT_EQ(metric(r.out, "auc_paper"), "");
    EXPECT_EQ(slurp(path("roc.tsv")),
              "#convention\tx\ty\tthreshold\nstandard\t0.000000\t0.000000\tinf\n"
              "standard\t0.500000\t0.500000\t3.000000\nstandard\t1.000000\t1.000000\t-inf\n");

    // Above the operating point nothing is called.
    auto high = run_cli({"eval", "--truth", path("t.tsv"), "--pred-scored", path("p.tsv"), "--fasta", path("t.fa"),
                         "--r0", "5"});
    EXPECT_EQ(metric(high.out, "tp"), "0");
    EXPECT_EQ(metric(high.out, "sp"), "NA");
}
