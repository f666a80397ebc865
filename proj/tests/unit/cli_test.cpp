#include <hipn/cli.hpp>
#include <hipn/xpn_format.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = hipn::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const char* name)
{
    return std::string(HIPN_SAMPLE_DIR) + "/" + name;
}

class CliFiles : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("hipn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const char* name) const { return (dir_ / name).string(); }
    std::string write(const char* name, const std::string& text) const
    {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    fs::path dir_;
};

}  // namespace

TEST(Cli, TerminateSelfLoop)
{
    CliRun r = run({"terminate", sample("self_loop.xpn")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "NON-TERMINATING\nstem: \npump: spin\n");
}

TEST(Cli, ClassifyReportsEveryField)
{
    CliRun r = run({"classify", sample("reset_gadget.xpn")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("class: "), std::string::npos);
    EXPECT_NE(r.out.find("special arcs: R"), std::string::npos);
    EXPECT_NE(r.out.find("termination decidable: yes"), std::string::npos);
}

TEST(Cli, FirePrintsEachMarking)
{
    CliRun r = run({"fire", sample("reset_gadget.xpn"), "t", "fill"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "start: r=2 a=1\nt: b=1\nfill: r=2 a=1\n");
    CliRun bad = run({"fire", sample("reset_gadget.xpn"), "fill"});
    EXPECT_EQ(bad.code, 2);
}

TEST_F(CliFiles, CompiledMachineIsCoverable)
{
    const std::string net = path("m.xpn");
    CliRun c = run({"compile", "minsky", sample("one_inc.cm"), "-o", net});
    ASSERT_EQ(c.code, 0) << c.err;
    const std::string trace = path("m.trace");
    CliRun e = run({"explore", "cover", net, "--target", "accept=1", "--trace-out", trace});
    EXPECT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(e.out.rfind("COVERABLE\n", 0), 0u);
    ASSERT_TRUE(fs::exists(trace));
    CliRun dot = run({"export-dot", net, "--trace", trace});
    EXPECT_EQ(dot.code, 0) << dot.err;
    EXPECT_NE(dot.out.find("color=red"), std::string::npos);
}

TEST_F(CliFiles, BudgetExhaustionIsInconclusive)
{
    const std::string net = write("grow.xpn", "places: p\ntrans t: ; out p\n");
    CliRun r = run({"explore", "reach", net, "--target", "p=1000", "--max-steps", "10"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out.rfind("UNKNOWN (budget exhausted)\n", 0), 0u);
}

TEST_F(CliFiles, MalformedNetReportsLineAndColumn)
{
    const std::string net = write("bad.xpn", "places: a\ntrans t: in b\n");
    CliRun r = run({"validate", net});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find(net + ":2:13:"), std::string::npos) << r.err;
}

TEST(Cli, UnknownFlagIsAUsageError)
{
    CliRun r = run({"validate", "--bogus", sample("self_loop.xpn")});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"validate", "/nonexistent/net.xpn"}).code, 2);
}

TEST_F(CliFiles, DotOfAnEmptyNet)
{
    const std::string net = write("empty.xpn", "");
    CliRun r = run({"export-dot", net});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "digraph net {\n  rankdir=LR;\n}\n");
}

TEST(Cli, DotShowsResetEdges)
{
    CliRun r = run({"export-dot", sample("reset_gadget.xpn")});
    ASSERT_EQ(r.code, 0);
    std::size_t resets = 0;
    for (std::size_t at = r.out.find("label=\"R\""); at != std::string::npos; at = r.out.find("label=\"R\"", at + 1))
        ++resets;
    EXPECT_EQ(resets, 1u);
}

TEST_F(CliFiles, DotOfACompiledInstance)
{
    const std::string inst = write("id.pos", "2\n1 -2\n0 3\n1 1\n");
    const std::string net = path("id.xpn");
    ASSERT_EQ(run({"compile", "positivity", inst, "-o", net}).code, 0);
    CliRun r = run({"export-dot", net});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("label=\"G'\\n0\""), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("arrowhead=odot"), std::string::npos);
    EXPECT_NE(r.out.find("style=dashed"), std::string::npos);
    EXPECT_EQ(r.out, run({"export-dot", net}).out);
}

TEST_F(CliFiles, TransformWritesTheMapAndIsDeterministic)
{
    const std::string a = path("a.xpn"), b = path("b.xpn"), map = path("a.map");
    ASSERT_EQ(run({"transform", "hir-elim", sample("reset_gadget.xpn"), "-o", a, "--map", map}).code, 0);
    ASSERT_EQ(run({"transform", "hir-elim", sample("reset_gadget.xpn"), "-o", b}).code, 0);
    std::ifstream fa(a), fb(b), fm(map);
    std::stringstream sa, sb, sm;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    sm << fm.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_NE(sa.str().find("# query: "), std::string::npos);
    EXPECT_NE(sm.str().find("t.idle = 1"), std::string::npos);
    EXPECT_NO_THROW(hipn::parse_xpn(sa.str()));
}

TEST_F(CliFiles, ReachToDlfNeedsATarget)
{
    EXPECT_EQ(run({"transform", "reach-to-dlf", sample("reset_gadget.xpn")}).code, 2);
    CliRun r = run({"transform", "reach-to-dlf", sample("reset_gadget.xpn"), "--target", "b=1"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# query marking: rd.hit=1"), std::string::npos);
}
