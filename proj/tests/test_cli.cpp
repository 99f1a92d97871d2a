/* SPDX-License-Identifier: Apache-2.0 */

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string &args, bool merge_stderr = false) {
    std::string cmd = std::string(ARITHDYN_CLI) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return {-1, ""};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string &name) {
    fs::path dir = fs::temp_directory_path() / "arithdyn-cli-tests";
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path &p, const std::string &text) { std::ofstream(p, std::ios::binary) << text; }

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Cli, Height) {
    auto r = run("height --map 'P1 -> P1 : [x^2, y^2]' --point 2:1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("point: 1:1/2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("h = 0.69314718056"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("hhat = 0.69314718056"), std::string::npos) << r.out;
}

TEST(Cli, DynDegreeAndClassify) {
    auto m = run("dyn-degree --matrix '1,1;1,0'");
    EXPECT_EQ(m.code, 0);
    EXPECT_NE(m.out.find("delta = 2.61803398875"), std::string::npos) << m.out;
    auto c = run("classify --map 'P1:[x^2 - y^2, y^2]' --point 1:1");
    EXPECT_EQ(c.code, 0);
    EXPECT_NE(c.out.find("class: preperiodic"), std::string::npos) << c.out;
    auto a = run("arith-degree --map 'P1xP1:[x^2, y^2];[x^3, y^3]' --point '1:2;1:1'");
    EXPECT_EQ(a.code, 0);
    EXPECT_NE(a.out.find("alpha = 2\n"), std::string::npos) << a.out;
}

TEST(Cli, FamilyMaximum) {
    auto r = run("family-ubc --family 'x^2 + c' --c frac:5 --d 1 --B log100", true);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("max count: 6\n"), std::string::npos) << r.out;
}

TEST(Cli, SearchReportVerifiesAndTamperingIsCaught) {
    auto csv = scratch("zfd.csv");
    auto r = run("zfd --map 'P1:[16*x^2 - 21*y^2, 16*y^2]' --d 1 --B log100 --csv " + csv.string());
    ASSERT_EQ(r.code, 0);
    auto v = run("verify " + csv.string());
    EXPECT_EQ(v.code, 0) << v.out;
    EXPECT_NE(v.out.find("rows: 9  failures: 0"), std::string::npos) << v.out;

    std::string text = slurp(csv);
    auto pos = text.find("1:-4/5");
    ASSERT_NE(pos, std::string::npos);
    auto bad = scratch("zfd-bad.csv");
    write(bad, text.replace(pos, 6, "1:-4/7"));
    EXPECT_EQ(run("verify " + bad.string()).code, 1);
}

TEST(Cli, TorsionReportVerifies) {
    auto csv = scratch("tors.csv");
    ASSERT_EQ(run("ell-torsion --curve 'E: 0 1' --csv " + csv.string()).code, 0);
    auto v = run("verify " + csv.string());
    EXPECT_EQ(v.code, 0) << v.out;
    EXPECT_NE(v.out.find("rows: 6"), std::string::npos) << v.out;
}

TEST(Cli, OutputIndependentOfWorkers) {
    const std::string cmd = "zfd --map 'P1:[x^2 - y^2, y^2]' --d 2 --B log3";
    auto a = run("--workers 1 " + cmd), b = run("--workers 4 " + cmd);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
}

TEST(Cli, ConfigFile) {
    auto cfg = scratch("height.cfg");
    write(cfg, "# defaults\nmap = P1:[x^2, y^2]\npoint = 3:1\n");
    auto r = run("height --config " + cfg.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("point: 1:1/3"), std::string::npos) << r.out;
    // Explicit flags win over the file.
    auto o = run("height --config " + cfg.string() + " --point 5:1");
    EXPECT_NE(o.out.find("point: 1:1/5"), std::string::npos) << o.out;

    auto bad = scratch("bad.cfg");
    write(bad, "map = P1:[x^2, y^2]\n  colour = red\n");
    auto e = run("height --config " + bad.string(), true);
    EXPECT_EQ(e.code, 2);
    EXPECT_NE(e.out.find("line 2, column 3"), std::string::npos) << e.out;
}

TEST(Cli, ErrorsAndExitCodes) {
    auto bad = run("height --map 'P1:[x^2, q]' --point 1:1", true);
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.out.find("column"), std::string::npos) << bad.out;
    EXPECT_EQ(run("height --map 'P1:[x*y, y^2]' --point 1:1").code, 2);
    EXPECT_EQ(run("nonsense").code, 2);
    EXPECT_EQ(run("canonical-height --map 'P1:[x^2 + y^2, y^2]' --point 1:1 --tol 1e-12 --max-bits 64").code, 3);
    EXPECT_EQ(run("abelian-check --curve 'E: 0 8' --matrix '2,0;0,3' --generators '(1,3)' --B log1000").code, 0);
    auto sweep = run("ell-torsion --a 0 --b=-3..3", true);
    EXPECT_EQ(sweep.code, 0);
    EXPECT_NE(sweep.out.find("E: 0 0  skipped: singular"), std::string::npos) << sweep.out;
    EXPECT_NE(sweep.out.find("max order: 6"), std::string::npos) << sweep.out;
}
